"""Smoke test for the ssdesign_py extension.

Build and install first, e.g. `maturin develop -m crates/python/Cargo.toml`.
"""

import json
import math

import ssdesign_py as sd


def main():
    assert "fig4" in sd.presets()

    free = sd.Job.from_preset("free")
    m11, m12, m21, m22 = free.transfer_matrix(1.3)
    assert abs(m11 - 1) < 1e-9 and abs(m22 - 1) < 1e-9 and abs(m12) < 1e-9 and abs(m21) < 1e-9

    job = sd.Job.from_preset("fig4")
    assert job.prescribed == [(1.0, 2)]
    (u0,) = job.potential([0.0])
    assert abs(u0 - (1.75 + 2j)) < 1e-10, u0
    x = 0.7
    (w,) = job.base(0, [x])
    sech = 1 / math.cosh(x)
    assert abs(w - complex(-math.tanh(x) - 0.5 * sech, sech)) < 1e-10

    t, rl, rr = job.coefficients(1.7)
    assert abs(t) > 0

    report = json.loads(job.find_ss())
    assert report["recovered"], report
    (ss,) = report["found"]
    assert abs(ss["k0"] - 1.0) < 1e-3 and ss["order"] == 2

    cfg = json.loads(sd.preset_json("fig1a"))
    cfg["truncation"]["L"] = 1.0
    try:
        sd.Job.from_json(json.dumps(cfg)).scan()
    except sd.SsdesignError as e:
        name, code, _ = e.args
        assert (name, code) == ("TailTooFat", 4), e.args
    else:
        raise AssertionError("expected TailTooFat")

    try:
        sd.Job.from_json('{"construction": {"kind": "self_dual", "k1": 2.5, "a0": 0}}')
    except sd.SsdesignError as e:
        assert e.args[1] == 2, e.args
    else:
        raise AssertionError("expected a config error")

    outcome = json.loads(sd.Job.from_preset("fig1a").verify())
    failed = [c["name"] for c in outcome["report"]["checks"] if not c["pass"] and not c["informational"]]
    assert not failed, failed
    print("smoke test passed")


if __name__ == "__main__":
    main()
