use num_complex::Complex64 as C64;
use proptest::prelude::*;
use ssdesign::construct::{Construction, Potential};
use ssdesign::jobs::JobConfig;
use ssdesign::numerics::{ComplexProfile, Jet, RealGrid};
use ssdesign::scatter::{transfer_matrix, TruncationSpec, DEFAULT_TOL};
use ssdesign::verify::{cross_base_consistency, pt_symmetry_residual, VerificationReport};

fn well(v0: C64, a: f64) -> Potential {
    let p = ComplexProfile::analytic(move |x, len| Jet::constant(if x.abs() < a { v0 } else { C64::new(0.0, 0.0) }, len))
        .with_breakpoint(-a)
        .with_breakpoint(a);
    Potential::from_profile(p)
}

fn gaussian(c: C64) -> Potential {
    Potential::from_profile(ComplexProfile::analytic(move |x, len| {
        let t = Jet::var(x, len);
        (-(t.square())).exp().scale(c)
    }))
}

fn complex() -> impl Strategy<Value = C64> {
    (-3.0..3.0f64, -3.0..3.0f64).prop_map(|(a, b)| C64::new(a, b))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn det_is_one_and_m11_mirrors_m22(c in complex(), k in 0.3..4.0f64) {
        let u = gaussian(c);
        let t = TruncationSpec::for_potential(&u, Some(10.0)).unwrap();
        let m = transfer_matrix(&u, k, &t, DEFAULT_TOL).unwrap();
        let mm = transfer_matrix(&u, -k, &t, DEFAULT_TOL).unwrap();
        prop_assert!(m.det_residual() < 1e-8, "{m:?}");
        prop_assert!((m.m11 - mm.m22).norm() / (1.0 + m.m11.norm()) < 1e-7);
    }

    #[test]
    fn reversed_potential_swaps_reflection(v0 in complex(), a in 0.2..2.0f64, shift in 0.0..0.5f64, k in 0.3..3.0f64) {
        // A well displaced by `shift` and its mirror image.
        let p = well(v0, a);
        let right = Potential::from_profile(ComplexProfile::analytic({
            let p = p.profile.clone();
            move |x, len| p.jet_lossy(x - shift, len)
        }).with_breakpoint(shift - a).with_breakpoint(shift + a));
        let left = Potential::from_profile(ComplexProfile::analytic({
            let p = p.profile.clone();
            move |x, len| p.jet_lossy(x + shift, len)
        }).with_breakpoint(-shift - a).with_breakpoint(-shift + a));
        let t = TruncationSpec::for_potential(&right, Some(a + 1.0)).unwrap();
        let mr = transfer_matrix(&right, k, &t, DEFAULT_TOL).unwrap();
        let ml = transfer_matrix(&left, k, &t, DEFAULT_TOL).unwrap();
        // Parity maps M to [[m22, -m21], [-m12, m11]] of the reflected potential.
        let scale = 1.0 + mr.entries().iter().map(|z| z.norm()).fold(0.0, f64::max);
        prop_assert!((mr.m22 - ml.m22).norm() / scale < 1e-6);
        prop_assert!((mr.m12 + ml.m21).norm() / scale < 1e-6);
    }

    #[test]
    fn real_amplitude_self_dual_is_pt_symmetric(k1 in 0.5..3.5f64, a0 in prop_oneof![-3.0..-0.2f64, 0.2..3.0f64]) {
        let c = Construction::SelfDual { k1, a0: C64::from(a0), a1: C64::new(0.0, 0.0) }.build().unwrap();
        let g = RealGrid::new(-8.0, 8.0, 401).unwrap();
        prop_assert!(pt_symmetry_residual(&c.potential, &g).unwrap() <= 1e-10);
    }

    #[test]
    fn both_bases_generate_the_same_potential(
        k1 in 0.5..3.0f64,
        dk in 0.3..2.0f64,
        a0 in complex().prop_filter("nonzero", |z| z.norm() > 0.2),
        a1 in complex(),
    ) {
        let c = Construction::TwoSs { k1, k2: k1 + dk, a0, a1 }.build();
        // Some parameter sets legitimately put a zero of chi on the real axis.
        if let Ok(c) = c {
            let g = RealGrid::new(-8.0, 8.0, 401).unwrap();
            prop_assert!(cross_base_consistency(&c.potential.provenance, &g).unwrap() <= 1e-7);
        }
    }

    #[test]
    fn report_pass_iff_within_tolerance(res in 0.0..2.0f64, tol in 1e-3..1.5f64, info in any::<bool>()) {
        let mut r = VerificationReport::new();
        if info {
            r.push_info("x", res, tol, "d");
        } else {
            r.push("x", res, tol, "d");
        }
        prop_assert_eq!(r.checks[0].pass, res <= tol);
        prop_assert_eq!(r.all_pass(), info || res <= tol);
    }

    #[test]
    fn config_round_trips(k1 in 0.1..5.0f64, a in complex(), n in 2usize..2000, l in proptest::option::of(1.0..300.0f64)) {
        let mut cfg = JobConfig::new(Construction::SelfDual { k1, a0: a, a1: C64::new(0.5, -0.5) });
        cfg.scan.n = n;
        cfg.truncation.l = l;
        let back = JobConfig::from_json(&cfg.to_json());
        if a == C64::new(0.0, 0.0) {
            prop_assert!(back.is_err());
        } else {
            prop_assert_eq!(back.unwrap(), cfg);
        }
    }
}
