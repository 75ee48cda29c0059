use num_complex::Complex64 as C64;

use super::{JobConfig, Output, ScanConfig, TruncationConfig};
use crate::construct::Construction;
use crate::scatter::DEFAULT_SCAN_POINTS;

pub const PRESET_NAMES: [&str; 9] = ["fig1a", "fig1d", "fig2", "fig3", "fig4", "fig5", "fig6", "fig7", "free"];

fn job(name: &str, construction: Construction, k_min: f64, k_max: f64, l: Option<f64>) -> JobConfig {
    let mut cfg = JobConfig::new(construction);
    cfg.name = Some(name.to_string());
    cfg.scan = ScanConfig { k_min, k_max, n: DEFAULT_SCAN_POINTS };
    cfg.truncation = TruncationConfig { l };
    cfg.outputs = vec![Output::Potential, Output::Bases, Output::Spectrum, Output::Report];
    cfg
}

/// Compiled-in parameter sets.
pub fn preset(name: &str) -> Option<JobConfig> {
    let zero = C64::new(0.0, 0.0);
    let cfg = match name {
        "fig1a" => {
            let mut c = job("fig1a", Construction::SelfDual { k1: 2.5, a0: C64::from(2.0), a1: zero }, -4.0, 4.0, Some(20.0));
            c.pt_symmetric = true;
            c
        }
        "fig1d" => job(
            "fig1d",
            Construction::SelfDual { k1: 2.5, a0: C64::new(2.0, 1.0), a1: C64::new(1.0, -1.0) },
            -4.0,
            4.0,
            Some(20.0),
        ),
        "fig2" => job("fig2", Construction::TwoSs { k1: 2.5, k2: 3.0, a0: C64::from(1.0), a1: zero }, -4.0, 4.0, Some(20.0)),
        "fig3" => job("fig3", Construction::SingularNode { k1: 0.5, k2: 3.0 }, -4.0, 4.0, Some(20.0)),
        "fig4" => job("fig4", Construction::SecondOrder { k1: 1.0 }, -3.0, 3.0, Some(20.0)),
        "fig5" => job("fig5", Construction::PseudoHermitian { a: 1.0, k1: 0.5, k2: -0.5 }, -3.0, 3.0, Some(200.0)),
        "fig6" => job("fig6", Construction::PseudoHermitian { a: 1.0, k1: 2.5, k2: -0.5 }, -3.0, 3.0, Some(200.0)),
        "fig7" => job(
            "fig7",
            Construction::ThreeSs { k1: 1.0, k2: 2.0, k3: 3.0, z: C64::new(-0.5, -0.1) },
            0.5,
            3.5,
            Some(20.0),
        ),
        "free" => {
            let mut c = job("free", Construction::Free, -4.0, 4.0, Some(20.0));
            c.pt_symmetric = true;
            c
        }
        _ => return None,
    };
    Some(cfg)
}
