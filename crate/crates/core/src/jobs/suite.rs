use serde::Serialize;

use super::{JobConfig, Result, Tolerances};
use crate::construct::{Constructed, Construction, PrescribedSs};
use crate::numerics::{DecayClass, RealGrid};
use crate::scatter::{
    locate_in_scan, pseudo_hermitian_residual, scan_spectrum_with, transfer_matrix, ScanPoint, SpectralSingularity,
    ScatterError, TransferMatrix, TruncationSpec, DEFAULT_TOL,
};
use crate::verify::{
    asymptote_check, asymptote_shrink, cross_base_consistency, fd_transfer_oracle, pt_symmetry_residual,
    ss_solution_fd_residual, ss_solution_residual, VerificationReport, VerifyError,
};

/// A constructed potential with its truncation and tolerances resolved.
#[derive(Clone, Debug)]
pub struct Built {
    pub config: JobConfig,
    pub constructed: Constructed,
    pub trunc: TruncationSpec,
    pub tolerances: Tolerances,
}

impl Built {
    pub fn new(config: &JobConfig) -> Result<Built> {
        config.validate()?;
        let tolerances = config.tolerances()?;
        let constructed = config.construction.build()?;
        let trunc = TruncationSpec::for_potential(&constructed.potential, config.truncation.l)?;
        Ok(Built { config: config.clone(), constructed, trunc, tolerances })
    }
}

/// Largest truncation floor tolerated, as a fraction of the scan's `max |k|`.
pub const MAX_FLOOR_FRACTION: f64 = 0.05;

/// The configured scan with `|k|` below the truncation floor skipped. A
/// floor that would remove more than a small band around `k = 0` is a
/// truncation failure.
pub fn scan(built: &Built) -> Result<Vec<ScanPoint>> {
    let floor = built.trunc.min_abs_k();
    let reach = built.config.scan.k_min.abs().max(built.config.scan.k_max.abs());
    if floor > MAX_FLOOR_FRACTION * reach {
        let k = MAX_FLOOR_FRACTION * reach;
        let limit = built.trunc.tail_fraction * k * k;
        return Err(ScatterError::TailTooFat { k, tail_bound: built.trunc.tail_bound, limit }.into());
    }
    let range = built.config.scan_range().with_min_abs_k(floor);
    Ok(scan_spectrum_with(&built.constructed.potential, &range, &built.trunc, DEFAULT_TOL)?)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SsMatch {
    pub k: f64,
    pub order: u32,
    pub found_k0: Option<f64>,
    pub found_order: Option<u32>,
    pub distance: f64,
}

/// Prescribed and recovered spectral singularities side by side.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SsReport {
    pub name: Option<String>,
    pub construction: &'static str,
    #[serde(rename = "L")]
    pub l: f64,
    pub prescribed: Vec<PrescribedSs>,
    pub found: Vec<SpectralSingularity>,
    pub matches: Vec<SsMatch>,
    /// Found SSs not matched to any prescribed one.
    pub extra: Vec<f64>,
    pub recovered: bool,
}

impl SsReport {
    pub fn max_distance(&self) -> f64 {
        self.matches.iter().map(|m| m.distance).fold(0.0, f64::max)
    }

    pub fn order_mismatches(&self) -> usize {
        self.matches.iter().filter(|m| m.found_order != Some(m.order)).count()
    }

    /// Largest `|m22|` among the matched roots.
    pub fn max_residual(&self) -> f64 {
        self.matches
            .iter()
            .filter_map(|m| m.found_k0)
            .filter_map(|k0| self.found.iter().find(|s| s.k0 == k0))
            .map(|s| s.residual)
            .fold(0.0, f64::max)
    }
}

fn ss_report(built: &Built, points: &[ScanPoint]) -> Result<SsReport> {
    let u = &built.constructed.potential;
    let found = locate_in_scan(u, points, &built.trunc, built.config.threshold)?;
    let tol = built.tolerances.ss_location;
    let mut used = vec![false; found.len()];
    let matches: Vec<SsMatch> = u
        .prescribed_ss
        .iter()
        .map(|p| {
            let best = found
                .iter()
                .enumerate()
                .min_by(|a, b| (a.1.k0 - p.k).abs().total_cmp(&(b.1.k0 - p.k).abs()));
            match best {
                Some((i, s)) if (s.k0 - p.k).abs() <= tol => {
                    used[i] = true;
                    SsMatch { k: p.k, order: p.order, found_k0: Some(s.k0), found_order: s.order, distance: (s.k0 - p.k).abs() }
                }
                _ => SsMatch { k: p.k, order: p.order, found_k0: None, found_order: None, distance: f64::INFINITY },
            }
        })
        .collect();
    let extra: Vec<f64> = found.iter().zip(&used).filter(|(_, &u)| !u).map(|(s, _)| s.k0).collect();
    let recovered = matches.iter().all(|m| m.distance <= tol && m.found_order == Some(m.order)) && extra.is_empty();
    Ok(SsReport {
        name: built.config.name.clone(),
        construction: built.config.construction.kind(),
        l: built.trunc.l,
        prescribed: u.prescribed_ss.clone(),
        found,
        matches,
        extra,
        recovered,
    })
}

/// Scan, locate, estimate orders, and compare with the prescribed set.
pub fn find_ss(built: &Built) -> Result<SsReport> {
    ss_report(built, &scan(built)?)
}

fn mirrored(built: &Built, points: &[ScanPoint]) -> Result<Vec<TransferMatrix>> {
    let u = &built.constructed.potential;
    points
        .iter()
        .map(|p| {
            let j = points.partition_point(|q| q.k < -p.k - 1e-12);
            match points.get(j) {
                Some(q) if (q.k + p.k).abs() <= 1e-12 => Ok(q.matrix),
                _ => Ok(transfer_matrix(u, -p.k, &built.trunc, DEFAULT_TOL)?),
            }
        })
        .collect()
}

const OFF_RESONANCE: [f64; 5] = [1.7, 1.3, 2.1, 0.9, 3.7];
const FD_ORACLE_POINTS: usize = 200_001;
const FD_STEP: f64 = 5e-4;

/// Outcome of the verification suite.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyOutcome {
    pub ss: SsReport,
    pub report: VerificationReport,
}

/// Runs every applicable check on a built job.
pub fn verify(built: &Built) -> Result<VerifyOutcome> {
    let u = &built.constructed.potential;
    let tol = &built.tolerances;
    let grid = built.config.grid()?;
    let glabel = format!("x in [{}, {}], n={}", grid.x_min, grid.x_max, grid.n);
    let mut r = VerificationReport::new();

    let bases = &u.provenance;
    if bases.len() >= 2 {
        r.push("cross_base_consistency", cross_base_consistency(bases, &grid)?, tol.cross_base, &glabel);
    }
    for (j, w) in bases.iter().enumerate() {
        let name = format!("w{}", j + 1);
        r.push(format!("ss_solution_residual[{name}]"), ss_solution_residual(u, w, &grid)?, tol.ss_solution, &glabel);
        r.push(
            format!("ss_solution_fd_residual[{name}]"),
            ss_solution_fd_residual(u, w, &grid, FD_STEP)?,
            tol.ss_solution_fd,
            format!("{glabel}, h={FD_STEP}"),
        );
        match w.profile.decay() {
            DecayClass::Exponential => {
                let (a, b) = asymptote_check(w, 20.0)?;
                r.push(format!("asymptote[{name}]"), a.max(b), tol.asymptote, "X = 20");
            }
            decay @ DecayClass::Algebraic { .. } => {
                let (a, b) = asymptote_shrink(w, 50.0)?;
                r.push_lower(format!("asymptote_decay[{name}]"), a.min(b), 0.5 * decay.doubling_factor(), "X = 50 vs 100");
            }
        }
    }

    let half = grid.x_max.abs().max(grid.x_min.abs());
    let sym = RealGrid::new(-half, half, grid.n).map_err(VerifyError::from)?;
    let pt = pt_symmetry_residual(u, &sym)?;
    let slabel = format!("x in [{}, {}], n={}", sym.x_min, sym.x_max, sym.n);
    if built.config.pt_symmetric {
        r.push("pt_symmetry", pt, tol.pt_symmetry, slabel);
    } else {
        r.push_info("pt_symmetry", pt, tol.pt_symmetry, slabel);
    }

    let points = scan(built)?;
    let klabel = format!("k in [{}, {}], n={}", built.config.scan.k_min, built.config.scan.k_max, built.config.scan.n);
    let det = points.iter().map(|p| p.matrix.det_residual()).fold(0.0, f64::max);
    r.push("det_m", det, tol.determinant, &klabel);
    let det_abs = points.iter().map(|p| (p.matrix.det() - 1.0).norm()).fold(0.0, f64::max);
    r.push_info("det_m_absolute", det_abs, tol.determinant, &klabel);
    let mirror = mirrored(built, &points)?;
    let sym_err = points
        .iter()
        .zip(&mirror)
        .map(|(p, m)| (p.matrix.m11 - m.m22).norm() / (1.0 + p.matrix.m11.norm()))
        .fold(0.0, f64::max);
    r.push("m11_vs_m22_reflected", sym_err, tol.m11_m22, &klabel);

    if let Construction::PseudoHermitian { k1, .. } = built.config.construction {
        let ks: Vec<f64> = (1..=10).map(|j| 0.3 * j as f64).map(|k| if (k - k1.abs()).abs() < 0.05 { k + 0.1 } else { k }).collect();
        let mut worst = 0.0f64;
        for &k in &ks {
            worst = worst.max(pseudo_hermitian_residual(u, k, k1, &built.trunc)?);
        }
        r.push("pseudo_hermitian_identity", worst, tol.pseudo_hermitian, format!("k = 0.3, 0.6, ..., 3.0 (k1 = {k1})"));
    }

    if u.decay() == DecayClass::Exponential {
        let prescribed = u.prescribed_wavenumbers();
        let k_off = OFF_RESONANCE
            .iter()
            .copied()
            .find(|k| prescribed.iter().all(|p| (p.abs() - k).abs() > 0.2) && built.trunc.check(*k).is_ok());
        if let Some(k) = k_off {
            let rk = transfer_matrix(u, k, &built.trunc, DEFAULT_TOL)?;
            let fd = fd_transfer_oracle(u, k, &built.trunc, FD_ORACLE_POINTS)?;
            let scale = 1.0 + rk.entries().iter().map(|z| z.norm()).fold(0.0, f64::max);
            r.push("fd_transfer_oracle", fd.max_entry_diff(&rk) / scale, tol.fd_oracle, format!("k = {k}, n = {FD_ORACLE_POINTS}"));
        }
    }

    let ss = ss_report(built, &points)?;
    if !ss.prescribed.is_empty() {
        r.push("ss_location", ss.max_distance(), tol.ss_location, &klabel);
        r.push("ss_residual", ss.max_residual(), tol.ss_residual, "|m22| at matched roots");
        r.push("ss_order_mismatches", ss.order_mismatches() as f64, 0.0, "prescribed vs estimated order");
    }
    r.push("ss_extra", ss.extra.len() as f64, 0.0, "found but not prescribed");
    Ok(VerifyOutcome { ss, report: r })
}
