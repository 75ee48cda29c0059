use serde::Serialize;

use super::{scattering_coefficients, transfer_matrix, Result, ScatterError, ScatteringCoefficients, TransferMatrix, TruncationSpec, DEFAULT_TOL};
use crate::construct::Potential;
use crate::numerics::{minimize_modulus, NumericsError};

pub const DEFAULT_SCAN_POINTS: usize = 801;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ScanRange {
    pub k_min: f64,
    pub k_max: f64,
    pub n: usize,
    /// Samples with `|k|` below this are skipped (`k = 0` always is).
    pub min_abs_k: f64,
}

impl ScanRange {
    pub fn new(k_min: f64, k_max: f64, n: usize) -> Self {
        ScanRange { k_min, k_max, n, min_abs_k: 0.0 }
    }

    pub fn with_min_abs_k(mut self, m: f64) -> Self {
        self.min_abs_k = m;
        self
    }

    fn validate(&self) -> Result<()> {
        if !(self.k_min < self.k_max) || !self.k_min.is_finite() || !self.k_max.is_finite() {
            return Err(ScatterError::InvalidRange(format!("need k_min < k_max, got [{}, {}]", self.k_min, self.k_max)));
        }
        if self.n < 2 {
            return Err(ScatterError::InvalidRange(format!("need n >= 2, got {}", self.n)));
        }
        Ok(())
    }

    pub fn step(&self) -> f64 {
        (self.k_max - self.k_min) / (self.n - 1) as f64
    }

    /// Grid points actually sampled.
    pub fn points(&self) -> Vec<f64> {
        let h = self.step();
        (0..self.n)
            .map(|i| if i + 1 == self.n { self.k_max } else { self.k_min + h * i as f64 })
            .filter(|k| k.abs() > self.min_abs_k.max(1e-12 * h))
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ScanPoint {
    pub k: f64,
    pub matrix: TransferMatrix,
    pub coefficients: ScatteringCoefficients,
}

pub fn scan_spectrum(u: &Potential, k_min: f64, k_max: f64, n: usize, trunc: &TruncationSpec) -> Result<Vec<ScanPoint>> {
    scan_spectrum_with(u, &ScanRange::new(k_min, k_max, n), trunc, DEFAULT_TOL)
}

pub fn scan_spectrum_with(u: &Potential, range: &ScanRange, trunc: &TruncationSpec, tol: f64) -> Result<Vec<ScanPoint>> {
    range.validate()?;
    range
        .points()
        .into_iter()
        .map(|k| {
            let matrix = transfer_matrix(u, k, trunc, tol)?;
            let coefficients = scattering_coefficients(&matrix)?;
            Ok(ScanPoint { k, matrix, coefficients })
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SsCharacter {
    Lasing,
    Cpa,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SpectralSingularity {
    pub k0: f64,
    /// `None` when the order estimate is ambiguous.
    pub order: Option<u32>,
    pub character: SsCharacter,
    /// `|m22(k0)|`.
    pub residual: f64,
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    if v.is_empty() {
        return f64::NAN;
    }
    v[v.len() / 2]
}

/// Real zeros of `M₂₂` on `[k_min, k_max]` from a [`DEFAULT_SCAN_POINTS`] scan.
/// `threshold` defaults to `1e-4 · median |m22|` over the scan.
pub fn locate_singularities(
    u: &Potential,
    k_min: f64,
    k_max: f64,
    trunc: &TruncationSpec,
    threshold: Option<f64>,
) -> Result<Vec<SpectralSingularity>> {
    let range = ScanRange::new(k_min, k_max, DEFAULT_SCAN_POINTS).with_min_abs_k(trunc.min_abs_k());
    let scan = scan_spectrum_with(u, &range, trunc, DEFAULT_TOL)?;
    locate_in_scan(u, &scan, trunc, threshold)
}

/// Peak detection on an existing scan: local minima of `|m22|` that dip
/// below half of their neighbours three samples away are refined by Brent
/// minimization and accepted when `|m22| ≤ threshold`. Orders are estimated
/// for every accepted root.
pub fn locate_in_scan(u: &Potential, scan: &[ScanPoint], trunc: &TruncationSpec, threshold: Option<f64>) -> Result<Vec<SpectralSingularity>> {
    let mags: Vec<f64> = scan.iter().map(|p| p.matrix.m22.norm()).collect();
    let threshold = threshold.unwrap_or_else(|| 1e-4 * median(mags.clone()));
    let n = scan.len();
    let mut found: Vec<SpectralSingularity> = Vec::new();
    for i in 0..n {
        let left = i.checked_sub(1).map(|j| mags[j]);
        let right = (i + 1 < n).then(|| mags[i + 1]);
        if left.is_some_and(|v| v < mags[i]) || right.is_some_and(|v| v <= mags[i]) {
            continue;
        }
        // Contiguity: do not bracket across a skipped gap around k = 0.
        let spacing = if n > 1 { (scan[n - 1].k - scan[0].k) / (n - 1) as f64 } else { 0.0 };
        let ref_l = i.checked_sub(3).map(|j| mags[j]).unwrap_or(f64::INFINITY);
        let ref_r = scan.get(i + 3).map(|_| mags[i + 3]).unwrap_or(f64::INFINITY);
        if !(mags[i] < 0.5 * ref_l.min(ref_r)) && mags[i] > threshold {
            continue;
        }
        let lo = if i > 0 && scan[i].k - scan[i - 1].k < 1.5 * spacing { scan[i - 1].k } else { scan[i].k - 0.5 * spacing };
        let hi = if i + 1 < n && scan[i + 1].k - scan[i].k < 1.5 * spacing { scan[i + 1].k } else { scan[i].k + 0.5 * spacing };
        let f = |k: f64| -> crate::numerics::Result<f64> {
            transfer_matrix(u, k, trunc, DEFAULT_TOL)
                .map(|m| m.m22.norm())
                .map_err(|e| match e {
                    ScatterError::Numerics(n) => n,
                    other => NumericsError::InvalidGrid(other.to_string()),
                })
        };
        let (k0, residual) = match minimize_modulus(f, (lo, hi), 1e-10) {
            Ok(r) => r,
            Err(NumericsError::NoMinimum { .. }) => (scan[i].k, mags[i]),
            Err(e) => return Err(e.into()),
        };
        if residual > threshold {
            continue;
        }
        if found.iter().any(|s| (s.k0 - k0).abs() < spacing) {
            continue;
        }
        let order = match ss_order(u, k0, trunc) {
            Ok(o) => Some(o),
            Err(ScatterError::AmbiguousOrder { .. }) => None,
            Err(e) => return Err(e),
        };
        let character = if k0 > 0.0 { SsCharacter::Lasing } else { SsCharacter::Cpa };
        found.push(SpectralSingularity { k0, order, character, residual });
    }
    found.sort_by(|a, b| a.k0.total_cmp(&b.k0));
    Ok(found)
}

const ORDER_OFFSETS: usize = 9;

/// Least-squares slope of `log|m22(k)|` against `log|k - k0|` over offsets
/// `1e-4 … 1e-2` on both sides, with its standard error.
pub fn order_slope(u: &Potential, k0: f64, trunc: &TruncationSpec) -> Result<(f64, f64)> {
    let mut pts = Vec::with_capacity(2 * ORDER_OFFSETS);
    for j in 0..ORDER_OFFSETS {
        let d = 1e-4 * 100f64.powf(j as f64 / (ORDER_OFFSETS - 1) as f64);
        for s in [-1.0, 1.0] {
            let m = transfer_matrix(u, k0 + s * d, trunc, 1e-12)?;
            pts.push((d.ln(), m.m22.norm().ln()));
        }
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let rss: f64 = pts.iter().map(|p| (p.1 - my - slope * (p.0 - mx)).powi(2)).sum();
    let stderr = (rss / (n - 2.0) / sxx).sqrt();
    Ok((slope, stderr))
}

/// Order of the zero of `M₂₂` at `k0`, from the log-log slope.
pub fn ss_order(u: &Potential, k0: f64, trunc: &TruncationSpec) -> Result<u32> {
    let (slope, stderr) = order_slope(u, k0, trunc)?;
    let order = slope.round();
    if !(stderr < 0.1) || (slope - order).abs() > 0.25 || order < 1.0 {
        return Err(ScatterError::AmbiguousOrder { k0, slope, stderr });
    }
    Ok(order as u32)
}

/// `|M₁₁(k) - M₂₂*(k)(k + k₁)/(k - k₁)| / (1 + |M₁₁(k)|)`.
pub fn pseudo_hermitian_residual(u: &Potential, k: f64, k1: f64, trunc: &TruncationSpec) -> Result<f64> {
    if (k - k1).abs() < 1e-12 || (k + k1).abs() < 1e-12 {
        return Err(ScatterError::PoleAtK1 { k, k1 });
    }
    let m = transfer_matrix(u, k, trunc, DEFAULT_TOL)?;
    let rhs = m.m22.conj() * (k + k1) / (k - k1);
    Ok((m.m11 - rhs).norm() / (1.0 + m.m11.norm()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trunc() -> TruncationSpec {
        TruncationSpec::for_potential(&Potential::free(), None).unwrap()
    }

    #[test]
    fn free_scan_is_flat() {
        let scan = scan_spectrum(&Potential::free(), -2.0, 2.0, 41, &trunc()).unwrap();
        assert_eq!(scan.len(), 40, "k = 0 skipped");
        for p in &scan {
            assert!((p.coefficients.t.norm() - 1.0).abs() < 1e-12);
        }
        assert!(locate_in_scan(&Potential::free(), &scan, &trunc(), None).unwrap().is_empty());
    }

    #[test]
    fn min_abs_k_band() {
        let r = ScanRange::new(-1.0, 1.0, 21).with_min_abs_k(0.25);
        assert!(r.points().iter().all(|k| k.abs() > 0.25));
        assert_eq!(r.points().len(), 16);
    }

    #[test]
    fn bad_ranges() {
        let u = Potential::free();
        assert_eq!(scan_spectrum(&u, 1.0, 1.0, 10, &trunc()).unwrap_err().name(), "InvalidRange");
        assert_eq!(scan_spectrum(&u, 0.0, 1.0, 1, &trunc()).unwrap_err().name(), "InvalidRange");
    }

    #[test]
    fn pole_rejected() {
        let e = pseudo_hermitian_residual(&Potential::free(), 0.5, 0.5, &trunc()).unwrap_err();
        assert_eq!(e.name(), "PoleAtK1");
        let e = pseudo_hermitian_residual(&Potential::free(), -0.5, 0.5, &trunc()).unwrap_err();
        assert_eq!(e.name(), "PoleAtK1");
    }
}
