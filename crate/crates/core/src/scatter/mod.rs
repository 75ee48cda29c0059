//! Scattering data of a potential on the truncated line: transfer matrix,
//! coefficients, and spectral singularities (real zeros of `M₂₂`).

mod spectrum;
mod transfer;

pub use spectrum::{
    locate_in_scan, locate_singularities, order_slope, pseudo_hermitian_residual, scan_spectrum, scan_spectrum_with, ss_order,
    ScanPoint, ScanRange, SsCharacter, SpectralSingularity, DEFAULT_SCAN_POINTS,
};
pub use transfer::{scattering_coefficients, transfer_matrix, ScatteringCoefficients, TransferMatrix};

use num_complex::Complex64 as C64;
use serde::Serialize;
use thiserror::Error;

use crate::construct::Potential;
use crate::numerics::{DecayClass, NumericsError};

#[derive(Debug, Clone, Error, PartialEq)]
pub enum ScatterError {
    #[error("potential tail {tail_bound:e} beyond L exceeds {limit:e} at k = {k}")]
    TailTooFat { k: f64, tail_bound: f64, limit: f64 },
    #[error("m22 vanishes to machine precision at k = {k}")]
    ExactZero { k: f64 },
    #[error("k = {k} sits on the pole of the identity at ±k1 = ±{k1}")]
    PoleAtK1 { k: f64, k1: f64 },
    #[error("log-log slope {slope:.3} ± {stderr:.3} at k0 = {k0} does not identify an integer order")]
    AmbiguousOrder { k0: f64, slope: f64, stderr: f64 },
    #[error("wavenumber must be nonzero and finite, got {k}")]
    InvalidWavenumber { k: f64 },
    #[error("invalid scan range: {0}")]
    InvalidRange(String),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

impl ScatterError {
    pub fn name(&self) -> &'static str {
        match self {
            ScatterError::TailTooFat { .. } => "TailTooFat",
            ScatterError::ExactZero { .. } => "ExactZero",
            ScatterError::PoleAtK1 { .. } => "PoleAtK1",
            ScatterError::AmbiguousOrder { .. } => "AmbiguousOrder",
            ScatterError::InvalidWavenumber { .. } => "InvalidWavenumber",
            ScatterError::InvalidRange(_) => "InvalidRange",
            ScatterError::Numerics(e) => e.name(),
        }
    }
}

pub type Result<T> = std::result::Result<T, ScatterError>;

/// Default local tolerance of the Jost-solution integration.
pub const DEFAULT_TOL: f64 = 1e-10;

/// Computational window `[-L, L]` and the size of what is cut off.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TruncationSpec {
    #[serde(rename = "L")]
    pub l: f64,
    /// Estimated `max |U|` beyond `±L`.
    pub tail_bound: f64,
    /// `tail_bound` must stay below `tail_fraction · k²`.
    pub tail_fraction: f64,
}

pub const DEFAULT_TAIL_FRACTION: f64 = 1e-2;

pub fn default_half_width(decay: DecayClass) -> f64 {
    match decay {
        DecayClass::Exponential => 20.0,
        DecayClass::Algebraic { .. } => 200.0,
    }
}

impl TruncationSpec {
    /// Samples `|U|` on `L ≤ |x| ≤ 4L` to estimate the tail bound. `l`
    /// defaults by decay class (20 exponential, 200 algebraic).
    pub fn for_potential(u: &Potential, l: Option<f64>) -> Result<Self> {
        let l = l.unwrap_or_else(|| default_half_width(u.decay()));
        if !(l > 0.0 && l.is_finite()) {
            return Err(ScatterError::InvalidRange(format!("L must be positive, got {l}")));
        }
        let mut bound = 0.0f64;
        for i in 0..=300 {
            let x = l * (1.0 + 3.0 * i as f64 / 300.0);
            for s in [-1.0, 1.0] {
                let v = u.profile.eval(s * x)?;
                bound = bound.max(v.norm());
            }
        }
        Ok(TruncationSpec { l, tail_bound: bound, tail_fraction: DEFAULT_TAIL_FRACTION })
    }

    /// Check of the truncation invariant at wavenumber `k`.
    pub fn check(&self, k: f64) -> Result<()> {
        let limit = self.tail_fraction * k * k;
        if self.tail_bound > limit {
            return Err(ScatterError::TailTooFat { k, tail_bound: self.tail_bound, limit });
        }
        Ok(())
    }

    /// Smallest `|k|` for which [`check`](Self::check) passes.
    pub fn min_abs_k(&self) -> f64 {
        (self.tail_bound / self.tail_fraction).sqrt()
    }
}

pub(crate) fn finite(z: C64) -> bool {
    z.re.is_finite() && z.im.is_finite()
}
