//! Construction of complex potentials with prescribed spectral singularities.
//!
//! Every potential here is produced by one or more *base functions* `w_j`
//! through `U = -w_j² - i w_j' + k_j²`; each base function with asymptotes
//! `w_j → ±k_j` at `x → ∓∞` pins a spectral singularity at `k_j`. Two base
//! functions generating the same `U` are linked by their difference `χ`, three
//! by the ratio `ν` of consecutive differences.

mod base;
mod collision;
mod params;
mod pseudo;
mod three;
mod two;

pub use base::{base_pair_from_chi, potential_from_base, ss_solution, ss_solution_with_boundary, WaveFunction};
pub use collision::{collision_limit_base, second_order_base, second_order_potential, tanh_sech_family};
pub use params::{Construction, Constructed};
pub use pseudo::{
    odd_singular_rho, odd_singular_rho_constraint, pseudo_hermitian_chi, pseudo_hermitian_potential,
    RhoProfile,
};
pub use three::{chi_from_nu, gaussian_nu, nu_chi_residual, three_ss_bases, three_ss_potential};
pub use two::{
    closed_form_two_ss_potential, selfdual_potential_from_chi, singular_node_chi, tanh_sech_chi,
    two_ss_potential,
};

use num_complex::Complex64 as C64;
use serde::Serialize;
use thiserror::Error;

use crate::numerics::{ComplexProfile, DecayClass, NumericsError};

pub(crate) const I: C64 = C64::new(0.0, 1.0);

/// Relative tolerance used when comparing declared asymptotes.
const ASYMPTOTE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum ConstructError {
    #[error("declared asymptote {which} is {found}, expected {expected}")]
    AsymptoteMismatch { which: &'static str, expected: C64, found: C64 },
    #[error("singular terms do not cancel at x = {at}")]
    NonCancellation { at: f64 },
    #[error("chi has a real zero at x = {at} with slope {slope}, which is neither removable nor nodal")]
    BadZero { at: f64, slope: C64 },
    #[error("singular point at x = {at} has coefficient {coeff}; only ±i is admissible")]
    BadSingularity { at: f64, coeff: C64 },
    #[error("amplitude a0 must be nonzero")]
    ZeroAmplitude,
    #[error("family does not collapse at k2 = k1: |value| = {residual:e} at x = {x}")]
    NoCollision { x: f64, residual: f64 },
    #[error("sin(phi) = {value} leaves [-1, 1] at x = {x}")]
    SineOutOfRange { x: f64, value: f64 },
    #[error("node condition fails at x = {at}: residual {residual:e}")]
    NodeConditionViolated { at: f64, residual: f64 },
    #[error("constraint (k1-k2)(k1+k2-3a)+3 = 0 violated: residual {residual}")]
    ConstraintViolated { residual: f64 },
    #[error("branch continuation is ambiguous at x = {x}: {reason}")]
    BranchAmbiguity { x: f64, reason: String },
    #[error("leading coefficient 1 + nu vanishes at x = {x}")]
    DegenerateLeadingCoefficient { x: f64 },
    #[error("nu vanishes at x = {x}")]
    NuVanishes { x: f64 },
    #[error("quadratic back-substitution residual {residual:e} exceeds tolerance")]
    BackSubstitution { residual: f64 },
    #[error("base functions disagree on the potential by {deviation:e} (relative)")]
    InconsistentPotential { deviation: f64 },
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

impl ConstructError {
    pub fn name(&self) -> &'static str {
        match self {
            ConstructError::AsymptoteMismatch { .. } => "AsymptoteMismatch",
            ConstructError::NonCancellation { .. } => "NonCancellation",
            ConstructError::BadZero { .. } => "BadZero",
            ConstructError::BadSingularity { .. } => "BadSingularity",
            ConstructError::ZeroAmplitude => "ZeroAmplitude",
            ConstructError::NoCollision { .. } => "NoCollision",
            ConstructError::SineOutOfRange { .. } => "SineOutOfRange",
            ConstructError::NodeConditionViolated { .. } => "NodeConditionViolated",
            ConstructError::ConstraintViolated { .. } => "ConstraintViolated",
            ConstructError::BranchAmbiguity { .. } => "BranchAmbiguity",
            ConstructError::DegenerateLeadingCoefficient { .. } => "DegenerateLeadingCoefficient",
            ConstructError::NuVanishes { .. } => "NuVanishes",
            ConstructError::BackSubstitution { .. } => "BackSubstitution",
            ConstructError::InconsistentPotential { .. } => "InconsistentPotential",
            ConstructError::InvalidParameters(_) => "InvalidParameters",
            ConstructError::Numerics(e) => e.name(),
        }
    }
}

pub type Result<T> = std::result::Result<T, ConstructError>;

/// A base function `w` together with the wavenumber of the spectral
/// singularity it encodes.
#[derive(Clone, Debug)]
pub struct BaseFunction {
    pub profile: ComplexProfile,
    pub k: f64,
}

impl BaseFunction {
    pub fn new(profile: ComplexProfile, k: f64) -> Result<Self> {
        if !k.is_finite() || k == 0.0 {
            return Err(ConstructError::InvalidParameters(format!("wavenumber must be nonzero, got {k}")));
        }
        Ok(BaseFunction { profile, k })
    }

    pub fn eval(&self, x: f64) -> Result<C64> {
        Ok(self.profile.eval(x)?)
    }

    /// Points where the associated SS-solution vanishes.
    pub fn nodes(&self) -> Vec<f64> {
        self.profile.singular_points().iter().map(|s| s.x).collect()
    }

    /// `-w² - i w' + k²` at `x`.
    pub fn generated_potential(&self, x: f64) -> Result<C64> {
        let j = self.profile.jet(x, 2)?;
        let d = j.derivative(1).ok_or(NumericsError::NonFinite { x })?;
        Ok(-j.value() * j.value() - I * d + self.k * self.k)
    }

    pub(crate) fn check_asymptotes(&self) -> Result<()> {
        let tol = ASYMPTOTE_TOL * (1.0 + self.k.abs());
        let minus = C64::from(self.k);
        let plus = C64::from(-self.k);
        if (self.profile.asym_minus() - minus).norm() > tol {
            return Err(ConstructError::AsymptoteMismatch {
                which: "x -> -inf",
                expected: minus,
                found: self.profile.asym_minus(),
            });
        }
        if (self.profile.asym_plus() - plus).norm() > tol {
            return Err(ConstructError::AsymptoteMismatch {
                which: "x -> +inf",
                expected: plus,
                found: self.profile.asym_plus(),
            });
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PrescribedSs {
    pub k: f64,
    pub order: u32,
}

/// A potential `U(x)` together with the base functions known to generate it.
#[derive(Clone, Debug)]
pub struct Potential {
    pub profile: ComplexProfile,
    pub provenance: Vec<BaseFunction>,
    pub prescribed_ss: Vec<PrescribedSs>,
}

impl Potential {
    /// `U ≡ 0`.
    pub fn free() -> Self {
        Potential {
            profile: ComplexProfile::constant(C64::new(0.0, 0.0)),
            provenance: Vec::new(),
            prescribed_ss: Vec::new(),
        }
    }

    /// Wraps an arbitrary profile; no base functions are known.
    pub fn from_profile(profile: ComplexProfile) -> Self {
        Potential { profile, provenance: Vec::new(), prescribed_ss: Vec::new() }
    }

    pub fn eval(&self, x: f64) -> Result<C64> {
        Ok(self.profile.eval(x)?)
    }

    pub fn decay(&self) -> DecayClass {
        self.profile.decay()
    }

    pub fn prescribed_wavenumbers(&self) -> Vec<f64> {
        self.prescribed_ss.iter().map(|s| s.k).collect()
    }
}

pub(crate) fn check_wavenumbers(ks: &[f64]) -> Result<()> {
    for (i, &k) in ks.iter().enumerate() {
        if !k.is_finite() || k == 0.0 {
            return Err(ConstructError::InvalidParameters(format!("wavenumber k{} must be nonzero and finite", i + 1)));
        }
        for &other in &ks[..i] {
            if other == k {
                return Err(ConstructError::InvalidParameters(format!("wavenumbers must be pairwise distinct ({k} repeated)")));
            }
        }
    }
    Ok(())
}

pub(crate) fn asymptote_matches(found: C64, expected: C64) -> bool {
    (found - expected).norm() <= ASYMPTOTE_TOL * (1.0 + expected.norm())
}

/// Half-width of the sampling window used by the constructions' own checks.
pub(crate) fn check_window(decay: DecayClass) -> f64 {
    match decay {
        DecayClass::Exponential => 30.0,
        DecayClass::Algebraic { .. } => 60.0,
    }
}
