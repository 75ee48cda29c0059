//! Numerical kernel: complex profiles, differentiation, quadrature, adaptive
//! Runge–Kutta integration and one-dimensional minimum location.

pub mod jet;
pub mod ode;
pub mod profile;
pub mod quad;
pub mod roots;
pub mod special;

pub use jet::{Jet, JET_LEN};
pub use ode::{rk_integrate, rk_integrate_with, OdeOptions};
pub use profile::{
    derivative, ComplexProfile, DecayClass, RealGrid, RegularPoint, SingularPoint,
    REGULARIZATION_RADIUS, SINGULAR_EXCLUSION,
};
pub use quad::integrate_phase;
pub use roots::{find_real_root, minimize_modulus};

use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum NumericsError {
    #[error("x = {x} lies within the exclusion radius of the singular point {at}")]
    SingularPoint { x: f64, at: f64 },
    #[error("profile is not finite at x = {x}")]
    NonFinite { x: f64 },
    #[error("singular point {at} lies inside the integration interval [{a}, {b}]")]
    SingularOnPath { a: f64, b: f64, at: f64 },
    #[error("step size underflow at x = {x} (h = {h:e})")]
    StepUnderflow { x: f64, h: f64 },
    #[error("|f| has no interior minimum on [{a}, {b}]")]
    NoMinimum { a: f64, b: f64 },
    #[error("derivative order {0} is not supported")]
    UnsupportedOrder(usize),
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
}

impl NumericsError {
    /// Stable variant name, used in CLI diagnostics.
    pub fn name(&self) -> &'static str {
        match self {
            NumericsError::SingularPoint { .. } => "SingularPoint",
            NumericsError::NonFinite { .. } => "NonFinite",
            NumericsError::SingularOnPath { .. } => "SingularOnPath",
            NumericsError::StepUnderflow { .. } => "StepUnderflow",
            NumericsError::NoMinimum { .. } => "NoMinimum",
            NumericsError::UnsupportedOrder(_) => "UnsupportedOrder",
            NumericsError::InvalidGrid(_) => "InvalidGrid",
        }
    }
}

pub type Result<T> = std::result::Result<T, NumericsError>;
