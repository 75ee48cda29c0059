use std::fmt;
use std::sync::Arc;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use super::jet::{Jet, JET_LEN};
use super::{NumericsError, Result};

/// Evaluation within this distance of a declared singular point is refused.
pub const SINGULAR_EXCLUSION: f64 = 1e-7;

/// Half-width of the disk around a regularized point inside which the profile
/// is replaced by its polynomial interpolant through exterior nodes.
pub const REGULARIZATION_RADIUS: f64 = 1e-2;

/// Interpolation nodes on each side of a regularized point.
const REG_NODES: usize = 6;

pub type JetFn = Arc<dyn Fn(f64, usize) -> Jet + Send + Sync>;
pub type ScalarFn = Arc<dyn Fn(f64) -> C64 + Send + Sync>;

/// A declared divergence `coeff / (x - x)` of a profile.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SingularPoint {
    pub x: f64,
    pub coeff: C64,
}

/// A point where the profile is finite but its defining expression cancels
/// large terms (removable singularities, cancelled poles).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegularPoint {
    pub x: f64,
    /// Exact limit value at `x`, when known in closed form.
    pub pinned: Option<C64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DecayClass {
    Exponential,
    Algebraic { power: f64 },
}

impl DecayClass {
    /// Expected shrink factor of the tail residual when the radius doubles.
    pub fn doubling_factor(&self) -> f64 {
        match self {
            DecayClass::Exponential => f64::INFINITY,
            DecayClass::Algebraic { power } => 2f64.powf(*power),
        }
    }
}

#[derive(Clone)]
enum Repr {
    Analytic(JetFn),
    Sampled {
        eval: ScalarFn,
        d1: Option<ScalarFn>,
        d2: Option<ScalarFn>,
    },
}

/// A complex-valued function of one real variable together with its declared
/// asymptotics and singular structure.
///
/// Analytic profiles evaluate through [`Jet`]s and therefore carry exact
/// derivatives up to order `JET_LEN - 1`. Sampled profiles only know their
/// values (and optionally first/second derivatives) and fall back to finite
/// differences.
#[derive(Clone)]
pub struct ComplexProfile {
    repr: Repr,
    asym_minus: C64,
    asym_plus: C64,
    singular_points: Vec<SingularPoint>,
    regular_points: Vec<RegularPoint>,
    breakpoints: Vec<f64>,
    decay: DecayClass,
}

impl fmt::Debug for ComplexProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ComplexProfile")
            .field("analytic", &matches!(self.repr, Repr::Analytic(_)))
            .field("asym_minus", &self.asym_minus)
            .field("asym_plus", &self.asym_plus)
            .field("singular_points", &self.singular_points)
            .field("regular_points", &self.regular_points)
            .field("decay", &self.decay)
            .finish()
    }
}

impl ComplexProfile {
    /// Profile defined by a jet-valued function; `f(x, len)` must return the
    /// Taylor expansion at `x` with (up to) `len` coefficients.
    pub fn analytic<F>(f: F) -> Self
    where
        F: Fn(f64, usize) -> Jet + Send + Sync + 'static,
    {
        Self::with_repr(Repr::Analytic(Arc::new(f)))
    }

    pub fn sampled<F>(eval: F) -> Self
    where
        F: Fn(f64) -> C64 + Send + Sync + 'static,
    {
        Self::with_repr(Repr::Sampled { eval: Arc::new(eval), d1: None, d2: None })
    }

    pub fn constant(c: C64) -> Self {
        Self::analytic(move |_, len| Jet::constant(c, len)).with_asymptotes(c, c)
    }

    fn with_repr(repr: Repr) -> Self {
        ComplexProfile {
            repr,
            asym_minus: C64::new(0.0, 0.0),
            asym_plus: C64::new(0.0, 0.0),
            singular_points: Vec::new(),
            regular_points: Vec::new(),
            breakpoints: Vec::new(),
            decay: DecayClass::Exponential,
        }
    }

    /// Attaches an analytic first derivative (sampled profiles only).
    pub fn with_d1<F>(mut self, f: F) -> Self
    where
        F: Fn(f64) -> C64 + Send + Sync + 'static,
    {
        if let Repr::Sampled { d1, .. } = &mut self.repr {
            *d1 = Some(Arc::new(f));
        }
        self
    }

    /// Attaches an analytic second derivative (sampled profiles only).
    pub fn with_d2<F>(mut self, f: F) -> Self
    where
        F: Fn(f64) -> C64 + Send + Sync + 'static,
    {
        if let Repr::Sampled { d2, .. } = &mut self.repr {
            *d2 = Some(Arc::new(f));
        }
        self
    }

    pub fn with_asymptotes(mut self, minus: C64, plus: C64) -> Self {
        self.asym_minus = minus;
        self.asym_plus = plus;
        self
    }

    pub fn with_decay(mut self, decay: DecayClass) -> Self {
        self.decay = decay;
        self
    }

    /// Declares a divergence `coeff/(x - x0)`. Points are kept sorted.
    ///
    /// Panics if `x0` is already declared.
    pub fn with_singular_point(mut self, x0: f64, coeff: C64) -> Self {
        assert!(
            self.singular_points.iter().all(|s| s.x != x0),
            "singular point {x0} declared twice"
        );
        self.singular_points.push(SingularPoint { x: x0, coeff });
        self.singular_points.sort_by(|a, b| a.x.total_cmp(&b.x));
        self
    }

    pub fn with_regular_point(mut self, x0: f64, pinned: Option<C64>) -> Self {
        if self.regular_points.iter().any(|r| r.x == x0) {
            return self;
        }
        self.regular_points.push(RegularPoint { x: x0, pinned });
        self.regular_points.sort_by(|a, b| a.x.total_cmp(&b.x));
        self
    }

    /// Declares a point where the profile or its derivatives jump; ODE
    /// integration restarts there.
    pub fn with_breakpoint(mut self, x0: f64) -> Self {
        self.breakpoints.push(x0);
        self.breakpoints.sort_by(f64::total_cmp);
        self.breakpoints.dedup();
        self
    }

    pub fn asym_minus(&self) -> C64 {
        self.asym_minus
    }

    pub fn asym_plus(&self) -> C64 {
        self.asym_plus
    }

    pub fn singular_points(&self) -> &[SingularPoint] {
        &self.singular_points
    }

    pub fn regular_points(&self) -> &[RegularPoint] {
        &self.regular_points
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn decay(&self) -> DecayClass {
        self.decay
    }

    pub fn is_analytic(&self) -> bool {
        matches!(self.repr, Repr::Analytic(_))
    }

    pub fn has_analytic_derivative(&self, order: usize) -> bool {
        match &self.repr {
            Repr::Analytic(_) => order < JET_LEN,
            Repr::Sampled { d1, d2, .. } => match order {
                0 => true,
                1 => d1.is_some(),
                2 => d2.is_some(),
                _ => false,
            },
        }
    }

    fn check_singular(&self, x: f64, radius: f64) -> Result<()> {
        for s in &self.singular_points {
            if (x - s.x).abs() < radius {
                return Err(NumericsError::SingularPoint { x, at: s.x });
            }
        }
        Ok(())
    }

    pub fn eval(&self, x: f64) -> Result<C64> {
        Ok(self.jet(x, 1)?.value())
    }

    /// Taylor expansion at `x` with up to `len` coefficients.
    pub fn jet(&self, x: f64, len: usize) -> Result<Jet> {
        self.check_singular(x, SINGULAR_EXCLUSION)?;
        let j = match self
            .regular_points
            .iter()
            .find(|r| (x - r.x).abs() < REGULARIZATION_RADIUS)
        {
            Some(r) => self.interpolated_jet(*r, x, len),
            None => self.raw_jet(x, len),
        };
        if !j.value().re.is_finite() || !j.value().im.is_finite() {
            return Err(NumericsError::NonFinite { x });
        }
        Ok(j)
    }

    /// Like [`jet`](Self::jet) but returns a NaN jet instead of an error; for
    /// use inside composite closures whose result is checked by the caller.
    pub fn jet_lossy(&self, x: f64, len: usize) -> Jet {
        self.jet(x, len).unwrap_or_else(|_| Jet::nan(len))
    }

    fn raw_value(&self, x: f64) -> C64 {
        match &self.repr {
            Repr::Analytic(f) => f(x, 1).value(),
            Repr::Sampled { eval, .. } => eval(x),
        }
    }

    fn raw_jet(&self, x: f64, len: usize) -> Jet {
        match &self.repr {
            Repr::Analytic(f) => f(x, len),
            Repr::Sampled { eval, d1, d2 } => {
                let len = len.min(3);
                let mut d = vec![eval(x)];
                if len > 1 {
                    d.push(match d1 {
                        Some(f) => f(x),
                        None => fd_first(&|t| eval(t), x),
                    });
                }
                if len > 2 {
                    d.push(match d2 {
                        Some(f) => f(x),
                        None => fd_second(&|t| eval(t), x),
                    });
                }
                Jet::from_derivatives(&d)
            }
        }
    }

    /// Newton interpolation through `x0 ± j·r` (and the pinned value at `x0`),
    /// re-expanded as a Taylor jet at `x`.
    fn interpolated_jet(&self, reg: RegularPoint, x: f64, len: usize) -> Jet {
        let r = REGULARIZATION_RADIUS;
        let mut nodes = Vec::with_capacity(2 * REG_NODES + 1);
        if let Some(v) = reg.pinned {
            nodes.push((reg.x, v));
        }
        for j in 1..=REG_NODES {
            for s in [1.0, -1.0] {
                let z = reg.x + s * r * j as f64;
                nodes.push((z, self.raw_value(z)));
            }
        }
        let n = nodes.len();
        let zs: Vec<f64> = nodes.iter().map(|p| p.0).collect();
        let mut a: Vec<C64> = nodes.iter().map(|p| p.1).collect();
        for level in 1..n {
            for i in (level..n).rev() {
                a[i] = (a[i] - a[i - 1]) / (zs[i] - zs[i - level]);
            }
        }
        // Horner in the shifted variable (X - x), keeping `len` coefficients.
        let len = len.clamp(1, JET_LEN);
        let mut d = vec![C64::new(0.0, 0.0); len];
        d[0] = a[n - 1];
        for i in (0..n - 1).rev() {
            let c = x - zs[i];
            for m in (0..len).rev() {
                let lower = if m > 0 { d[m - 1] } else { C64::new(0.0, 0.0) };
                d[m] = lower + d[m] * c;
            }
            d[0] += a[i];
        }
        Jet::from_coeffs(&d)
    }

    /// Analytic derivative when available, central finite differences otherwise.
    pub fn derivative(&self, x: f64, order: usize) -> Result<C64> {
        derivative(self, x, order)
    }

    /// Central finite-difference derivative, ignoring any analytic information.
    pub fn fd_derivative(&self, x: f64, order: usize) -> Result<C64> {
        let h = match order {
            1 => fd_step(x),
            2 => 2.0 * fd2_step(x),
            _ => return Err(NumericsError::UnsupportedOrder(order)),
        };
        self.check_singular(x, h + SINGULAR_EXCLUSION)?;
        let f = |t: f64| self.eval(t).unwrap_or(C64::new(f64::NAN, f64::NAN));
        let v = if order == 1 { fd_first(&f, x) } else { fd_second(&f, x) };
        if !v.re.is_finite() || !v.im.is_finite() {
            return Err(NumericsError::NonFinite { x });
        }
        Ok(v)
    }

    /// `(|f(-X) - asym_minus|, |f(X) - asym_plus|)`.
    pub fn tail_residuals(&self, radius: f64) -> Result<(f64, f64)> {
        Ok((
            (self.eval(-radius)? - self.asym_minus).norm(),
            (self.eval(radius)? - self.asym_plus).norm(),
        ))
    }
}

fn fd_step(x: f64) -> f64 {
    1e-6f64.max(1e-6 * x.abs())
}

fn fd2_step(x: f64) -> f64 {
    1e-4f64.max(1e-4 * x.abs())
}

fn fd_first(f: &dyn Fn(f64) -> C64, x: f64) -> C64 {
    let h = fd_step(x);
    (f(x + h) - f(x - h)) / (2.0 * h)
}

fn fd_second(f: &dyn Fn(f64) -> C64, x: f64) -> C64 {
    let h = fd2_step(x);
    (-f(x + 2.0 * h) + 16.0 * f(x + h) - 30.0 * f(x) + 16.0 * f(x - h) - f(x - 2.0 * h))
        / (12.0 * h * h)
}

/// First or second derivative of `p` at `x`: analytic when the profile
/// carries it, central finite differences otherwise.
pub fn derivative(p: &ComplexProfile, x: f64, order: usize) -> Result<C64> {
    if !(1..=2).contains(&order) {
        return Err(NumericsError::UnsupportedOrder(order));
    }
    if p.has_analytic_derivative(order) {
        let j = p.jet(x, order + 1)?;
        let v = j.derivative(order).ok_or(NumericsError::NonFinite { x })?;
        if !v.re.is_finite() || !v.im.is_finite() {
            return Err(NumericsError::NonFinite { x });
        }
        return Ok(v);
    }
    p.fd_derivative(x, order)
}

/// Uniformly spaced samples on `[x_min, x_max]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RealGrid {
    pub x_min: f64,
    pub x_max: f64,
    pub n: usize,
}

impl RealGrid {
    pub fn new(x_min: f64, x_max: f64, n: usize) -> Result<Self> {
        if !(x_min < x_max) || !x_min.is_finite() || !x_max.is_finite() {
            return Err(NumericsError::InvalidGrid(format!("need x_min < x_max, got [{x_min}, {x_max}]")));
        }
        if n < 2 {
            return Err(NumericsError::InvalidGrid(format!("need n >= 2, got {n}")));
        }
        Ok(RealGrid { x_min, x_max, n })
    }

    pub fn step(&self) -> f64 {
        (self.x_max - self.x_min) / (self.n - 1) as f64
    }

    pub fn points(&self) -> Vec<f64> {
        let h = self.step();
        (0..self.n)
            .map(|i| if i + 1 == self.n { self.x_max } else { self.x_min + h * i as f64 })
            .collect()
    }

    /// Grid points farther than `radius` from every entry of `avoid`.
    pub fn points_avoiding(&self, avoid: &[f64], radius: f64) -> Vec<f64> {
        self.points()
            .into_iter()
            .filter(|x| avoid.iter().all(|a| (x - a).abs() > radius))
            .collect()
    }

    pub fn is_symmetric(&self) -> bool {
        (self.x_min + self.x_max).abs() <= 1e-12 * (1.0 + self.x_max.abs())
    }
}
