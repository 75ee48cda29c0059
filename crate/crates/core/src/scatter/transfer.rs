use std::cell::RefCell;

use num_complex::Complex64 as C64;
use serde::Serialize;

use super::{finite, Result, ScatterError, TruncationSpec};
use crate::construct::Potential;
use crate::numerics::{derivative, rk_integrate_with, NumericsError, OdeOptions};

const I: C64 = C64::new(0.0, 1.0);

/// Maps the plane-wave coefficients `(a, b)` of `a e^{ikx} + b e^{-ikx}` at
/// `x → -∞` to those at `x → +∞`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TransferMatrix {
    pub k: f64,
    pub m11: C64,
    pub m12: C64,
    pub m21: C64,
    pub m22: C64,
}

impl TransferMatrix {
    pub fn identity(k: f64) -> Self {
        let (one, zero) = (C64::new(1.0, 0.0), C64::new(0.0, 0.0));
        TransferMatrix { k, m11: one, m12: zero, m21: zero, m22: one }
    }

    pub fn det(&self) -> C64 {
        self.m11 * self.m22 - self.m12 * self.m21
    }

    /// `|det M - 1| / (1 + max(|M₁₁M₂₂|, |M₁₂M₂₁|))`. Forming the determinant
    /// loses about `ε·|M|²` to rounding, so the raw deviation is scaled by
    /// the size of the products.
    pub fn det_residual(&self) -> f64 {
        let scale = (self.m11 * self.m22).norm().max((self.m12 * self.m21).norm());
        (self.det() - 1.0).norm() / (1.0 + scale)
    }

    pub fn entries(&self) -> [C64; 4] {
        [self.m11, self.m12, self.m21, self.m22]
    }

    /// Largest entrywise distance to another matrix.
    pub fn max_entry_diff(&self, other: &TransferMatrix) -> f64 {
        self.entries().iter().zip(other.entries()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ScatteringCoefficients {
    pub k: f64,
    pub t: C64,
    pub rl: C64,
    pub rr: C64,
}

/// `T = 1/M₂₂`, `R^L = -M₂₁/M₂₂`, `R^R = M₁₂/M₂₂`.
pub fn scattering_coefficients(m: &TransferMatrix) -> Result<ScatteringCoefficients> {
    if m.m22.norm() == 0.0 {
        return Err(ScatterError::ExactZero { k: m.k });
    }
    Ok(ScatteringCoefficients { k: m.k, t: 1.0 / m.m22, rl: -m.m21 / m.m22, rr: m.m12 / m.m22 })
}

/// Local WKB basis `f± = √(k/q) e^{±ikx}` with log-derivative `±iq - q'/(2q)`,
/// `q = √(k² - U)` on the branch of `k`. Returns `(f+, f+', f-, f-')`.
fn wkb_basis(u: &Potential, k: f64, x: f64) -> Result<[C64; 4]> {
    let ux = u.profile.eval(x)?;
    let du = derivative(&u.profile, x, 1)?;
    let mut q = (C64::from(k * k) - ux).sqrt();
    if q.re * k < 0.0 {
        q = -q;
    }
    let dq = -du / (2.0 * q);
    let amp = (C64::from(k) / q).sqrt();
    let fp = amp * (I * k * x).exp();
    let fm = amp * (-I * k * x).exp();
    Ok([fp, fp * (I * q - dq / (2.0 * q)), fm, fm * (-I * q - dq / (2.0 * q))])
}

/// Transfer matrix on `[-L, L]`.
///
/// Both Jost solutions are carried in slowly varying plane-wave amplitudes
/// `ψ = a e^{ikx} + b e^{-ikx}`, `ψ' = ik(a e^{ikx} - b e^{-ikx})`, which obey
/// `a' = U(a + b e^{-2ikx})/(2ik)`, `b' = -U(a e^{2ikx} + b)/(2ik)`. The step
/// size is therefore set by `U`, not by the wavelength, in the tails. The end
/// data are matched to the local WKB basis, which reduces to the plane
/// waves where `U` has decayed.
pub fn transfer_matrix(u: &Potential, k: f64, trunc: &TruncationSpec, tol: f64) -> Result<TransferMatrix> {
    if !(k.is_finite() && k != 0.0) {
        return Err(ScatterError::InvalidWavenumber { k });
    }
    trunc.check(k)?;
    let l = trunc.l;

    // (ψ, ψ') → (a, b) at x
    let to_ab = |psi: C64, dpsi: C64, x: f64| {
        let e = (I * k * x).exp();
        ((dpsi + I * k * psi) / (2.0 * I * k) / e, (I * k * psi - dpsi) / (2.0 * I * k) * e)
    };
    let [fp, dfp, fm, dfm] = wkb_basis(u, k, -l)?;
    let (a1, b1) = to_ab(fp, dfp, -l);
    let (a2, b2) = to_ab(fm, dfm, -l);
    let mut y = vec![a1, b1, a2, b2];

    let failure: RefCell<Option<NumericsError>> = RefCell::new(None);
    let rhs = |x: f64, y: &[C64], dy: &mut [C64]| {
        let ux = match u.profile.eval(x) {
            Ok(v) => v,
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                C64::new(f64::NAN, f64::NAN)
            }
        };
        let c = ux / (2.0 * I * k);
        let e = (2.0 * I * k * x).exp();
        dy[0] = c * (y[0] + y[1] / e);
        dy[1] = -c * (y[0] * e + y[1]);
        dy[2] = c * (y[2] + y[3] / e);
        dy[3] = -c * (y[2] * e + y[3]);
    };
    let opts = OdeOptions { tol, ..Default::default() };
    let mut cuts: Vec<f64> = u.profile.breakpoints().iter().copied().filter(|b| b.abs() < l).collect();
    cuts.push(l);
    let mut x = -l;
    for &c in &cuts {
        let r = rk_integrate_with(&rhs, &y, x, c, opts);
        if let Some(e) = failure.borrow_mut().take() {
            return Err(e.into());
        }
        y = r?;
        x = c;
    }

    // (a, b) → (ψ, ψ') at +L, projected on the WKB basis there.
    let [fp, dfp, fm, dfm] = wkb_basis(u, k, l)?;
    let w = |f: C64, df: C64, g: C64, dg: C64| f * dg - df * g;
    let wpm = w(fp, dfp, fm, dfm);
    let e = (I * k * l).exp();
    let column = |a: C64, b: C64| {
        let psi = a * e + b / e;
        let dpsi = I * k * (a * e - b / e);
        (w(psi, dpsi, fm, dfm) / wpm, w(fp, dfp, psi, dpsi) / wpm)
    };
    let (m11, m21) = column(y[0], y[1]);
    let (m12, m22) = column(y[2], y[3]);
    let m = TransferMatrix { k, m11, m12, m21, m22 };
    if !m.entries().iter().all(|&z| finite(z)) {
        return Err(NumericsError::NonFinite { x: l }.into());
    }
    Ok(m)
}
