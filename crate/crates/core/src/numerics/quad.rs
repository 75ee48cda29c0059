use num_complex::Complex64 as C64;

use super::profile::ComplexProfile;
use super::{NumericsError, Result};

const MAX_DEPTH: u32 = 48;

/// `∫_{x0}^{x} w(ξ) dξ` by adaptive Simpson quadrature with absolute error `tol`.
pub fn integrate_phase(w: &ComplexProfile, x0: f64, x: f64, tol: f64) -> Result<C64> {
    let (a, b) = if x0 <= x { (x0, x) } else { (x, x0) };
    if let Some(s) = w.singular_points().iter().find(|s| s.x > a && s.x < b) {
        return Err(NumericsError::SingularOnPath { a, b, at: s.x });
    }
    if a == b {
        return Ok(C64::new(0.0, 0.0));
    }
    let f = |t: f64| w.eval(t);
    // Split long intervals up front so the initial Simpson estimate cannot
    // alias a localized feature.
    let pieces = ((b - a) / 0.5).ceil().max(1.0) as usize;
    let h = (b - a) / pieces as f64;
    let piece_tol = tol / pieces as f64;
    let mut total = C64::new(0.0, 0.0);
    for i in 0..pieces {
        let lo = a + h * i as f64;
        let hi = if i + 1 == pieces { b } else { lo + h };
        let fa = f(lo)?;
        let fb = f(hi)?;
        let m = 0.5 * (lo + hi);
        let fm = f(m)?;
        let whole = (hi - lo) / 6.0 * (fa + 4.0 * fm + fb);
        total += simpson(&f, lo, hi, fa, fm, fb, whole, piece_tol, MAX_DEPTH)?;
    }
    Ok(if x0 <= x { total } else { -total })
}

#[allow(clippy::too_many_arguments)]
fn simpson(
    f: &dyn Fn(f64) -> Result<C64>,
    a: f64,
    b: f64,
    fa: C64,
    fm: C64,
    fb: C64,
    whole: C64,
    tol: f64,
    depth: u32,
) -> Result<C64> {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm)?;
    let frm = f(rm)?;
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.norm() <= 15.0 * tol {
        return Ok(left + right + delta / 15.0);
    }
    Ok(simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)?
        + simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)?)
}
