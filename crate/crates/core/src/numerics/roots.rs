use num_complex::Complex64 as C64;

use super::{NumericsError, Result};

const GOLDEN: f64 = 0.381_966_011_250_105_1;

/// Locates the minimizer of `|f|` on `bracket` by Brent's method (golden
/// section with parabolic steps). Whether `|f(k*)|` qualifies as a zero is
/// left to the caller.
///
/// Returns [`NumericsError::NoMinimum`] when `|f|` is monotone on the bracket,
/// i.e. the minimizer sits on an endpoint.
pub fn find_real_root<F>(f: F, bracket: (f64, f64), tol: f64) -> Result<f64>
where
    F: Fn(f64) -> C64,
{
    let (k, _) = minimize_modulus(|x| Ok(f(x).norm()), bracket, tol)?;
    Ok(k)
}

/// Brent minimization of a fallible real objective; returns `(x*, g(x*))`.
pub fn minimize_modulus<G>(g: G, bracket: (f64, f64), tol: f64) -> Result<(f64, f64)>
where
    G: Fn(f64) -> Result<f64>,
{
    let (mut a, mut b) = if bracket.0 <= bracket.1 { bracket } else { (bracket.1, bracket.0) };
    let (lo, hi) = (a, b);
    let ga = g(a)?;
    let gb = g(b)?;

    let mut x = a + GOLDEN * (b - a);
    let mut w = x;
    let mut v = x;
    let mut fx = g(x)?;
    let mut fw = fx;
    let mut fv = fx;
    let mut d: f64 = 0.0;
    let mut e: f64 = 0.0;

    for _ in 0..500 {
        let m = 0.5 * (a + b);
        let tol1 = tol.max(1e-15 * x.abs());
        let tol2 = 2.0 * tol1;
        if (x - m).abs() <= tol2 - 0.5 * (b - a) {
            break;
        }
        let mut golden = true;
        if e.abs() > tol1 {
            let r = (x - w) * (fx - fv);
            let mut q = (x - v) * (fx - fw);
            let mut p = (x - v) * q - (x - w) * r;
            q = 2.0 * (q - r);
            if q > 0.0 {
                p = -p;
            }
            q = q.abs();
            let e_old = e;
            e = d;
            if p.abs() < (0.5 * q * e_old).abs() && p > q * (a - x) && p < q * (b - x) {
                d = p / q;
                let u = x + d;
                if u - a < tol2 || b - u < tol2 {
                    d = tol1.copysign(m - x);
                }
                golden = false;
            }
        }
        if golden {
            e = if x >= m { a - x } else { b - x };
            d = GOLDEN * e;
        }
        let u = if d.abs() >= tol1 { x + d } else { x + tol1.copysign(d) };
        let fu = g(u)?;
        if fu <= fx {
            if u >= x {
                a = x;
            } else {
                b = x;
            }
            v = w;
            fv = fw;
            w = x;
            fw = fx;
            x = u;
            fx = fu;
        } else {
            if u < x {
                a = u;
            } else {
                b = u;
            }
            if fu <= fw || w == x {
                v = w;
                fv = fw;
                w = u;
                fw = fu;
            } else if fu <= fv || v == x || v == w {
                v = u;
                fv = fu;
            }
        }
    }
    let edge = 4.0 * tol.max(1e-12 * (hi - lo));
    if (x - lo <= edge && ga <= fx) || (hi - x <= edge && gb <= fx) {
        return Err(NumericsError::NoMinimum { a: lo, b: hi });
    }
    Ok((x, fx))
}
