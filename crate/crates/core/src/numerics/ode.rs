//! Dormand–Prince 5(4) integrator for complex-valued first-order systems.

use num_complex::Complex64 as C64;

use super::{NumericsError, Result};

#[derive(Clone, Copy, Debug)]
pub struct OdeOptions {
    /// Local error tolerance, applied as `tol * (1 + |y|)` per component.
    pub tol: f64,
    pub first_step: Option<f64>,
    pub max_step: f64,
    pub max_steps: usize,
}

impl Default for OdeOptions {
    fn default() -> Self {
        OdeOptions { tol: 1e-10, first_step: None, max_step: 1.0, max_steps: 5_000_000 }
    }
}

// Butcher tableau (Dormand & Prince 1980).
const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// b - b* (fifth minus embedded fourth order weights)
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

/// Integrates `y' = rhs(x, y)` from `x0` to `x1` with default options and
/// local tolerance `tol`.
pub fn rk_integrate<F>(rhs: F, y0: &[C64], x0: f64, x1: f64, tol: f64) -> Result<Vec<C64>>
where
    F: Fn(f64, &[C64], &mut [C64]),
{
    rk_integrate_with(rhs, y0, x0, x1, OdeOptions { tol, ..Default::default() })
}

pub fn rk_integrate_with<F>(rhs: F, y0: &[C64], x0: f64, x1: f64, opts: OdeOptions) -> Result<Vec<C64>>
where
    F: Fn(f64, &[C64], &mut [C64]),
{
    let n = y0.len();
    let mut y = y0.to_vec();
    if x0 == x1 {
        return Ok(y);
    }
    let dir = (x1 - x0).signum();
    let span = (x1 - x0).abs();
    let mut h = opts.first_step.unwrap_or(1e-2).min(span).min(opts.max_step);
    let mut x = x0;

    let zero = C64::new(0.0, 0.0);
    let mut k1 = vec![zero; n];
    let mut k2 = vec![zero; n];
    let mut k3 = vec![zero; n];
    let mut k4 = vec![zero; n];
    let mut k5 = vec![zero; n];
    let mut k6 = vec![zero; n];
    let mut k7 = vec![zero; n];
    let mut tmp = vec![zero; n];
    let mut y_new = vec![zero; n];

    rhs(x, &y, &mut k1);
    let mut steps = 0usize;
    while dir * (x1 - x) > 0.0 {
        if steps >= opts.max_steps {
            return Err(NumericsError::StepUnderflow { x, h });
        }
        steps += 1;
        let last = h >= (x1 - x).abs();
        if last {
            h = (x1 - x).abs();
        }
        let hs = dir * h;

        for i in 0..n {
            tmp[i] = y[i] + hs * (A21 * k1[i]);
        }
        rhs(x + C2 * hs, &tmp, &mut k2);
        for i in 0..n {
            tmp[i] = y[i] + hs * (A31 * k1[i] + A32 * k2[i]);
        }
        rhs(x + C3 * hs, &tmp, &mut k3);
        for i in 0..n {
            tmp[i] = y[i] + hs * (A41 * k1[i] + A42 * k2[i] + A43 * k3[i]);
        }
        rhs(x + C4 * hs, &tmp, &mut k4);
        for i in 0..n {
            tmp[i] = y[i] + hs * (A51 * k1[i] + A52 * k2[i] + A53 * k3[i] + A54 * k4[i]);
        }
        rhs(x + C5 * hs, &tmp, &mut k5);
        for i in 0..n {
            tmp[i] = y[i]
                + hs * (A61 * k1[i] + A62 * k2[i] + A63 * k3[i] + A64 * k4[i] + A65 * k5[i]);
        }
        let x_end = if last { x1 } else { x + hs };
        rhs(x_end, &tmp, &mut k6);
        for i in 0..n {
            y_new[i] = y[i]
                + hs * (B1 * k1[i] + B3 * k3[i] + B4 * k4[i] + B5 * k5[i] + B6 * k6[i]);
        }
        rhs(x_end, &y_new, &mut k7);

        let mut err = 0.0f64;
        for i in 0..n {
            let e = hs
                * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
            let sc = opts.tol * (1.0 + y[i].norm().max(y_new[i].norm()));
            err = err.max(e.norm() / sc);
        }
        if !err.is_finite() {
            h *= 0.2;
        } else if err <= 1.0 {
            x = x_end;
            std::mem::swap(&mut y, &mut y_new);
            std::mem::swap(&mut k1, &mut k7);
            let fac = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
            h = (h * fac).min(opts.max_step);
        } else {
            h *= (0.9 * err.powf(-0.2)).clamp(0.1, 0.9);
        }
        if h < 1e-14 * (1.0 + x.abs()) && dir * (x1 - x) > 0.0 {
            return Err(NumericsError::StepUnderflow { x, h });
        }
    }
    Ok(y)
}
