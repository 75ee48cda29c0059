use num_complex::Complex64 as C64;

use super::{check_wavenumbers, tanh_sech_chi, BaseFunction, ConstructError, Potential, PrescribedSs, Result, I};
use crate::numerics::{ComplexProfile, Jet};

/// `w̃ = -k₁ tanh x - ½ sech x + i k₁ sech x`.
pub fn second_order_base(k1: f64) -> Result<BaseFunction> {
    check_wavenumbers(&[k1])?;
    let c = C64::new(-0.5, k1);
    let p = ComplexProfile::analytic(move |x, len| {
        let t = Jet::var(x, len);
        t.tanh() * -k1 + t.sech() * c
    })
    .with_asymptotes(C64::from(k1), C64::from(-k1));
    BaseFunction::new(p, k1)
}

/// `Ũ = (2(k₁ + i/2)²(1 + i sinh x) + ¼) sech² x`, carrying a second-order SS at `k₁`.
pub fn second_order_potential(k1: f64) -> Result<Potential> {
    let w = second_order_base(k1)?;
    let q = 2.0 * (k1 + 0.5 * I) * (k1 + 0.5 * I);
    let profile = ComplexProfile::analytic(move |x, len| {
        let t = Jet::var(x, len);
        let s = t.sech();
        // sinh x sech² x = tanh x sech x
        s.square() * (q + 0.25) + t.tanh() * s * (I * q)
    });
    Ok(Potential { profile, provenance: vec![w], prescribed_ss: vec![PrescribedSs { k: k1, order: 2 }] })
}

/// The family `k₂ ↦ χ(x; k₂)` of the tanh–sech form with `a₀ = k₁ - k₂`, `a₁ = 0`,
/// which collapses to zero at `k₂ = k₁`.
pub fn tanh_sech_family(k1: f64) -> impl Fn(f64) -> Result<ComplexProfile> {
    move |k2: f64| {
        let d = k1 - k2;
        if d == 0.0 {
            return Ok(ComplexProfile::constant(C64::new(0.0, 0.0)));
        }
        tanh_sech_chi(k1, k2, C64::from(d), C64::from(0.0))
    }
}

/// Numerical collision limit of `w₁`, `w₂` as `k₂ → k₁`:
/// `w = -(i ∂²χ/∂k₂∂x - 2k₂) / (2 ∂χ/∂k₂)` at `k₂ = k₁ + eps`, with `∂/∂k₂` by
/// central differences.
pub fn collision_limit_base<F>(family: F, k1: f64, eps: f64) -> Result<BaseFunction>
where
    F: Fn(f64) -> Result<ComplexProfile>,
{
    check_wavenumbers(&[k1])?;
    if !(eps.is_finite() && eps != 0.0) {
        return Err(ConstructError::InvalidParameters(format!("eps must be nonzero, got {eps}")));
    }
    let at_k1 = family(k1)?;
    for i in 0..=400 {
        let x = -10.0 + 0.05 * i as f64;
        if at_k1.singular_points().iter().any(|s| (s.x - x).abs() < 1e-3) {
            continue;
        }
        let j = at_k1.jet(x, 2)?;
        let r = j.value().norm().max(j.derivative(1).map_or(f64::INFINITY, |d| d.norm()));
        if !(r <= 1e-10) {
            return Err(ConstructError::NoCollision { x, residual: r });
        }
    }
    let k2 = k1 + eps;
    let h = 1e-5 * k2.abs().max(1.0);
    let plus = family(k2 + h)?;
    let minus = family(k2 - h)?;
    let dm = (plus.asym_minus() - minus.asym_minus()) / (2.0 * h);
    let dp = (plus.asym_plus() - minus.asym_plus()) / (2.0 * h);
    let p = ComplexProfile::analytic(move |x, len| {
        let dchi = (plus.jet_lossy(x, len + 1) - minus.jet_lossy(x, len + 1)) / (2.0 * h);
        let num = I * dchi.deriv() - 2.0 * k2;
        -(num / (dchi.truncate(len) * 2.0))
    })
    .with_asymptotes(k2 / dm, k2 / dp);
    BaseFunction::new(p, k2)
}
