use num_complex::Complex64 as C64;

use super::base::potential_profile;
use super::{base_pair_from_chi, check_wavenumbers, ConstructError, Potential, PrescribedSs, Result, I};
use crate::numerics::{ComplexProfile, Jet};

/// `χ(x) = (k₁ - k₂) tanh x + i a₀ sech(x - a₁)` with complex `a₀`, `a₁`.
pub fn tanh_sech_chi(k1: f64, k2: f64, a0: C64, a1: C64) -> Result<ComplexProfile> {
    check_wavenumbers(&[k1, k2])?;
    if a0.norm() == 0.0 {
        return Err(ConstructError::ZeroAmplitude);
    }
    let d = k1 - k2;
    Ok(ComplexProfile::analytic(move |x, len| {
        let t = Jet::var(x, len);
        t.tanh() * d + (t - a1).sech() * (I * a0)
    })
    .with_asymptotes(C64::from(-d), C64::from(d)))
}

/// `χ(x) = (k₁ - k₂) tanh x + i sech(x) / x`, singular at the origin.
pub fn singular_node_chi(k1: f64, k2: f64) -> Result<ComplexProfile> {
    check_wavenumbers(&[k1, k2])?;
    let d = k1 - k2;
    Ok(ComplexProfile::analytic(move |x, len| {
        let t = Jet::var(x, len);
        t.tanh() * d + t.sech() * I / t
    })
    .with_asymptotes(C64::from(-d), C64::from(d))
    .with_singular_point(0.0, I))
}

/// Two-SS potential generated by `χ`; `U` is evaluated through `w₁`.
pub fn two_ss_potential(chi: &ComplexProfile, k1: f64, k2: f64) -> Result<Potential> {
    let (w1, w2) = base_pair_from_chi(chi, k1, k2)?;
    let profile = potential_profile(&w1);
    Ok(Potential {
        profile,
        provenance: vec![w1, w2],
        prescribed_ss: vec![PrescribedSs { k: k1, order: 1 }, PrescribedSs { k: k2, order: 1 }],
    })
}

/// Self-dual potential (`k₂ = -k₁`) written directly in terms of χ:
/// `U = [3χ'² - 2χχ'' - χ⁴] / (4χ²) + k₁²`.
pub fn selfdual_potential_from_chi(chi: &ComplexProfile, k1: f64) -> Result<Potential> {
    let (w1, w2) = base_pair_from_chi(chi, k1, -k1)?;
    let c = chi.clone();
    let k1sq = k1 * k1;
    let mut profile = ComplexProfile::analytic(move |x, len| {
        let j = c.jet_lossy(x, len + 2);
        let d1 = j.deriv();
        let d2 = d1.deriv();
        let j = j.truncate(len);
        let d1 = d1.truncate(len);
        let num = d1.square() * 3.0 - j.clone() * d2 * 2.0 - j.square().square();
        num / (j.square() * 4.0) + k1sq
    })
    .with_decay(chi.decay());
    // Points where χ vanishes or diverges cancel in the quotient.
    for r in w1.profile.regular_points().iter().chain(w2.profile.regular_points()) {
        profile = profile.with_regular_point(r.x, None);
    }
    for s in w1.profile.singular_points().iter().chain(w2.profile.singular_points()) {
        profile = profile.with_regular_point(s.x, None);
    }
    Ok(Potential {
        profile,
        provenance: vec![w1, w2],
        prescribed_ss: vec![PrescribedSs { k: k1, order: 1 }, PrescribedSs { k: -k1, order: 1 }],
    })
}

/// Closed-form self-dual potential for the tanh–sech χ with `k₂ = -k₁`.
///
/// `sinh` powers are folded into `tanh`/`sech` so the expression stays
/// finite for large `|x|`.
pub fn closed_form_two_ss_potential(k1: f64, a0: C64, a1: C64) -> Result<Potential> {
    let chi = tanh_sech_chi(k1, -k1, a0, a1)?;
    let (w1, w2) = base_pair_from_chi(&chi, k1, -k1)?;
    let k1sq = k1 * k1;
    let profile = ComplexProfile::analytic(move |x, len| {
        let t = Jet::var(x, len);
        let y = t.clone() - a1;
        let (th, sh) = (t.tanh(), t.sech());
        let (ty, sy) = (y.tanh(), y.sech());
        let th2 = th.square();
        let sh2 = sh.square();
        let sy2 = sy.square();
        let term1 = (sh2.square() * 3.0 + sh2.clone() * th2.clone() * 4.0 - th2.square() * (4.0 * k1sq)) * k1sq;
        let bracket = th.clone() * sy2.clone() * 2.0
            - ty * sh2.clone() * 3.0
            - th.clone() * (th2.clone() * (8.0 * k1sq) + 1.0 - sh2 * 2.0);
        let term2 = sy.clone() * bracket * (I * a0 * k1);
        let term3 = sy2.clone() * (sy2.clone() + 1.0 - th2 * (24.0 * k1sq)) * (-a0 * a0 / 4.0);
        let term4 = th.clone() * sy2.clone() * sy.clone() * (2.0 * I * a0 * a0 * a0 * k1);
        let term5 = sy2.square() * (-a0 * a0 * a0 * a0 / 4.0);
        let chi1 = th * (2.0 * k1) + sy * (I * a0);
        (term1 + term2 + term3 + term4 + term5) / chi1.square() + k1sq
    });
    Ok(Potential {
        profile,
        provenance: vec![w1, w2],
        prescribed_ss: vec![PrescribedSs { k: k1, order: 1 }, PrescribedSs { k: -k1, order: 1 }],
    })
}
