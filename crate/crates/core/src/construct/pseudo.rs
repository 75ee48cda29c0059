use num_complex::Complex64 as C64;

use super::{
    base_pair_from_chi, check_wavenumbers, check_window, ConstructError, Potential, PrescribedSs, Result, I,
};
use crate::numerics::{ComplexProfile, DecayClass, Jet};

/// A real-valued amplitude `ρ` for the pseudo-Hermitian construction.
///
/// `riccati`, when present, evaluates `ρ' + ρ²` without the cancellation of
/// the two divergent terms at the singular points of `ρ`.
#[derive(Clone, Debug)]
pub struct RhoProfile {
    pub profile: ComplexProfile,
    pub riccati: Option<ComplexProfile>,
}

impl RhoProfile {
    pub fn new(profile: ComplexProfile) -> Self {
        RhoProfile { profile, riccati: None }
    }
}

/// `(k₁ - k₂)(k₁ + k₂ - 3a) + 3`.
pub fn odd_singular_rho_constraint(a: f64, k1: f64, k2: f64) -> f64 {
    (k1 - k2) * (k1 + k2 - 3.0 * a) + 3.0
}

// tanh(u)/u = Σ c_n u^{2n}
const TANHC: [f64; 6] = [
    1.0,
    -1.0 / 3.0,
    2.0 / 15.0,
    -17.0 / 315.0,
    62.0 / 2835.0,
    -1382.0 / 155925.0,
];

/// `tanh(a x) / x` as a jet, with a series near the origin.
fn tanh_over_x(t: &Jet, a: f64) -> Jet {
    let u = t.clone() * a;
    if (a * t.value().re).abs() < 0.05 {
        Jet::poly(u.square(), &TANHC) * a
    } else {
        u.tanh() / t.clone()
    }
}

/// `ρ(x) = 1/(x(x² + 1)) - (k₂ - k₁) tanh(a x)`, odd with a pole at the origin.
pub fn odd_singular_rho(a: f64, k1: f64, k2: f64) -> Result<RhoProfile> {
    check_wavenumbers(&[k1, k2])?;
    if !(a > 0.0 && a.is_finite()) {
        return Err(ConstructError::InvalidParameters(format!("a must be positive, got {a}")));
    }
    let residual = odd_singular_rho_constraint(a, k1, k2);
    if residual.abs() > 1e-12 {
        return Err(ConstructError::ConstraintViolated { residual });
    }
    let b = k2 - k1;
    let decay = DecayClass::Algebraic { power: 3.0 };
    let profile = ComplexProfile::analytic(move |x, len| {
        let t = Jet::var(x, len);
        (t.clone() * (t.square() + 1.0)).recip() - (t * a).tanh() * b
    })
    .with_asymptotes(C64::from(b), C64::from(-b))
    .with_singular_point(0.0, C64::from(1.0))
    .with_decay(decay);
    let riccati = ComplexProfile::analytic(move |x, len| {
        let t = Jet::var(x, len);
        let q = (t.square() + 1.0).recip();
        let th = (t.clone() * a).tanh();
        let sh = (t.clone() * a).sech();
        q.square() * -3.0 - tanh_over_x(&t, a) * q * (2.0 * b) + th.square() * (b * b) - sh.square() * (a * b)
    })
    .with_asymptotes(C64::from(b * b), C64::from(b * b))
    .with_decay(decay);
    Ok(RhoProfile { profile, riccati: Some(riccati) })
}

/// `χ₁ = ρ e^{iφ}` with `sin φ = ρ' / (k₁² - k₂² - ρ²)` and `cos φ ≥ 0`,
/// which makes `w₁` real-valued.
///
/// Written as `χ₁ = (ρ/D)(sgn D √(N₋N₊) + iρ')` with `D = k₁² - k₂² - ρ²` and
/// `N± = D ± ρ'`.
pub fn pseudo_hermitian_chi(rho: &RhoProfile, k1: f64, k2: f64) -> Result<ComplexProfile> {
    check_wavenumbers(&[k1, k2])?;
    let delta = k1 * k1 - k2 * k2;
    let p = &rho.profile;
    for s in p.singular_points() {
        if s.coeff.im != 0.0 || (s.coeff.re.abs() - 1.0).abs() > 1e-12 {
            return Err(ConstructError::NodeConditionViolated { at: s.x, residual: (s.coeff.norm() - 1.0).abs() });
        }
    }

    let rp = p.clone();
    let ric = rho.riccati.clone();
    let parts = move |x: f64, len: usize| -> (Jet, Jet, Jet) {
        let r = rp.jet_lossy(x, len + 1);
        let d1 = r.deriv();
        let r = r.truncate(len);
        let d = delta - r.square();
        let n_minus = match &ric {
            Some(q) => delta - q.jet_lossy(x, len),
            None => d.clone() - d1.clone(),
        };
        (r, d1, n_minus)
    };

    // Node condition: cos φ must vanish to second order at every pole of ρ.
    for s in p.singular_points() {
        let residual = match &rho.riccati {
            Some(q) => (delta - q.eval(s.x)?).norm(),
            None => {
                let prod = |h: f64| {
                    let (_, d1, nm) = parts(s.x + h, 1);
                    (nm.value() * (nm.value() + 2.0 * d1.value())).norm()
                };
                let near = prod(1e-3).max(prod(-1e-3));
                let far = prod(5e-2).max(prod(-5e-2));
                near / (1.0 + far)
            }
        };
        let tol = if rho.riccati.is_some() { 1e-9 } else { 20.0 };
        if !(residual <= tol) {
            return Err(ConstructError::NodeConditionViolated { at: s.x, residual });
        }
    }

    // sin φ must stay in [-1, 1].
    let half = check_window(p.decay());
    let h = 5e-3;
    let n = (2.0 * half / h).round() as usize;
    for i in 0..=n {
        let x = -half + h * i as f64;
        if p.singular_points().iter().any(|s| (x - s.x).abs() < 1e-3) {
            continue;
        }
        let (r, d1, nm) = parts(x, 1);
        let d = delta - r.value() * r.value();
        let prod = nm.value() * (nm.value() + 2.0 * d1.value());
        if !(prod.re >= -1e-12 * d.norm() * d.norm()) || !prod.re.is_finite() {
            let value = (d1.value() / d).re;
            return Err(ConstructError::SineOutOfRange { x, value });
        }
    }

    let mut chi = ComplexProfile::analytic(move |x, len| {
        let (r, d1, nm) = parts(x, len);
        let d = delta - r.square();
        let np = nm.clone() + d1.clone() * 2.0;
        let sign = if d.value().re < 0.0 { -1.0 } else { 1.0 };
        r / d * ((nm * np).sqrt() * sign + d1 * I)
    })
    .with_asymptotes(p.asym_minus(), p.asym_plus())
    .with_decay(p.decay());
    for s in p.singular_points() {
        chi = chi.with_singular_point(s.x, I);
    }
    Ok(chi)
}

/// Potential of the odd singular `ρ` family. Besides `k₁` and `k₂` the
/// construction forces the mirror SS at `-k₂`; for `k₂ = -k₁` the two
/// coincide and the SS at `k₁` is of second order.
pub fn pseudo_hermitian_potential(a: f64, k1: f64, k2: f64) -> Result<Potential> {
    let rho = odd_singular_rho(a, k1, k2)?;
    let chi = pseudo_hermitian_chi(&rho, k1, k2)?;
    let (w1, w2) = base_pair_from_chi(&chi, k1, k2)?;
    let profile = super::base::potential_profile(&w1);
    let mut prescribed = Vec::new();
    if k2 == -k1 {
        prescribed.push(PrescribedSs { k: k1, order: 2 });
        prescribed.push(PrescribedSs { k: k2, order: 1 });
    } else {
        prescribed.push(PrescribedSs { k: k1, order: 1 });
        prescribed.push(PrescribedSs { k: k2, order: 1 });
        prescribed.push(PrescribedSs { k: -k2, order: 1 });
    }
    Ok(Potential { profile, provenance: vec![w1, w2], prescribed_ss: prescribed })
}
