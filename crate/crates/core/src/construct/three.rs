use std::sync::Arc;

use num_complex::Complex64 as C64;

use super::base::potential_profile;
use super::{base_pair_from_chi, check_wavenumbers, BaseFunction, ConstructError, Potential, PrescribedSs, Result, I};
use crate::numerics::{ComplexProfile, DecayClass, Jet, RealGrid};

/// `ν(x) = (k₁ - k₂)/(k₂ - k₃) + (ix + z) e^{-x²}`.
pub fn gaussian_nu(k1: f64, k2: f64, k3: f64, z: C64) -> Result<ComplexProfile> {
    check_wavenumbers(&[k1, k2, k3])?;
    let inf = (k1 - k2) / (k2 - k3);
    Ok(ComplexProfile::analytic(move |x, len| {
        let t = Jet::var(x, len);
        (t.clone() * I + z) * (-t.square()).exp() + inf
    })
    .with_asymptotes(C64::from(inf), C64::from(inf)))
}

/// Coefficients `(1 + ν, -iν', (k₂² - k₃²)ν² + (k₂² - k₁²)ν)` of the quadratic for χ.
///
/// Substituting `χ₂ = χ₁/ν` into the two expressions for `w₂` gives the
/// `χ₁ν'` term with a minus sign.
fn quadratic(nu: &Jet, k1: f64, k2: f64, k3: f64) -> (Jet, Jet, Jet) {
    let n = nu.clone().truncate(nu.len() - 1);
    let a = n.clone() + 1.0;
    let b = nu.deriv() * -I;
    let c = n.square() * (k2 * k2 - k3 * k3) + n * (k2 * k2 - k1 * k1);
    (a, b, c)
}

/// Both roots of `a χ² + b χ + c = 0`, each evaluated by whichever of the two
/// equivalent formulas avoids cancellation.
fn roots(a: &Jet, b: &Jet, c: &Jet) -> [Jet; 2] {
    let s = (b.square() - a.clone() * c.clone() * 4.0).sqrt();
    let plus = -b.clone() + s.clone();
    let minus = -b.clone() - s;
    let (big, small_sign_big) = if plus.value().norm() >= minus.value().norm() { (plus, true) } else { (minus, false) };
    let r_big = big.clone() / (a.clone() * 2.0);
    let r_other = if big.value().norm() == 0.0 { r_big.clone() } else { c.clone() * 2.0 / big };
    if small_sign_big {
        [r_big, r_other]
    } else {
        [r_other, r_big]
    }
}

struct Branch {
    x_min: f64,
    step: f64,
    values: Vec<C64>,
}

impl Branch {
    fn reference(&self, x: f64) -> C64 {
        let i = ((x - self.x_min) / self.step).round();
        let i = i.clamp(0.0, (self.values.len() - 1) as f64) as usize;
        self.values[i]
    }
}

const BRANCH_STEP: f64 = 2e-3;

/// `χ₁` solving `(1 + ν)χ² - iν'χ + (k₂² - k₃²)ν² + (k₂² - k₁²)ν = 0`.
///
/// The branch is followed by continuation on a grid over `[-L, L]`, seeded at
/// `-L` with the root nearest `k₂ - k₁`. Away from the grid nodes the root
/// closest to the nearest node value is taken. The declared asymptotes are the
/// continued values at `±L`; whether they switch sign as required is left to
/// [`base_pair_from_chi`].
pub fn chi_from_nu(nu: &ComplexProfile, k1: f64, k2: f64, k3: f64) -> Result<ComplexProfile> {
    check_wavenumbers(&[k1, k2, k3])?;
    let half = match nu.decay() {
        DecayClass::Exponential => 20.0,
        DecayClass::Algebraic { .. } => 200.0,
    };
    let n = (2.0 * half / BRANCH_STEP).round() as usize + 1;
    let mut values = Vec::with_capacity(n);
    let seed = C64::from(k2 - k1);
    let mut prev = seed;
    let mut worst = 0.0f64;
    for i in 0..n {
        let x = -half + BRANCH_STEP * i as f64;
        let j = nu.jet(x, 2)?;
        let (a, b, c) = quadratic(&j, k1, k2, k3);
        if a.value().norm() < 1e-12 {
            return Err(ConstructError::DegenerateLeadingCoefficient { x });
        }
        let [r1, r2] = roots(&a, &b, &c);
        let (r1, r2) = (r1.value(), r2.value());
        let gap = (r1 - r2).norm();
        let (d1, d2) = ((r1 - prev).norm(), (r2 - prev).norm());
        let (pick, near, far) = if d1 <= d2 { (r1, d1, d2) } else { (r2, d2, d1) };
        if gap < 1e-9 * (1.0 + prev.norm()) {
            return Err(ConstructError::BranchAmbiguity { x, reason: "the two roots coalesce".into() });
        }
        if i > 0 && near > 0.25 * far {
            return Err(ConstructError::BranchAmbiguity {
                x,
                reason: format!("continuation step {near:.3e} is comparable to the root gap {gap:.3e}"),
            });
        }
        let scale = a.value().norm() * pick.norm_sqr() + b.value().norm() * pick.norm() + c.value().norm();
        let res = (a.value() * pick * pick + b.value() * pick + c.value()).norm() / scale.max(1e-300);
        worst = worst.max(res);
        values.push(pick);
        prev = pick;
    }
    if worst > 1e-9 {
        return Err(ConstructError::BackSubstitution { residual: worst });
    }
    let first = values[0];
    let branch = Arc::new(Branch { x_min: -half, step: BRANCH_STEP, values });
    let nu_c = nu.clone();
    Ok(ComplexProfile::analytic(move |x, len| {
        let j = nu_c.jet_lossy(x, len + 1);
        let (a, b, c) = quadratic(&j, k1, k2, k3);
        let [r1, r2] = roots(&a, &b, &c);
        let r = branch.reference(x);
        if (r1.value() - r).norm() <= (r2.value() - r).norm() {
            r1
        } else {
            r2
        }
    })
    .with_asymptotes(first, prev)
    .with_decay(nu.decay()))
}

/// Max over the grid of the back-substitution residual of χ in the quadratic,
/// relative to the size of its terms.
pub fn nu_chi_residual(nu: &ComplexProfile, chi: &ComplexProfile, k1: f64, k2: f64, k3: f64, grid: &RealGrid) -> Result<f64> {
    let mut worst = 0.0f64;
    for x in grid.points() {
        let (a, b, c) = quadratic(&nu.jet(x, 2)?, k1, k2, k3);
        let v = chi.eval(x)?;
        let (a, b, c) = (a.value(), b.value(), c.value());
        let scale = a.norm() * v.norm_sqr() + b.norm() * v.norm() + c.norm();
        worst = worst.max((a * v * v + b * v + c).norm() / scale.max(1e-300));
    }
    Ok(worst)
}

/// Three base functions sharing one potential: `w₁`, `w₂` from `χ₁` and
/// `w₃ = w₂ + χ₁/ν`.
pub fn three_ss_bases(nu: &ComplexProfile, k1: f64, k2: f64, k3: f64) -> Result<(BaseFunction, BaseFunction, BaseFunction)> {
    let chi1 = chi_from_nu(nu, k1, k2, k3)?;
    let half = 20.0;
    for i in 0..=(2.0 * half / BRANCH_STEP) as usize {
        let x = -half + BRANCH_STEP * i as f64;
        if nu.eval(x)?.norm() < 1e-10 {
            return Err(ConstructError::NuVanishes { x });
        }
    }
    let (w1, w2) = base_pair_from_chi(&chi1, k1, k2)?;
    let (c1, n, w2p) = (chi1.clone(), nu.clone(), w2.profile.clone());
    let mut p3 = ComplexProfile::analytic(move |x, len| w2p.jet_lossy(x, len) + c1.jet_lossy(x, len) / n.jet_lossy(x, len))
        .with_asymptotes(C64::from(k3), C64::from(-k3))
        .with_decay(chi1.decay());
    for s in w2.profile.singular_points() {
        p3 = p3.with_singular_point(s.x, s.coeff);
    }
    for r in w2.profile.regular_points() {
        p3 = p3.with_regular_point(r.x, None);
    }
    let w3 = BaseFunction::new(p3, k3)?;

    let grid = RealGrid::new(-10.0, 10.0, 2001)?;
    let mut scale = 0.0f64;
    let mut dev = 0.0f64;
    for x in grid.points() {
        let u1 = w1.generated_potential(x)?;
        let u3 = w3.generated_potential(x)?;
        scale = scale.max(u1.norm());
        dev = dev.max((u1 - u3).norm());
    }
    let deviation = dev / scale.max(1.0);
    if deviation > 1e-7 {
        return Err(ConstructError::InconsistentPotential { deviation });
    }
    Ok((w1, w2, w3))
}

pub fn three_ss_potential(nu: &ComplexProfile, k1: f64, k2: f64, k3: f64) -> Result<Potential> {
    let (w1, w2, w3) = three_ss_bases(nu, k1, k2, k3)?;
    let profile = potential_profile(&w1);
    Ok(Potential {
        profile,
        provenance: vec![w1, w2, w3],
        prescribed_ss: [k1, k2, k3].iter().map(|&k| PrescribedSs { k, order: 1 }).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fig7_nu() -> ComplexProfile {
        gaussian_nu(1.0, 2.0, 3.0, C64::new(-0.5, -0.1)).unwrap()
    }

    #[test]
    fn nu_values() {
        let z = C64::new(-0.5, -0.1);
        let nu = fig7_nu();
        assert!((nu.eval(0.0).unwrap() - (C64::from(1.0) + z)).norm() < 1e-15);
        assert!((nu.eval(6.0).unwrap() - 1.0).norm() < 1e-14);
        assert!((nu.eval(-6.0).unwrap() - 1.0).norm() < 1e-14);
    }

    #[test]
    fn constant_nu_gives_constant_root() {
        // ν ≡ (k₁-k₂)/(k₂-k₃): the quadratic reduces to χ² = (k₁-k₂)²
        let (k1, k2, k3) = (1.0, 2.0, 3.0);
        let nu = ComplexProfile::constant(C64::from((k1 - k2) / (k2 - k3)));
        let j = nu.jet(0.3, 2).unwrap();
        let (a, b, c) = quadratic(&j, k1, k2, k3);
        let [r1, r2] = roots(&a, &b, &c);
        let mut rs = [r1.value().re, r2.value().re];
        rs.sort_by(f64::total_cmp);
        assert!((rs[0] + 1.0).abs() < 1e-14 && (rs[1] - 1.0).abs() < 1e-14);
        // continuation keeps the seed root, so no sign switch
        let chi = chi_from_nu(&nu, k1, k2, k3).unwrap();
        for x in [-12.0, 0.0, 3.0, 19.0] {
            assert!((chi.eval(x).unwrap() - 1.0).norm() < 1e-14);
        }
        assert_eq!(chi.asym_plus(), C64::from(1.0));
        assert_eq!(base_pair_from_chi(&chi, k1, k2).unwrap_err().name(), "AsymptoteMismatch");
    }

    #[test]
    fn fig7_chi_has_switching_asymptotes() {
        let (k1, k2, k3) = (1.0, 2.0, 3.0);
        let nu = fig7_nu();
        let chi = chi_from_nu(&nu, k1, k2, k3).unwrap();
        assert!((chi.eval(-15.0).unwrap() - 1.0).norm() < 1e-9);
        assert!((chi.eval(15.0).unwrap() + 1.0).norm() < 1e-9);
        let grid = RealGrid::new(-10.0, 10.0, 4001).unwrap();
        assert!(nu_chi_residual(&nu, &chi, k1, k2, k3, &grid).unwrap() <= 1e-9);
        // continuity: no jumps between neighbouring samples
        let pts = grid.points();
        for w in pts.windows(2) {
            assert!((chi.eval(w[1]).unwrap() - chi.eval(w[0]).unwrap()).norm() < 0.1);
        }
    }

    #[test]
    fn three_bases_share_the_potential() {
        let (w1, w2, w3) = three_ss_bases(&fig7_nu(), 1.0, 2.0, 3.0).unwrap();
        for x in [-4.0, -0.7, 0.0, 0.33, 2.5] {
            let u1 = w1.generated_potential(x).unwrap();
            let u2 = w2.generated_potential(x).unwrap();
            let u3 = w3.generated_potential(x).unwrap();
            assert!((u1 - u2).norm() < 1e-9 * (1.0 + u1.norm()));
            assert!((u1 - u3).norm() < 1e-9 * (1.0 + u1.norm()));
        }
        assert!((w3.eval(-25.0).unwrap() - 3.0).norm() < 1e-9);
        assert!((w3.eval(25.0).unwrap() + 3.0).norm() < 1e-9);
    }
}
