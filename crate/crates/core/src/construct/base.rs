use num_complex::Complex64 as C64;

use super::{asymptote_matches, check_wavenumbers, check_window, BaseFunction, ConstructError, Potential, PrescribedSs, Result, I};
use crate::numerics::{integrate_phase, minimize_modulus, ComplexProfile, DecayClass, Jet, NumericsError};

/// `U = -w² - i w' + k²` as a profile. Cancelled poles of `w` become
/// regularized points of `U`.
pub(crate) fn potential_profile(w: &BaseFunction) -> ComplexProfile {
    let wp = w.profile.clone();
    let k2 = w.k * w.k;
    let mut u = ComplexProfile::analytic(move |x, len| {
        let j = wp.jet_lossy(x, len + 1);
        -j.square() - I * j.deriv() + k2
    })
    .with_decay(w.profile.decay());
    for s in w.profile.singular_points() {
        u = u.with_regular_point(s.x, None);
    }
    for &b in w.profile.breakpoints() {
        u = u.with_breakpoint(b);
    }
    u
}

/// Builds the potential generated by a single base function.
pub fn potential_from_base(w: &BaseFunction) -> Result<Potential> {
    w.check_asymptotes()?;
    for s in w.profile.singular_points() {
        if (s.coeff - I).norm() > 1e-12 {
            return Err(ConstructError::NonCancellation { at: s.x });
        }
        // The declared coefficient may still lie about the actual behaviour.
        let raw = |d: f64| -> Result<f64> {
            let j = w.profile.jet(s.x + d, 2)?;
            let d1 = j.derivative(1).ok_or(NumericsError::NonFinite { x: s.x + d })?;
            Ok((-j.value() * j.value() - I * d1).norm())
        };
        let far = raw(2e-2)?.max(raw(-2e-2)?);
        let near = raw(1e-5)?.max(raw(-1e-5)?);
        if near > 100.0 * (1.0 + far) {
            return Err(ConstructError::NonCancellation { at: s.x });
        }
    }
    Ok(Potential {
        profile: potential_profile(w),
        provenance: vec![w.clone()],
        prescribed_ss: vec![PrescribedSs { k: w.k, order: 1 }],
    })
}

/// The SS-solution `ψ₀ = ρ exp(-i ∫_{x₀}^x w)` associated with a base function.
///
/// Each pole `i/(x - x_j)` of `w` is integrated in closed form, so ψ is
/// continued smoothly through the node instead of being glued from
/// independent pieces.
#[derive(Clone, Debug)]
pub struct WaveFunction {
    k: f64,
    phase: ComplexProfile,
    nodes: Vec<f64>,
    rho: C64,
    x0: f64,
    boundary: f64,
    rho_minus: C64,
    rho_plus: C64,
}

const PHASE_TOL: f64 = 1e-12;

fn node_factor(t: f64) -> f64 {
    t / (t * t + 1.0).sqrt()
}

impl WaveFunction {
    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn node_points(&self) -> &[f64] {
        &self.nodes
    }

    pub fn rho(&self) -> C64 {
        self.rho
    }

    pub fn reference_point(&self) -> f64 {
        self.x0
    }

    /// Half-width at which `ρ±` were read off.
    pub fn boundary(&self) -> f64 {
        self.boundary
    }

    /// `(ρ₋, ρ₊)` with `ψ ≈ ρ± e^{±ikx}` at `x = ±boundary`.
    pub fn asymptotic_amplitudes(&self) -> (C64, C64) {
        (self.rho_minus, self.rho_plus)
    }

    /// Lasing for `k > 0`, coherent perfect absorption for `k < 0`.
    pub fn is_lasing(&self) -> bool {
        self.k > 0.0
    }

    fn node_product(&self, x: f64) -> f64 {
        self.nodes.iter().map(|&xj| node_factor(x - xj)).product()
    }

    pub fn eval(&self, x: f64) -> Result<C64> {
        let s = integrate_phase(&self.phase, self.x0, x, PHASE_TOL * (1.0 + (x - self.x0).abs()))?;
        Ok(self.rho * self.node_product(x) * (-I * s).exp())
    }

    /// ψ on an arbitrary set of points, accumulating the phase integral
    /// between neighbours.
    pub fn sample(&self, xs: &[f64]) -> Result<Vec<C64>> {
        let mut order: Vec<usize> = (0..xs.len()).collect();
        order.sort_by(|&a, &b| xs[a].total_cmp(&xs[b]));
        let mut phase = vec![C64::new(0.0, 0.0); xs.len()];
        let split = order.partition_point(|&i| xs[i] < self.x0);
        let (mut at, mut acc) = (self.x0, C64::new(0.0, 0.0));
        for &i in &order[split..] {
            acc += integrate_phase(&self.phase, at, xs[i], PHASE_TOL * (1.0 + (xs[i] - at).abs()))?;
            at = xs[i];
            phase[i] = acc;
        }
        let (mut at, mut acc) = (self.x0, C64::new(0.0, 0.0));
        for &i in order[..split].iter().rev() {
            acc += integrate_phase(&self.phase, at, xs[i], PHASE_TOL * (1.0 + (xs[i] - at).abs()))?;
            at = xs[i];
            phase[i] = acc;
        }
        Ok(xs
            .iter()
            .zip(phase)
            .map(|(&x, s)| self.rho * self.node_product(x) * (-I * s).exp())
            .collect())
    }

    /// Rescales ρ so that `√(|ρ₋||ρ₊|) = 1`.
    pub fn normalized(&self) -> WaveFunction {
        let s = (self.rho_minus.norm() * self.rho_plus.norm()).sqrt();
        let mut out = self.clone();
        out.rho /= s;
        out.rho_minus /= s;
        out.rho_plus /= s;
        out
    }
}

/// SS-solution with `ρ±` read off at the default truncation half-width
/// (20 for exponential tails, 200 for algebraic ones).
pub fn ss_solution(w: &BaseFunction, x0: f64, rho: C64) -> Result<WaveFunction> {
    let boundary = match w.profile.decay() {
        DecayClass::Exponential => 20.0,
        DecayClass::Algebraic { .. } => 200.0,
    };
    ss_solution_with_boundary(w, x0, rho, boundary)
}

pub fn ss_solution_with_boundary(w: &BaseFunction, x0: f64, rho: C64, boundary: f64) -> Result<WaveFunction> {
    if rho.norm() == 0.0 || !rho.re.is_finite() || !rho.im.is_finite() {
        return Err(ConstructError::InvalidParameters("rho must be finite and nonzero".into()));
    }
    let nodes = w.nodes();
    if let Some(&xj) = nodes.iter().find(|&&xj| (x0 - xj).abs() < 1e-3) {
        return Err(ConstructError::InvalidParameters(format!("reference point {x0} sits on the node {xj}")));
    }
    if nodes.iter().any(|xj| xj.abs() >= boundary) {
        return Err(ConstructError::InvalidParameters("nodes must lie inside the boundary".into()));
    }
    let wp = w.profile.clone();
    let poles = nodes.clone();
    let mut phase = ComplexProfile::analytic(move |x, len| {
        let mut j = wp.jet_lossy(x, len);
        for &xj in &poles {
            let t = Jet::var(x - xj, len);
            j = j - I / (t.clone() * (t.square() + 1.0));
        }
        j
    })
    .with_asymptotes(w.profile.asym_minus(), w.profile.asym_plus())
    .with_decay(w.profile.decay());
    for &xj in &nodes {
        phase = phase.with_regular_point(xj, None);
    }
    let mut psi = WaveFunction {
        k: w.k,
        phase,
        nodes,
        rho: C64::new(1.0, 0.0),
        x0,
        boundary,
        rho_minus: C64::new(0.0, 0.0),
        rho_plus: C64::new(0.0, 0.0),
    };
    psi.rho = rho / psi.node_product(x0);
    let ends = psi.sample(&[-boundary, boundary])?;
    psi.rho_minus = ends[0] * (I * w.k * boundary).exp();
    psi.rho_plus = ends[1] * (-I * w.k * boundary).exp();
    Ok(psi)
}

/// Both base functions `w₁`, `w₂` sharing the difference `χ = w₂ - w₁`.
///
/// Real zeros of χ are located on a sampling grid and classified: a slope of
/// `i(k₁² - k₂²)` gives a removable point of both `w`, one third of it a common
/// node. Singularities `±i/(x - x₀)` of χ put the node on `w₂` (for `+i`) or
/// `w₁` (for `-i`) and leave the other function regular.
pub fn base_pair_from_chi(chi: &ComplexProfile, k1: f64, k2: f64) -> Result<(BaseFunction, BaseFunction)> {
    check_wavenumbers(&[k1, k2])?;
    let d = C64::from(k2 - k1);
    if !asymptote_matches(chi.asym_minus(), d) {
        return Err(ConstructError::AsymptoteMismatch { which: "chi at x -> -inf", expected: d, found: chi.asym_minus() });
    }
    if !asymptote_matches(chi.asym_plus(), -d) {
        return Err(ConstructError::AsymptoteMismatch { which: "chi at x -> +inf", expected: -d, found: chi.asym_plus() });
    }
    for s in chi.singular_points() {
        if (s.coeff - I).norm() > 1e-12 && (s.coeff + I).norm() > 1e-12 {
            return Err(ConstructError::BadSingularity { at: s.x, coeff: s.coeff });
        }
    }
    let delta = k1 * k1 - k2 * k2;
    let mut removable = Vec::new();
    let mut nodal = Vec::new();
    for z in real_zeros(chi)? {
        let slope = chi.derivative(z, 1)?;
        let tol = 1e-6 * (1.0 + delta.abs());
        if (slope - I * delta).norm() <= tol {
            let lim = chi.derivative(z, 2)? / (2.0 * (k2 * k2 - k1 * k1));
            removable.push((z, lim));
        } else if (slope - I * delta / 3.0).norm() <= tol {
            nodal.push(z);
        } else {
            return Err(ConstructError::BadZero { at: z, slope });
        }
    }

    let make = |sign: f64, k: f64| -> Result<BaseFunction> {
        let c = chi.clone();
        let mut p = ComplexProfile::analytic(move |x, len| {
            let j = c.jet_lossy(x, len + 1);
            let q = (I * j.deriv() + delta) / (j.clone() * 2.0);
            j.truncate(len) * (0.5 * sign) - q
        })
        .with_asymptotes(C64::from(k), C64::from(-k))
        .with_decay(chi.decay());
        for &(z, lim) in &removable {
            p = p.with_regular_point(z, Some(lim));
        }
        for &z in &nodal {
            p = p.with_singular_point(z, I);
        }
        for s in chi.singular_points() {
            // +i in χ: pole of w₂ (sign +1), -i: pole of w₁.
            let pole_here = (s.coeff.im > 0.0) == (sign > 0.0);
            p = if pole_here { p.with_singular_point(s.x, I) } else { p.with_regular_point(s.x, None) };
        }
        for &b in chi.breakpoints() {
            p = p.with_breakpoint(b);
        }
        BaseFunction::new(p, k)
    };
    Ok((make(-1.0, k1)?, make(1.0, k2)?))
}

/// Real zeros of a profile: local minima of `|f|` on a fine grid, refined by
/// Brent and accepted when the modulus essentially vanishes.
fn real_zeros(f: &ComplexProfile) -> Result<Vec<f64>> {
    let half = check_window(f.decay());
    let h = 5e-3;
    let n = (2.0 * half / h).round() as usize + 1;
    let avoid: Vec<f64> = f.singular_points().iter().map(|s| s.x).collect();
    let scale = 1.0 + f.asym_minus().norm().max(f.asym_plus().norm());
    let mut samples = Vec::with_capacity(n);
    for i in 0..n {
        let x = -half + h * i as f64;
        if avoid.iter().any(|a| (x - a).abs() < 2.0 * h) {
            samples.push((x, f64::INFINITY));
            continue;
        }
        samples.push((x, f.eval(x)?.norm()));
    }
    let mut zeros: Vec<f64> = Vec::new();
    for i in 1..n.saturating_sub(1) {
        let (x, v) = samples[i];
        if !(v <= samples[i - 1].1 && v < samples[i + 1].1 && v < 0.05 * scale) {
            continue;
        }
        let g = |t: f64| -> crate::numerics::Result<f64> { Ok(f.eval(t)?.norm()) };
        let (z, fz) = match minimize_modulus(g, (x - h, x + h), 1e-13) {
            Ok(r) => r,
            Err(NumericsError::NoMinimum { .. }) => continue,
            Err(e) => return Err(e.into()),
        };
        if fz <= 1e-8 * scale && zeros.last().is_none_or(|&p| (z - p).abs() > h) {
            zeros.push(z);
        }
    }
    Ok(zeros)
}
