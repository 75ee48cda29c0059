//! Truncated Taylor expansions ("jets") over complex numbers.
//!
//! A [`Jet`] stores the normalized Taylor coefficients `f^(k)(x) / k!` of a
//! function at a point, for `k < len`. Arithmetic and the handful of
//! elementary functions used by the constructions propagate all orders at
//! once, so every profile built from jets gets exact derivatives for free.

use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64 as C64;

use super::special;

/// Maximum number of Taylor coefficients carried by a jet.
pub const JET_LEN: usize = 5;

const ZERO: C64 = C64::new(0.0, 0.0);

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet {
    c: [C64; JET_LEN],
    len: usize,
}

impl Jet {
    /// Expansion of the identity function `x ↦ x` around `x`, truncated to `len` terms.
    pub fn var(x: f64, len: usize) -> Self {
        let len = len.clamp(1, JET_LEN);
        let mut c = [ZERO; JET_LEN];
        c[0] = C64::new(x, 0.0);
        if len > 1 {
            c[1] = C64::new(1.0, 0.0);
        }
        Jet { c, len }
    }

    pub fn constant(v: C64, len: usize) -> Self {
        let mut c = [ZERO; JET_LEN];
        c[0] = v;
        Jet { c, len: len.clamp(1, JET_LEN) }
    }

    /// Builds a jet from derivative values `[f, f', f'', ...]`.
    pub fn from_derivatives(d: &[C64]) -> Self {
        let len = d.len().clamp(1, JET_LEN);
        let mut c = [ZERO; JET_LEN];
        let mut fact = 1.0;
        for (k, v) in d.iter().take(len).enumerate() {
            if k > 0 {
                fact *= k as f64;
            }
            c[k] = v / fact;
        }
        Jet { c, len }
    }

    /// Builds a jet from normalized Taylor coefficients.
    pub fn from_coeffs(coeffs: &[C64]) -> Self {
        let len = coeffs.len().clamp(1, JET_LEN);
        let mut c = [ZERO; JET_LEN];
        c[..len].copy_from_slice(&coeffs[..len]);
        Jet { c, len }
    }

    pub fn nan(len: usize) -> Self {
        Jet { c: [C64::new(f64::NAN, f64::NAN); JET_LEN], len: len.clamp(1, JET_LEN) }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn value(&self) -> C64 {
        self.c[0]
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.c[..self.len]
    }

    /// `k`-th derivative, if the jet carries that order.
    pub fn derivative(&self, k: usize) -> Option<C64> {
        if k >= self.len {
            return None;
        }
        let fact: f64 = (1..=k).map(|i| i as f64).product();
        Some(self.c[k] * fact)
    }

    /// Jet of the derivative; one order shorter.
    pub fn deriv(&self) -> Jet {
        let mut c = [ZERO; JET_LEN];
        if self.len == 1 {
            return Jet::nan(1);
        }
        for k in 0..self.len - 1 {
            c[k] = self.c[k + 1] * (k + 1) as f64;
        }
        Jet { c, len: self.len - 1 }
    }

    pub fn truncate(mut self, len: usize) -> Jet {
        self.len = self.len.min(len.max(1));
        self
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs().iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn scale(mut self, s: C64) -> Jet {
        for z in &mut self.c[..self.len] {
            *z *= s;
        }
        self
    }

    pub fn square(&self) -> Jet {
        *self * *self
    }

    pub fn recip(&self) -> Jet {
        Jet::constant(C64::new(1.0, 0.0), self.len) / *self
    }

    pub fn exp(&self) -> Jet {
        let n = self.len;
        let mut e = [ZERO; JET_LEN];
        e[0] = self.c[0].exp();
        for k in 1..n {
            let mut s = ZERO;
            for j in 1..=k {
                s += self.c[j] * e[k - j] * j as f64;
            }
            e[k] = s / k as f64;
        }
        Jet { c: e, len: n }
    }

    /// Principal square root, propagated from the principal value at the expansion point.
    pub fn sqrt(&self) -> Jet {
        let n = self.len;
        let mut s = [ZERO; JET_LEN];
        s[0] = self.c[0].sqrt();
        for k in 1..n {
            let mut acc = self.c[k];
            for j in 1..k {
                acc -= s[j] * s[k - j];
            }
            s[k] = acc / (s[0] * 2.0);
        }
        Jet { c: s, len: n }
    }

    pub fn tanh(&self) -> Jet {
        let n = self.len;
        let mut t = [ZERO; JET_LEN];
        // u = 1 - t^2, with t' = a' u
        let mut u = [ZERO; JET_LEN];
        t[0] = special::tanh(self.c[0]);
        u[0] = C64::new(1.0, 0.0) - t[0] * t[0];
        for k in 1..n {
            let mut s = ZERO;
            for j in 1..=k {
                s += self.c[j] * u[k - j] * j as f64;
            }
            t[k] = s / k as f64;
            let mut sq = ZERO;
            for i in 0..=k {
                sq += t[i] * t[k - i];
            }
            u[k] = -sq;
        }
        Jet { c: t, len: n }
    }

    pub fn sech(&self) -> Jet {
        let n = self.len;
        let t = self.tanh();
        let mut s = [ZERO; JET_LEN];
        // p = s t, with s' = -a' p
        let mut p = [ZERO; JET_LEN];
        s[0] = special::sech(self.c[0]);
        p[0] = s[0] * t.c[0];
        for k in 1..n {
            let mut acc = ZERO;
            for j in 1..=k {
                acc += self.c[j] * p[k - j] * j as f64;
            }
            s[k] = -acc / k as f64;
            let mut pk = ZERO;
            for i in 0..=k {
                pk += s[i] * t.c[k - i];
            }
            p[k] = pk;
        }
        Jet { c: s, len: n }
    }

    pub fn sinh(&self) -> Jet {
        let (s, _) = self.sinh_cosh();
        s
    }

    pub fn cosh(&self) -> Jet {
        let (_, c) = self.sinh_cosh();
        c
    }

    fn sinh_cosh(&self) -> (Jet, Jet) {
        let n = self.len;
        let mut s = [ZERO; JET_LEN];
        let mut c = [ZERO; JET_LEN];
        s[0] = self.c[0].sinh();
        c[0] = self.c[0].cosh();
        for k in 1..n {
            let (mut as_, mut ac) = (ZERO, ZERO);
            for j in 1..=k {
                as_ += self.c[j] * c[k - j] * j as f64;
                ac += self.c[j] * s[k - j] * j as f64;
            }
            s[k] = as_ / k as f64;
            c[k] = ac / k as f64;
        }
        (Jet { c: s, len: n }, Jet { c, len: n })
    }

    /// Multiplies by `sign(Re value)`; used for `|f|` of real-valued jets.
    pub fn abs_real(&self) -> Jet {
        if self.c[0].re < 0.0 {
            -*self
        } else {
            *self
        }
    }

    /// Evaluates the polynomial `Σ coeffs[k] t^k` at the jet `t` (Horner).
    pub fn poly(t: Jet, coeffs: &[f64]) -> Jet {
        let mut acc = Jet::constant(C64::new(*coeffs.last().unwrap_or(&0.0), 0.0), t.len);
        for &a in coeffs.iter().rev().skip(1) {
            acc = acc * t + C64::new(a, 0.0);
        }
        acc
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, rhs: Jet) -> Jet {
        let len = self.len.min(rhs.len);
        let mut c = [ZERO; JET_LEN];
        for k in 0..len {
            c[k] = self.c[k] + rhs.c[k];
        }
        Jet { c, len }
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, rhs: Jet) -> Jet {
        let len = self.len.min(rhs.len);
        let mut c = [ZERO; JET_LEN];
        for k in 0..len {
            c[k] = self.c[k] - rhs.c[k];
        }
        Jet { c, len }
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(mut self) -> Jet {
        for z in &mut self.c[..self.len] {
            *z = -*z;
        }
        self
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, rhs: Jet) -> Jet {
        let len = self.len.min(rhs.len);
        let mut c = [ZERO; JET_LEN];
        for k in 0..len {
            let mut s = ZERO;
            for j in 0..=k {
                s += self.c[j] * rhs.c[k - j];
            }
            c[k] = s;
        }
        Jet { c, len }
    }
}

impl Div for Jet {
    type Output = Jet;
    fn div(self, rhs: Jet) -> Jet {
        let len = self.len.min(rhs.len);
        let mut q = [ZERO; JET_LEN];
        for k in 0..len {
            let mut s = self.c[k];
            for j in 1..=k {
                s -= rhs.c[j] * q[k - j];
            }
            q[k] = s / rhs.c[0];
        }
        Jet { c: q, len }
    }
}

impl Add<C64> for Jet {
    type Output = Jet;
    fn add(mut self, rhs: C64) -> Jet {
        self.c[0] += rhs;
        self
    }
}

impl Sub<C64> for Jet {
    type Output = Jet;
    fn sub(mut self, rhs: C64) -> Jet {
        self.c[0] -= rhs;
        self
    }
}

impl Mul<C64> for Jet {
    type Output = Jet;
    fn mul(self, rhs: C64) -> Jet {
        self.scale(rhs)
    }
}

impl Div<C64> for Jet {
    type Output = Jet;
    fn div(self, rhs: C64) -> Jet {
        self.scale(C64::new(1.0, 0.0) / rhs)
    }
}

impl Add<f64> for Jet {
    type Output = Jet;
    fn add(self, rhs: f64) -> Jet {
        self + C64::new(rhs, 0.0)
    }
}

impl Sub<f64> for Jet {
    type Output = Jet;
    fn sub(self, rhs: f64) -> Jet {
        self - C64::new(rhs, 0.0)
    }
}

impl Mul<f64> for Jet {
    type Output = Jet;
    fn mul(self, rhs: f64) -> Jet {
        self.scale(C64::new(rhs, 0.0))
    }
}

impl Div<f64> for Jet {
    type Output = Jet;
    fn div(self, rhs: f64) -> Jet {
        self.scale(C64::new(1.0 / rhs, 0.0))
    }
}

impl Mul<Jet> for C64 {
    type Output = Jet;
    fn mul(self, rhs: Jet) -> Jet {
        rhs.scale(self)
    }
}

impl Mul<Jet> for f64 {
    type Output = Jet;
    fn mul(self, rhs: Jet) -> Jet {
        rhs.scale(C64::new(self, 0.0))
    }
}

impl Sub<Jet> for C64 {
    type Output = Jet;
    fn sub(self, rhs: Jet) -> Jet {
        -rhs + self
    }
}

impl Sub<Jet> for f64 {
    type Output = Jet;
    fn sub(self, rhs: Jet) -> Jet {
        -rhs + self
    }
}

impl Add<Jet> for f64 {
    type Output = Jet;
    fn add(self, rhs: Jet) -> Jet {
        rhs + self
    }
}

impl Div<Jet> for C64 {
    type Output = Jet;
    fn div(self, rhs: Jet) -> Jet {
        Jet::constant(self, rhs.len) / rhs
    }
}

impl Add<Jet> for C64 {
    type Output = Jet;
    fn add(self, rhs: Jet) -> Jet {
        rhs + self
    }
}

impl Div<Jet> for f64 {
    type Output = Jet;
    fn div(self, rhs: Jet) -> Jet {
        Jet::constant(C64::new(self, 0.0), rhs.len) / rhs
    }
}
