//! Second-order jets `(f, f′, f″)` for exact derivatives of closed forms.

use std::ops::{Add, Div, Mul, Neg, Sub};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet {
    pub v: f64,
    pub d1: f64,
    pub d2: f64,
}

impl Jet {
    /// The independent variable at `t`.
    pub fn var(t: f64) -> Self {
        Jet { v: t, d1: 1.0, d2: 0.0 }
    }

    pub fn constant(c: f64) -> Self {
        Jet { v: c, d1: 0.0, d2: 0.0 }
    }

    /// `g ∘ self` given `g, g′, g″` at `self.v`.
    pub fn chain(self, g0: f64, g1: f64, g2: f64) -> Self {
        Jet { v: g0, d1: g1 * self.d1, d2: g2 * self.d1 * self.d1 + g1 * self.d2 }
    }

    pub fn exp(self) -> Self {
        let e = self.v.exp();
        self.chain(e, e, e)
    }

    pub fn ln(self) -> Self {
        let x = self.v;
        self.chain(x.ln(), 1.0 / x, -1.0 / (x * x))
    }

    pub fn sqrt(self) -> Self {
        let s = self.v.sqrt();
        self.chain(s, 0.5 / s, -0.25 / (s * s * s))
    }

    pub fn recip(self) -> Self {
        let x = self.v;
        self.chain(1.0 / x, -1.0 / (x * x), 2.0 / (x * x * x))
    }

    pub fn sinh(self) -> Self {
        let (s, c) = (self.v.sinh(), self.v.cosh());
        self.chain(s, c, s)
    }

    pub fn cosh(self) -> Self {
        let (s, c) = (self.v.sinh(), self.v.cosh());
        self.chain(c, s, c)
    }

    pub fn tanh(self) -> Self {
        let t = self.v.tanh();
        let s2 = 1.0 - t * t;
        self.chain(t, s2, -2.0 * t * s2)
    }

    pub fn coth(self) -> Self {
        let c = 1.0 / self.v.tanh();
        let k = 1.0 - c * c;
        self.chain(c, k, -2.0 * c * k)
    }

    /// `log sinh x` for `x > 0`, stable for large `x`.
    pub fn ln_sinh(self) -> Self {
        let x = self.v;
        let c = 1.0 / x.tanh();
        let v = x + (-(-2.0 * x).exp()).ln_1p() - std::f64::consts::LN_2;
        self.chain(v, c, 1.0 - c * c)
    }

    /// `log cosh x`, stable for large `|x|`.
    pub fn ln_cosh(self) -> Self {
        let x = self.v;
        let t = x.tanh();
        let v = x.abs() + (-2.0 * x.abs()).exp().ln_1p() - std::f64::consts::LN_2;
        self.chain(v, t, 1.0 - t * t)
    }

    /// `x coth x − 1`, using its even power series near zero.
    pub fn xcoth_m1(self) -> Self {
        let x = self.v;
        if x.abs() < 0.35 {
            let x2 = x * x;
            let (mut g0, mut g1, mut g2) = (0.0, 0.0, 0.0);
            let mut pow = 1.0; // x^{2k-2}
            for (i, c) in XCOTH_SERIES.iter().enumerate() {
                let k = (i + 1) as f64;
                g2 += c * 2.0 * k * (2.0 * k - 1.0) * pow;
                g1 += c * 2.0 * k * pow * x;
                g0 += c * pow * x2;
                pow *= x2;
            }
            self.chain(g0, g1, g2)
        } else {
            let c = 1.0 / x.tanh();
            let csch2 = c * c - 1.0;
            let g0 = x * c - 1.0;
            self.chain(g0, c - x * csch2, 2.0 * csch2 * g0)
        }
    }

    pub fn powi(self, k: i32) -> Self {
        let x = self.v;
        let kf = k as f64;
        self.chain(x.powi(k), kf * x.powi(k - 1), kf * (kf - 1.0) * x.powi(k - 2))
    }
}

/// Coefficients of `x^{2k}` in `x coth x − 1`, `k = 1, 2, …`.
const XCOTH_SERIES: [f64; 8] = [
    1.0 / 3.0,
    -1.0 / 45.0,
    2.0 / 945.0,
    -1.0 / 4725.0,
    2.0 / 93555.0,
    -1382.0 / 638512875.0,
    4.0 / 18243225.0,
    -3617.0 * 65536.0 / (510.0 * 20922789888000.0),
];

impl Add for Jet {
    type Output = Jet;
    fn add(self, o: Jet) -> Jet {
        Jet { v: self.v + o.v, d1: self.d1 + o.d1, d2: self.d2 + o.d2 }
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, o: Jet) -> Jet {
        Jet { v: self.v - o.v, d1: self.d1 - o.d1, d2: self.d2 - o.d2 }
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, o: Jet) -> Jet {
        Jet {
            v: self.v * o.v,
            d1: self.d1 * o.v + self.v * o.d1,
            d2: self.d2 * o.v + 2.0 * self.d1 * o.d1 + self.v * o.d2,
        }
    }
}

impl Div for Jet {
    type Output = Jet;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, o: Jet) -> Jet {
        self * o.recip()
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        Jet { v: -self.v, d1: -self.d1, d2: -self.d2 }
    }
}

impl Add<f64> for Jet {
    type Output = Jet;
    fn add(self, c: f64) -> Jet {
        Jet { v: self.v + c, ..self }
    }
}

impl Sub<f64> for Jet {
    type Output = Jet;
    fn sub(self, c: f64) -> Jet {
        Jet { v: self.v - c, ..self }
    }
}

impl Mul<f64> for Jet {
    type Output = Jet;
    fn mul(self, c: f64) -> Jet {
        Jet { v: self.v * c, d1: self.d1 * c, d2: self.d2 * c }
    }
}

impl Div<f64> for Jet {
    type Output = Jet;
    fn div(self, c: f64) -> Jet {
        self * (1.0 / c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fd(f: impl Fn(f64) -> f64, t: f64) -> (f64, f64) {
        let h = 1e-3;
        let (a, b, c, d, e) = (f(t - 2.0 * h), f(t - h), f(t), f(t + h), f(t + 2.0 * h));
        ((a - 8.0 * b + 8.0 * d - e) / (12.0 * h), (-a + 16.0 * b - 30.0 * c + 16.0 * d - e) / (12.0 * h * h))
    }

    #[test]
    fn derivatives_match_differences() {
        let f = |t: Jet| (t * 0.7).ln_sinh() + (t * t).sqrt().tanh() / (t + 2.0) - (t * 1.3).ln_cosh() * t.coth();
        for &t in &[0.3, 1.1, 2.7] {
            let j = f(Jet::var(t));
            let (d1, d2) = fd(|s| f(Jet::constant(s)).v, t);
            assert!((j.d1 - d1).abs() < 1e-7, "{t}");
            assert!((j.d2 - d2).abs() < 1e-6, "{t}");
        }
    }

    #[test]
    fn xcoth_series_joins_direct_form() {
        for &x in &[0.34999, 0.35001, 0.1, 1e-3] {
            let j = Jet::var(x).xcoth_m1();
            let c = 1.0 / x.tanh();
            let direct = x * c - 1.0;
            if x > 0.3 {
                assert!((j.v - direct).abs() < 1e-14);
                assert!((j.d1 - (c - x * (c * c - 1.0))).abs() < 1e-13);
            } else {
                assert!((j.v - x * x / 3.0).abs() < x.powi(4) / 40.0);
            }
        }
        let lo = Jet::var(0.34999999).xcoth_m1();
        let hi = Jet::var(0.35000001).xcoth_m1();
        assert!((lo.d2 - hi.d2).abs() < 1e-7);
    }
}
