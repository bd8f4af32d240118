//! Darboux polynomials of the planar field `x′ = x² − xy + n − 1`,
//! `y′ = x(y − nx)` and the integrating factor `√J₁ / J₂` for `n = 4`.
//!
//! Polynomials are in `(x, y)` or, with `n` formal, in `(x, y, n)`.

use crate::algebra::parse::parse_rational_poly;
use crate::algebra::{Poly, Rational};

pub type BiPoly = Poly<Rational>;

/// `X(J) = J_x P + J_y Q`.
pub fn apply_field(p: &BiPoly, q: &BiPoly, j: &BiPoly) -> BiPoly {
    j.derivative(0).mul(p).add(&j.derivative(1).mul(q))
}

/// Cofactor `g` with `X(J) = gJ`, if `J` divides `X(J)` exactly.
pub fn darboux_verify(p: &BiPoly, q: &BiPoly, j: &BiPoly) -> Option<BiPoly> {
    if j.is_zero() {
        return None;
    }
    apply_field(p, q, j).exact_div(j)
}

fn parse(text: &str, vars: &[&str]) -> BiPoly {
    parse_rational_poly(text, vars).expect("built-in polynomial parses")
}

/// `(P, Q)` for a fixed dimension `n`.
pub fn bryant_planar_system(n: u32) -> (BiPoly, BiPoly) {
    let v = ["x", "y"];
    (parse(&format!("x^2 - x*y + {}", n as i64 - 1), &v), parse(&format!("x*(y - {n}*x)"), &v))
}

/// `(P, Q)` in `(x, y, n)` with `n` formal.
pub fn bryant_planar_system_formal() -> (BiPoly, BiPoly) {
    let v = ["x", "y", "n"];
    (parse("x^2 - x*y + n - 1", &v), parse("x*(y - n*x)", &v))
}

/// `J₁ = nx² − y² + n(n − 1)`.
pub fn j1(n: u32) -> BiPoly {
    parse(&format!("{n}*x^2 - y^2 + {}", n as i64 * (n as i64 - 1)), &["x", "y"])
}

pub fn j1_formal() -> BiPoly {
    parse("n*x^2 - y^2 + n*(n - 1)", &["x", "y", "n"])
}

/// `J₂ = 2x² − xy + 3`, a Darboux polynomial for `n = 4` only.
pub fn j2() -> BiPoly {
    parse("2*x^2 - x*y + 3", &["x", "y"])
}

/// Divergence `P_x + Q_y`.
pub fn divergence(p: &BiPoly, q: &BiPoly) -> BiPoly {
    p.derivative(0).add(&q.derivative(1))
}

#[derive(Clone, Debug, PartialEq)]
pub struct IntegratingFactorReport {
    pub points: usize,
    /// Max `|X(R) + div(X) R|` from exact derivatives.
    pub max_deviation: f64,
    /// Max `|(RP)_x + (RQ)_y|` from central differences.
    pub max_fd_divergence: f64,
}

/// Checks `R = √J₁ / J₂` for `n = 4` on a `k × k` grid over `[lo, hi]²`,
/// skipping points with `J₁ ≤ 0` or `J₂ = 0`.
pub fn integrating_factor_check(k: usize, lo: f64, hi: f64, fd_step: f64) -> IntegratingFactorReport {
    let (p, q) = bryant_planar_system(4);
    let (a, b) = (j1(4), j2());
    let div = divergence(&p, &q);
    let (ax, ay, bx, by) = (a.derivative(0), a.derivative(1), b.derivative(0), b.derivative(1));
    let r = |x: f64, y: f64| a.eval(&[x, y]).sqrt() / b.eval(&[x, y]);
    let mut report = IntegratingFactorReport { points: 0, max_deviation: 0.0, max_fd_divergence: 0.0 };
    for i in 0..k {
        for j in 0..k {
            let step = if k > 1 { (hi - lo) / (k - 1) as f64 } else { 0.0 };
            let (x, y) = (lo + step * i as f64, lo + step * j as f64);
            let (av, bv) = (a.eval(&[x, y]), b.eval(&[x, y]));
            if av <= 0.0 || bv == 0.0 {
                continue;
            }
            report.points += 1;
            let sa = av.sqrt();
            let rv = sa / bv;
            let rx = ax.eval(&[x, y]) / (2.0 * sa * bv) - sa * bx.eval(&[x, y]) / (bv * bv);
            let ry = ay.eval(&[x, y]) / (2.0 * sa * bv) - sa * by.eval(&[x, y]) / (bv * bv);
            let xr = rx * p.eval(&[x, y]) + ry * q.eval(&[x, y]);
            let dev = (xr + div.eval(&[x, y]) * rv).abs();
            report.max_deviation = report.max_deviation.max(dev);

            let h = fd_step;
            let rp = |x: f64, y: f64| r(x, y) * p.eval(&[x, y]);
            let rq = |x: f64, y: f64| r(x, y) * q.eval(&[x, y]);
            let fd = (rp(x + h, y) - rp(x - h, y)) / (2.0 * h) + (rq(x, y + h) - rq(x, y - h)) / (2.0 * h);
            report.max_fd_divergence = report.max_fd_divergence.max(fd.abs());
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xy(text: &str) -> BiPoly {
        parse(text, &["x", "y"])
    }

    #[test]
    fn j1_cofactor_formal_and_numeric() {
        let (p, q) = bryant_planar_system_formal();
        assert_eq!(darboux_verify(&p, &q, &j1_formal()), Some(parse("2*x", &["x", "y", "n"])));
        for n in 1..=9 {
            let (p, q) = bryant_planar_system(n);
            assert_eq!(darboux_verify(&p, &q, &j1(n)), Some(xy("2*x")), "n = {n}");
        }
    }

    #[test]
    fn j2_cofactor() {
        let (p, q) = bryant_planar_system(4);
        assert_eq!(darboux_verify(&p, &q, &j2()), Some(xy("4*x - y")));
        assert_eq!(darboux_verify(&p, &q, &xy("x")), None);
        let (p5, q5) = bryant_planar_system(5);
        assert_eq!(darboux_verify(&p5, &q5, &j2()), None);
        assert_eq!(divergence(&p, &q), xy("3*x - y"));
    }

    #[test]
    fn integrating_factor() {
        let rep = integrating_factor_check(20, 0.1, 2.0, 1e-5);
        assert_eq!(rep.points, 400);
        assert!(rep.max_deviation < 1e-10, "{rep:?}");
        assert!(rep.max_fd_divergence < 1e-4, "{rep:?}");
    }
}
