//! Exact arithmetic building blocks: rationals, Laurent coefficients in the
//! energy parameter `s` (with `E = s^2`), sparse polynomials, exact linear
//! algebra and a small expression parser.

pub mod laurent;
pub mod linear;
pub mod parse;
pub mod poly;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub use laurent::{LaurentScalar, Monomial};
pub use poly::{Coefficient, Poly};

/// Exact rational number used throughout the crate.
pub type Rational = BigRational;

/// `num / den` as an exact rational. Panics on a zero denominator.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"p/q"`, `"p"` or a terminating decimal such as `"0.25"` exactly.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let t = text.trim();
    if t.is_empty() {
        return None;
    }
    if let Some((n, d)) = t.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(Rational::new(n, d));
    }
    if let Some((whole, frac)) = t.split_once('.') {
        let negative = whole.trim_start().starts_with('-');
        let whole_digits = whole.trim().trim_start_matches(['-', '+']);
        if !frac.chars().all(|c| c.is_ascii_digit()) || !whole_digits.chars().all(|c| c.is_ascii_digit()) {
            return None;
        }
        let digits = format!("{}{}", whole_digits, frac);
        let mut value: BigInt = if digits.is_empty() { BigInt::zero() } else { digits.parse().ok()? };
        if negative {
            value = -value;
        }
        let den = num_traits::pow(BigInt::from(10), frac.len());
        return Some(Rational::new(value, den));
    }
    t.parse::<BigInt>().ok().map(Rational::from_integer)
}

pub fn to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or_else(|| {
        // very large numerators/denominators: fall back to a scaled division
        let n = q.numer().to_f64().unwrap_or(f64::NAN);
        let d = q.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// Exact rational square root, if one exists.
pub fn rational_sqrt(q: &Rational) -> Option<Rational> {
    if q.is_negative() {
        return None;
    }
    let n = integer_sqrt(q.numer())?;
    let d = integer_sqrt(q.denom())?;
    Some(Rational::new(n, d))
}

fn integer_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.sign() == Sign::Minus {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

/// Splits a positive integer into `square^2 * squarefree` by trial division.
/// Returns `None` when the integer has a cofactor above the trial bound that
/// is not itself provably squarefree.
pub fn squarefree_split(n: &BigInt) -> Option<(BigInt, u64)> {
    if n.sign() != Sign::Plus {
        return None;
    }
    let mut rest = n.clone();
    let mut square = BigInt::one();
    let mut free: u64 = 1;
    let mut p: u64 = 2;
    while p <= 1_000_000 {
        let bp = BigInt::from(p);
        if &bp * &bp > rest {
            break;
        }
        let mut count = 0u32;
        while rest.is_multiple_of(&bp) {
            rest /= &bp;
            count += 1;
        }
        if count > 0 {
            square *= num_traits::pow(bp.clone(), (count / 2) as usize);
            if count % 2 == 1 {
                free = free.checked_mul(p)?;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if !rest.is_one() {
        let r = rest.sqrt();
        if &r * &r == rest {
            square *= r;
        } else {
            let bound = BigInt::from(1_000_000u64) * BigInt::from(1_000_000u64);
            if rest > bound {
                return None;
            }
            free = free.checked_mul(rest.to_u64()?)?;
        }
    }
    Some((square, free))
}

pub fn sign_of(q: &Rational) -> i32 {
    if q.is_zero() {
        0
    } else if q.is_positive() {
        1
    } else {
        -1
    }
}

/// Formats a rational as `p` or `p/q`.
pub fn fmt_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}
