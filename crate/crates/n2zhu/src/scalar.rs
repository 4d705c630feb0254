//! Scalar fields used by the engine.
//!
//! Everything in the algebraic core runs over [`Q`] (arbitrary precision
//! rationals).  The linear algebra and polynomial layers are written against
//! the [`Field`] trait so that they can also run over `Ratio<i64>` in small
//! experiments.

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Exact rational number.
pub type Q = BigRational;

/// An exact field. Comparisons against zero must be exact.
pub trait Field:
    Clone
    + PartialEq
    + fmt::Debug
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
{
    fn from_i64(n: i64) -> Self;
    fn inv(&self) -> Self {
        Self::one() / self.clone()
    }
}

impl Field for BigRational {
    fn from_i64(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }
}

impl Field for Ratio<i64> {
    fn from_i64(n: i64) -> Self {
        Ratio::from_integer(n)
    }
}

impl Field for Ratio<i128> {
    fn from_i64(n: i64) -> Self {
        Ratio::from_integer(n as i128)
    }
}

/// `n/d` as a rational.
pub fn q(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Integer `n` as a rational.
pub fn qi(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// Half of a doubled integer.
pub fn half(n2: i64) -> Q {
    q(n2, 2)
}

/// Generalised binomial coefficient `binom(x, l)` for rational `x`.
pub fn binom(x: &Q, l: usize) -> Q {
    let mut r = Q::one();
    for i in 0..l {
        r = r * (x - qi(i as i64)) / qi(i as i64 + 1);
    }
    r
}

/// Serde helper writing a rational as `"num/den"`.
pub fn ser_q<S: serde::Serializer>(x: &Q, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&fmt_q(x))
}

/// Renders as `num/den` (denominator always present).
pub fn fmt_q(x: &Q) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// Parses `num/den`, `num`, or a decimal-free signed integer.
pub fn parse_q(s: &str) -> Option<Q> {
    let s = s.trim();
    if let Some((a, b)) = s.split_once('/') {
        let n: BigInt = a.trim().parse().ok()?;
        let d: BigInt = b.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        Some(Q::new(n, d))
    } else {
        let n: BigInt = s.parse().ok()?;
        Some(Q::from_integer(n))
    }
}

/// Exact conversion to an integer when the denominator is 1.
pub fn to_int(x: &Q) -> Option<i64> {
    if x.is_integer() {
        x.numer().to_i64()
    } else {
        None
    }
}

/// Twice `x` as an integer, when `x` is in `(1/2)Z`.
pub fn to_half_int(x: &Q) -> Option<i64> {
    to_int(&(x * qi(2)))
}

pub fn abs_q(x: &Q) -> Q {
    x.abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(binom(&qi(2), 0), qi(1));
        assert_eq!(binom(&qi(2), 1), qi(2));
        assert_eq!(binom(&qi(2), 3), qi(0));
        assert_eq!(binom(&q(3, 2), 2), q(3, 8));
        assert_eq!(binom(&q(3, 2), 3), q(-1, 16));
        assert_eq!(binom(&qi(-1), 4), qi(1));
    }

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_q("-1/3"), Some(q(-1, 3)));
        assert_eq!(parse_q("4"), Some(qi(4)));
        assert_eq!(parse_q("2/4"), Some(q(1, 2)));
        assert_eq!(parse_q("1/0"), None);
        assert_eq!(fmt_q(&qi(3)), "3/1");
        assert_eq!(fmt_q(&q(-2, 6)), "-1/3");
    }
}
