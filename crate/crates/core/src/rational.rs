//! Exact nonnegative rationals extended by a top element.

use alloc::string::String;
use core::cmp::Ordering;
use core::fmt;
use core::ops::Add;
use core::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Arbitrary-precision rational used throughout the crate.
pub type Rational = num_rational::BigRational;

/// `p/q` as a [`Rational`].
pub fn rat(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// The integer `n` as a [`Rational`].
pub fn int(n: u64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `2^e` as an integer.
pub fn pow2(e: u64) -> BigInt {
    BigInt::one() << (e as usize)
}

/// `2^-e`.
pub fn pow2_inv(e: u64) -> Rational {
    Rational::new(BigInt::one(), pow2(e))
}

/// Decimal rendering with `digits` fractional digits, truncated toward zero.
pub fn to_decimal(r: &Rational, digits: u32) -> String {
    use alloc::format;
    let scale = num_traits::pow(BigInt::from(10u32), digits as usize);
    let neg = r.is_negative();
    let a = r.abs();
    let scaled = (a.numer() * &scale) / a.denom();
    let int_part = &scaled / &scale;
    let frac = (&scaled % &scale).to_u64().unwrap_or(0);
    let sign = if neg && !scaled.is_zero() { "-" } else { "" };
    if digits == 0 {
        format!("{sign}{int_part}")
    } else {
        format!("{sign}{int_part}.{frac:0width$}", width = digits as usize)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ParseExtRatError {
    #[error("malformed rational {0:?}")]
    Malformed(String),
    #[error("negative value {0:?} where a submeasure value was expected")]
    Negative(String),
}

/// A nonnegative rational or `∞`.
///
/// Ordered with `∞` above every finite value; `x + ∞ = ∞`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ExtRat {
    Finite(Rational),
    Infinite,
}

impl ExtRat {
    pub fn zero() -> Self {
        ExtRat::Finite(Rational::zero())
    }

    pub fn from_int(n: u64) -> Self {
        ExtRat::Finite(int(n))
    }

    /// Wraps `r`, rejecting negative values.
    pub fn new(r: Rational) -> Option<Self> {
        if r.is_negative() {
            None
        } else {
            Some(ExtRat::Finite(r))
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, ExtRat::Finite(_))
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, ExtRat::Finite(r) if r.is_zero())
    }

    pub fn finite(&self) -> Option<&Rational> {
        match self {
            ExtRat::Finite(r) => Some(r),
            ExtRat::Infinite => None,
        }
    }

    /// True when finite with denominator 1.
    pub fn is_integer(&self) -> bool {
        matches!(self, ExtRat::Finite(r) if r.is_integer())
    }

    pub fn min(self, other: Self) -> Self {
        if self <= other {
            self
        } else {
            other
        }
    }

    pub fn max(self, other: Self) -> Self {
        if self >= other {
            self
        } else {
            other
        }
    }
}

impl From<Rational> for ExtRat {
    /// Panics on a negative input.
    fn from(r: Rational) -> Self {
        ExtRat::new(r).expect("submeasure values are nonnegative")
    }
}

impl PartialOrd for ExtRat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtRat {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (ExtRat::Finite(a), ExtRat::Finite(b)) => a.cmp(b),
            (ExtRat::Finite(_), ExtRat::Infinite) => Ordering::Less,
            (ExtRat::Infinite, ExtRat::Finite(_)) => Ordering::Greater,
            (ExtRat::Infinite, ExtRat::Infinite) => Ordering::Equal,
        }
    }
}

impl Add for ExtRat {
    type Output = ExtRat;
    fn add(self, rhs: ExtRat) -> ExtRat {
        match (self, rhs) {
            (ExtRat::Finite(a), ExtRat::Finite(b)) => ExtRat::Finite(a + b),
            _ => ExtRat::Infinite,
        }
    }
}

impl Add for &ExtRat {
    type Output = ExtRat;
    fn add(self, rhs: &ExtRat) -> ExtRat {
        match (self, rhs) {
            (ExtRat::Finite(a), ExtRat::Finite(b)) => ExtRat::Finite(a + b),
            _ => ExtRat::Infinite,
        }
    }
}

impl core::iter::Sum for ExtRat {
    fn sum<I: Iterator<Item = ExtRat>>(iter: I) -> ExtRat {
        iter.fold(ExtRat::zero(), |a, b| a + b)
    }
}

impl fmt::Display for ExtRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtRat::Finite(r) => write!(f, "{r}"),
            ExtRat::Infinite => f.write_str("inf"),
        }
    }
}

impl FromStr for ExtRat {
    type Err = ParseExtRatError;

    /// Accepts `p/q`, `p`, or `inf`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        if t == "inf" || t == "∞" {
            return Ok(ExtRat::Infinite);
        }
        let r = parse_rational(t)?;
        ExtRat::new(r).ok_or_else(|| ParseExtRatError::Negative(t.into()))
    }
}

/// Parses `p/q` or `p` (signed) exactly; rejects a zero denominator.
pub fn parse_rational(s: &str) -> Result<Rational, ParseExtRatError> {
    let t = s.trim();
    let bad = || ParseExtRatError::Malformed(t.into());
    let (p, q) = match t.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (t, "1"),
    };
    let p: BigInt = p.parse().map_err(|_| bad())?;
    let q: BigInt = q.parse().map_err(|_| bad())?;
    if q.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(p, q))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    #[test]
    fn order_puts_infinity_on_top() {
        assert!(ExtRat::from_int(1_000_000) < ExtRat::Infinite);
        assert_eq!(ExtRat::Infinite.cmp(&ExtRat::Infinite), Ordering::Equal);
        assert_eq!(ExtRat::from_int(3).min(ExtRat::Infinite), ExtRat::from_int(3));
    }

    #[test]
    fn addition_absorbs_infinity() {
        assert_eq!(ExtRat::from_int(2) + ExtRat::Infinite, ExtRat::Infinite);
        assert_eq!(
            ExtRat::Finite(rat(1, 2)) + ExtRat::Finite(rat(1, 3)),
            ExtRat::Finite(rat(5, 6))
        );
    }

    #[test]
    fn display_and_parse_roundtrip() {
        for s in ["0", "2", "3/2", "inf", "4/3"] {
            let v: ExtRat = s.parse().unwrap();
            assert_eq!(v.to_string(), s);
        }
        assert_eq!("6/4".parse::<ExtRat>().unwrap().to_string(), "3/2");
        assert_eq!("1/1".parse::<ExtRat>().unwrap().to_string(), "1");
        assert!("-1/2".parse::<ExtRat>().is_err());
        assert!("1/0".parse::<ExtRat>().is_err());
        assert!("x".parse::<ExtRat>().is_err());
    }

    #[test]
    fn decimals_truncate() {
        assert_eq!(to_decimal(&rat(4, 3), 4), "1.3333");
        assert_eq!(to_decimal(&rat(-1, 8), 3), "-0.125");
        assert_eq!(to_decimal(&int(7), 0), "7");
    }

    #[test]
    fn powers_of_two() {
        assert_eq!(pow2_inv(3), rat(1, 8));
        assert_eq!(pow2(10), BigInt::from(1024));
    }
}
