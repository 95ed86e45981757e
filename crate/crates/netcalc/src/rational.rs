//! Exact rational numbers extended with plus/minus infinity.
//!
//! Every time coordinate and every finite value in the library is a
//! [`Rational`]: an arbitrary-precision fraction kept in canonical form
//! (`gcd(|num|, den) = 1`, `den >= 1`). Values of functions may also be
//! infinite, which [`ExtendedRational`] models with a total order
//! `-inf < q < +inf`.
//!
//! Undefined forms (`inf - inf` of the same sign, `0 * inf`, `inf / inf`,
//! division by zero) are reported as errors instead of propagating sentinel
//! values: exact computation must not silently poison results.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// An exact rational number in canonical form.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rational(BigRational);

impl Rational {
    /// Builds `num / den`. Panics if `den == 0`; use integer literals freely.
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn from_big(num: BigInt, den: BigInt) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::UndefinedForm("division by zero"));
        }
        Ok(Rational(BigRational::new(num, den)))
    }

    pub fn integer(n: i64) -> Self {
        Rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn numerator(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denominator(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
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

    /// Exact division; `other` must be nonzero.
    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        if other.is_zero() {
            return Err(Error::UndefinedForm("division by zero"));
        }
        Ok(Rational(&self.0 / &other.0))
    }

    /// Largest integer `k` with `k <= self / other`; `other` must be positive.
    pub fn floor_div(&self, other: &Self) -> BigInt {
        debug_assert!(other.is_positive());
        let q = &self.0 / &other.0;
        q.floor().to_integer()
    }

    /// `self / other` when the quotient is an integer, else `None`.
    pub fn exact_int_ratio(&self, other: &Self) -> Option<BigInt> {
        if other.is_zero() {
            return None;
        }
        let q = &self.0 / &other.0;
        if q.is_integer() {
            Some(q.to_integer())
        } else {
            None
        }
    }

    /// Lossy conversion for display purposes only.
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    /// Decimal approximation with `digits` significant digits, rounded
    /// half-to-even. Advisory output only; the rational string is the
    /// contract.
    pub fn to_decimal_string(&self, digits: usize) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let neg = self.is_negative();
        let a = self.0.abs();
        // Scale so the integer part carries `digits` significant digits.
        let mut exp10: i64 = 0;
        let one = BigRational::one();
        let ten = BigRational::from_integer(BigInt::from(10));
        let mut x = a.clone();
        while x < one {
            x = &x * &ten;
            exp10 -= 1;
        }
        while x >= ten {
            x = &x / &ten;
            exp10 += 1;
        }
        // x in [1, 10): keep digits-1 fractional digits.
        let scale = BigInt::from(10).pow((digits.max(1) - 1) as u32);
        let scaled = &x * BigRational::from_integer(scale.clone());
        let floor = scaled.floor().to_integer();
        let frac = &scaled - BigRational::from_integer(floor.clone());
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        let mantissa = match frac.cmp(&half) {
            Ordering::Less => floor,
            Ordering::Greater => floor + 1,
            Ordering::Equal => {
                if floor.is_even() {
                    floor
                } else {
                    floor + 1
                }
            }
        };
        let mut digits_str = mantissa.to_string();
        // Rounding 9.99..9 up gains a digit; shift the exponent instead.
        let expected_len = digits.max(1);
        let mut exp = exp10;
        if digits_str.len() > expected_len {
            digits_str.truncate(expected_len);
            exp += 1;
        }
        let digits_trimmed = digits_str.trim_end_matches('0');
        let digits_str = if digits_trimmed.is_empty() {
            "0"
        } else {
            digits_trimmed
        };
        let mut out = String::new();
        if neg {
            out.push('-');
        }
        if exp >= 0 && (exp as usize) < expected_len + 4 {
            // Plain notation.
            let int_len = exp as usize + 1;
            if digits_str.len() <= int_len {
                out.push_str(digits_str);
                for _ in digits_str.len()..int_len {
                    out.push('0');
                }
            } else {
                out.push_str(&digits_str[..int_len]);
                out.push('.');
                out.push_str(&digits_str[int_len..]);
            }
        } else if exp < 0 && exp >= -4 {
            out.push_str("0.");
            for _ in 0..(-exp - 1) {
                out.push('0');
            }
            out.push_str(digits_str);
        } else {
            out.push_str(&digits_str[..1]);
            if digits_str.len() > 1 {
                out.push('.');
                out.push_str(&digits_str[1..]);
            }
            out.push('e');
            out.push_str(&exp.to_string());
        }
        out
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl FromStr for Rational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let parse_int = |t: &str| -> Result<BigInt> {
            BigInt::from_str(t)
                .map_err(|_| Error::InvalidArgument(format!("not a rational: {s:?}")))
        };
        match s.split_once('/') {
            Some((num, den)) => {
                let num = parse_int(num.trim())?;
                let den = parse_int(den.trim())?;
                if den.is_zero() {
                    return Err(Error::InvalidArgument(format!(
                        "zero denominator in {s:?}"
                    )));
                }
                Ok(Rational(BigRational::new(num, den)))
            }
            None => Ok(Rational(BigRational::from_integer(parse_int(s)?))),
        }
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::integer(n)
    }
}

macro_rules! rational_binop {
    ($trait:ident, $method:ident, $op:tt) => {
        impl $trait for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(self.0 $op rhs.0)
            }
        }
        impl<'a> $trait<&'a Rational> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: &'a Rational) -> Rational {
                Rational(&self.0 $op &rhs.0)
            }
        }
    };
}

rational_binop!(Add, add, +);
rational_binop!(Sub, sub, -);
rational_binop!(Mul, mul, *);

impl Div for Rational {
    type Output = Rational;
    fn div(self, rhs: Rational) -> Rational {
        assert!(!rhs.is_zero(), "division by zero");
        Rational(self.0 / rhs.0)
    }
}

impl<'a> Div<&'a Rational> for &'a Rational {
    type Output = Rational;
    fn div(self, rhs: &'a Rational) -> Rational {
        assert!(!rhs.is_zero(), "division by zero");
        Rational(&self.0 / &rhs.0)
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl<'a> Neg for &'a Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

/// Smallest positive rational that both arguments divide.
///
/// For `a = p/q` and `b = r/s` in canonical form this is
/// `lcm(p, r) / gcd(q, s)`; it aligns pseudo-period lengths before binary
/// operations.
pub fn rational_lcm(a: &Rational, b: &Rational) -> Result<Rational> {
    if !a.is_positive() || !b.is_positive() {
        return Err(Error::InvalidArgument(format!(
            "rational lcm needs positive operands, got {a} and {b}"
        )));
    }
    let num = a.numerator().lcm(b.numerator());
    let den = a.denominator().gcd(b.denominator());
    Rational::from_big(num, den)
}

/// A rational extended with plus/minus infinity, totally ordered.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum ExtendedRational {
    MinusInfinity,
    Finite(Rational),
    PlusInfinity,
}

pub use ExtendedRational::{MinusInfinity, PlusInfinity};

impl ExtendedRational {
    pub fn finite(num: i64, den: i64) -> Self {
        ExtendedRational::Finite(Rational::new(num, den))
    }

    pub fn integer(n: i64) -> Self {
        ExtendedRational::Finite(Rational::integer(n))
    }

    pub fn zero() -> Self {
        ExtendedRational::Finite(Rational::zero())
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, ExtendedRational::Finite(_))
    }

    pub fn is_infinite(&self) -> bool {
        !self.is_finite()
    }

    pub fn is_plus_infinity(&self) -> bool {
        matches!(self, ExtendedRational::PlusInfinity)
    }

    pub fn is_minus_infinity(&self) -> bool {
        matches!(self, ExtendedRational::MinusInfinity)
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, ExtendedRational::Finite(r) if r.is_zero())
    }

    pub fn as_finite(&self) -> Option<&Rational> {
        match self {
            ExtendedRational::Finite(r) => Some(r),
            _ => None,
        }
    }

    /// Finite payload or an error naming the caller's expectation.
    pub fn expect_finite(&self, what: &'static str) -> Result<Rational> {
        match self {
            ExtendedRational::Finite(r) => Ok(r.clone()),
            _ => Err(Error::InvalidArgument(format!("{what} must be finite"))),
        }
    }

    pub fn checked_add(&self, rhs: &Self) -> Result<Self> {
        use ExtendedRational::*;
        match (self, rhs) {
            (Finite(a), Finite(b)) => Ok(Finite(a + b)),
            (PlusInfinity, MinusInfinity) | (MinusInfinity, PlusInfinity) => {
                Err(Error::UndefinedForm("(+inf) + (-inf)"))
            }
            (PlusInfinity, _) | (_, PlusInfinity) => Ok(PlusInfinity),
            (MinusInfinity, _) | (_, MinusInfinity) => Ok(MinusInfinity),
        }
    }

    pub fn checked_sub(&self, rhs: &Self) -> Result<Self> {
        use ExtendedRational::*;
        match (self, rhs) {
            (Finite(a), Finite(b)) => Ok(Finite(a - b)),
            (PlusInfinity, PlusInfinity) | (MinusInfinity, MinusInfinity) => {
                Err(Error::UndefinedForm("(inf) - (inf) of the same sign"))
            }
            (PlusInfinity, _) | (_, MinusInfinity) => Ok(PlusInfinity),
            (MinusInfinity, _) | (_, PlusInfinity) => Ok(MinusInfinity),
        }
    }

    pub fn checked_mul(&self, rhs: &Self) -> Result<Self> {
        use ExtendedRational::*;
        match (self, rhs) {
            (Finite(a), Finite(b)) => Ok(Finite(a * b)),
            (Finite(a), inf) | (inf, Finite(a)) => {
                if a.is_zero() {
                    Err(Error::UndefinedForm("0 * inf"))
                } else if a.is_positive() == inf.is_plus_infinity() {
                    Ok(PlusInfinity)
                } else {
                    Ok(MinusInfinity)
                }
            }
            (a, b) => {
                if a.is_plus_infinity() == b.is_plus_infinity() {
                    Ok(PlusInfinity)
                } else {
                    Ok(MinusInfinity)
                }
            }
        }
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self> {
        use ExtendedRational::*;
        match (self, rhs) {
            (_, Finite(b)) if b.is_zero() => Err(Error::UndefinedForm("division by zero")),
            (Finite(a), Finite(b)) => Ok(Finite(a.checked_div(b)?)),
            (Finite(_), _) => Ok(Finite(Rational::zero())),
            (_, Finite(b)) => {
                if b.is_positive() == self.is_plus_infinity() {
                    Ok(PlusInfinity)
                } else {
                    Ok(MinusInfinity)
                }
            }
            _ => Err(Error::UndefinedForm("inf / inf")),
        }
    }

    pub fn checked_neg(&self) -> Self {
        use ExtendedRational::*;
        match self {
            Finite(a) => Finite(-a),
            PlusInfinity => MinusInfinity,
            MinusInfinity => PlusInfinity,
        }
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

    pub fn to_f64(&self) -> f64 {
        match self {
            ExtendedRational::Finite(r) => r.to_f64(),
            ExtendedRational::PlusInfinity => f64::INFINITY,
            ExtendedRational::MinusInfinity => f64::NEG_INFINITY,
        }
    }
}

impl PartialOrd for ExtendedRational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtendedRational {
    fn cmp(&self, other: &Self) -> Ordering {
        use ExtendedRational::*;
        match (self, other) {
            (Finite(a), Finite(b)) => a.cmp(b),
            (MinusInfinity, MinusInfinity) | (PlusInfinity, PlusInfinity) => Ordering::Equal,
            (MinusInfinity, _) | (_, PlusInfinity) => Ordering::Less,
            (PlusInfinity, _) | (_, MinusInfinity) => Ordering::Greater,
        }
    }
}

impl From<Rational> for ExtendedRational {
    fn from(r: Rational) -> Self {
        ExtendedRational::Finite(r)
    }
}

impl From<i64> for ExtendedRational {
    fn from(n: i64) -> Self {
        ExtendedRational::integer(n)
    }
}

impl fmt::Display for ExtendedRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedRational::Finite(r) => write!(f, "{r}"),
            ExtendedRational::PlusInfinity => write!(f, "inf"),
            ExtendedRational::MinusInfinity => write!(f, "-inf"),
        }
    }
}

impl fmt::Debug for ExtendedRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl FromStr for ExtendedRational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "inf" | "+inf" => Ok(ExtendedRational::PlusInfinity),
            "-inf" => Ok(ExtendedRational::MinusInfinity),
            other => Ok(ExtendedRational::Finite(other.parse()?)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn canonical_addition() {
        assert_eq!(q(1, 3) + q(1, 6), q(1, 2));
        assert_eq!((q(2, 6) * q(1, 1)).to_string(), "1/3");
    }

    #[test]
    fn infinity_absorbs_finite_addition() {
        let inf = ExtendedRational::PlusInfinity;
        let five = ExtendedRational::finite(5, 1);
        assert_eq!(inf.checked_add(&five).unwrap(), ExtendedRational::PlusInfinity);
        assert!(inf.checked_add(&ExtendedRational::MinusInfinity).is_err());
        assert!(inf.checked_sub(&ExtendedRational::PlusInfinity).is_err());
        assert!(ExtendedRational::zero()
            .checked_mul(&ExtendedRational::PlusInfinity)
            .is_err());
        assert!(inf.checked_div(&ExtendedRational::MinusInfinity).is_err());
    }

    #[test]
    fn signed_multiplication_with_infinity() {
        let minus_two = ExtendedRational::integer(-2);
        assert_eq!(
            minus_two.checked_mul(&ExtendedRational::PlusInfinity).unwrap(),
            ExtendedRational::MinusInfinity
        );
        let half = ExtendedRational::finite(1, 2);
        assert_eq!(
            half.checked_mul(&ExtendedRational::PlusInfinity).unwrap(),
            ExtendedRational::PlusInfinity
        );
    }

    #[test]
    fn total_order() {
        assert_eq!(q(1, 2), q(2, 4));
        assert!(ExtendedRational::MinusInfinity < ExtendedRational::integer(-1_000_000));
        assert!(q(7, 3) > q(9, 4)); // cross multiply: 28 vs 27
        assert!(ExtendedRational::integer(7) < ExtendedRational::PlusInfinity);
    }

    #[test]
    fn lcm_of_rationals() {
        assert_eq!(rational_lcm(&q(2, 1), &q(3, 1)).unwrap(), q(6, 1));
        assert_eq!(rational_lcm(&q(1, 2), &q(1, 3)).unwrap(), q(1, 1));
        assert_eq!(rational_lcm(&q(3, 4), &q(3, 4)).unwrap(), q(3, 4));
        assert!(rational_lcm(&q(-1, 2), &q(1, 3)).is_err());
    }

    #[test]
    fn lcm_is_minimal_common_multiple_small_range() {
        // Brute force over numerators/denominators <= 12: the result divides
        // any common rational multiple and both arguments divide it.
        for ap in 1..=12i64 {
            for aq in 1..=12i64 {
                for bp in 1..=12i64 {
                    for bq in 1..=12i64 {
                        let a = q(ap, aq);
                        let b = q(bp, bq);
                        let m = rational_lcm(&a, &b).unwrap();
                        assert!(m.exact_int_ratio(&a).is_some(), "{m} not multiple of {a}");
                        assert!(m.exact_int_ratio(&b).is_some(), "{m} not multiple of {b}");
                        // Any smaller common multiple k*a = l*b would divide m.
                        let common = rational_lcm(&m, &m).unwrap();
                        assert_eq!(common, m);
                    }
                }
            }
        }
        // Spot check divisibility of an arbitrary common multiple.
        let a = q(4, 9);
        let b = q(10, 3);
        let m = rational_lcm(&a, &b).unwrap();
        let common = q(4 * 10 * 3, 1); // certainly a common multiple
        assert!(common.exact_int_ratio(&m).is_some());
    }

    #[test]
    fn parse_and_display_round_trip() {
        for s in ["0", "5", "-7", "1/3", "-22/7", "inf", "-inf"] {
            let v: ExtendedRational = s.parse().unwrap();
            assert_eq!(v.to_string(), s);
        }
        assert_eq!("4/2".parse::<Rational>().unwrap().to_string(), "2");
    }

    #[test]
    fn decimal_approximation() {
        assert_eq!(q(1, 2).to_decimal_string(10), "0.5");
        assert_eq!(q(-22, 7).to_decimal_string(10), "-3.142857143");
        assert_eq!(q(20569_76, 100).to_decimal_string(10), "20569.76");
        assert_eq!(Rational::zero().to_decimal_string(10), "0");
        // Half-to-even at the last kept digit.
        assert_eq!(q(25, 100).to_decimal_string(1), "0.2");
        assert_eq!(q(35, 100).to_decimal_string(1), "0.4");
    }

    proptest! {
        #[test]
        fn addition_matches_cross_multiplication(a in -50i64..50, b in 1i64..50,
                                                 c in -50i64..50, d in 1i64..50) {
            let lhs = q(a, b) + q(c, d);
            let rhs = q(a * d + c * b, b * d);
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn compare_consistent_with_subtraction(a in -50i64..50, b in 1i64..50,
                                               c in -50i64..50, d in 1i64..50) {
            let x = q(a, b);
            let y = q(c, d);
            let diff = &y - &x;
            prop_assert_eq!(x < y, diff.is_positive());
            prop_assert_eq!(x == y, diff.is_zero());
        }
    }
}
