//! Arbitrary-precision rationals, the only scalar type in this crate.
//!
//! Every quantity downstream (rewards, probabilities, values, forces) is a
//! `Rational`; no floating point appears anywhere on the computation path.
//! Decimal output for plotting is produced on demand by
//! [`Rational::to_decimal_string`] and is explicitly a rendering, not a value.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Failure to read a rational literal.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RationalParseError {
    #[error("invalid rational literal `{0}`")]
    Invalid(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
}

/// An exact rational number in canonical form: reduced, denominator > 0.
///
/// Canonical form is maintained by construction — `num_rational::BigRational`
/// reduces on every operation — so equality and ordering are exact.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rational(BigRational);

impl Rational {
    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn from_int(n: i64) -> Self {
        Rational(BigRational::from_integer(BigInt::from(n)))
    }

    /// Builds `numer/denom`, reducing and normalizing the sign.
    pub fn new(numer: BigInt, denom: BigInt) -> Result<Self, RationalParseError> {
        if denom.is_zero() {
            return Err(RationalParseError::ZeroDenominator(format!(
                "{numer}/{denom}"
            )));
        }
        Ok(Rational(BigRational::new(numer, denom)))
    }

    /// Convenience constructor for machine-word operands.
    ///
    /// Panics on a zero denominator; intended for literals in tests and
    /// generators where the denominator is statically nonzero.
    pub fn from_ratio(numer: i64, denom: i64) -> Self {
        assert!(denom != 0, "from_ratio: zero denominator");
        Rational(BigRational::new(BigInt::from(numer), BigInt::from(denom)))
    }

    /// Parses `p/q`, an integer `p`, or a finite decimal such as `0.75`
    /// (converted exactly; `0.75` becomes `3/4`). No exponent notation.
    pub fn parse(text: &str) -> Result<Self, RationalParseError> {
        let s = text.trim();
        let invalid = || RationalParseError::Invalid(text.to_string());
        if let Some((num, den)) = s.split_once('/') {
            let numer = parse_int_strict(num).ok_or_else(invalid)?;
            let denom = parse_int_strict(den).ok_or_else(invalid)?;
            return Rational::new(numer, denom)
                .map_err(|_| RationalParseError::ZeroDenominator(text.to_string()));
        }
        if let Some((int_part, frac_part)) = s.split_once('.') {
            let (sign, int_digits) = split_sign(int_part);
            if !int_digits.chars().all(|c| c.is_ascii_digit())
                || !frac_part.chars().all(|c| c.is_ascii_digit())
                || (int_digits.is_empty() && frac_part.is_empty())
            {
                return Err(invalid());
            }
            let mut digits = String::with_capacity(int_digits.len() + frac_part.len() + 1);
            digits.push_str(int_digits);
            digits.push_str(frac_part);
            let magnitude = BigInt::from_str(if digits.is_empty() { "0" } else { &digits })
                .map_err(|_| invalid())?;
            let numer = if sign < 0 { -magnitude } else { magnitude };
            let denom = BigInt::from(10u32).pow(frac_part.len() as u32);
            return Ok(Rational(BigRational::new(numer, denom)));
        }
        let numer = parse_int_strict(s).ok_or_else(invalid)?;
        Ok(Rational(BigRational::from_integer(numer)))
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.0.numer().sign() == Sign::Minus
    }

    pub fn is_positive(&self) -> bool {
        self.0.numer().sign() == Sign::Plus
    }

    /// -1, 0, or +1.
    pub fn signum(&self) -> i8 {
        match self.0.numer().sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    /// Canonical fraction string: `p/q`, or just `p` when the denominator is 1.
    pub fn to_fraction_string(&self) -> String {
        self.0.to_string()
    }

    /// Decimal rendering rounded to `sig_digits` significant digits with
    /// round-half-even, trailing zeros stripped. Plain notation (no exponent);
    /// the fraction string remains the lossless representation.
    pub fn to_decimal_string(&self, sig_digits: usize) -> String {
        assert!(sig_digits >= 1, "need at least one significant digit");
        if self.is_zero() {
            return "0".to_string();
        }
        let p = self.0.numer().abs();
        let q = self.0.denom().clone();
        // Decimal exponent e with 10^e <= p/q < 10^(e+1).
        let mut e = p.to_string().len() as i64 - q.to_string().len() as i64;
        while cmp_scaled(&p, &q, e) == std::cmp::Ordering::Less {
            e -= 1;
        }
        while cmp_scaled(&p, &q, e + 1) != std::cmp::Ordering::Less {
            e += 1;
        }
        // Round p/q * 10^(sig-1-e) half-to-even to an integer significand.
        let shift = sig_digits as i64 - 1 - e;
        let (num, den) = if shift >= 0 {
            (p * pow10(shift as u32), q)
        } else {
            (p, q * pow10((-shift) as u32))
        };
        let mut significand = round_half_even(&num, &den);
        if significand == pow10(sig_digits as u32) {
            // Rounding rippled all the way up (e.g. 0.999... -> 1.0).
            significand = pow10(sig_digits as u32 - 1);
            e += 1;
        }
        let digits = significand.to_string();
        debug_assert_eq!(digits.len(), sig_digits);
        let mut body = if e >= sig_digits as i64 - 1 {
            let mut s = digits;
            s.push_str(&"0".repeat((e - sig_digits as i64 + 1) as usize));
            s
        } else if e >= 0 {
            let split = (e + 1) as usize;
            let mut s = String::new();
            s.push_str(&digits[..split]);
            s.push('.');
            s.push_str(&digits[split..]);
            trim_decimal(s)
        } else {
            let mut s = String::from("0.");
            s.push_str(&"0".repeat((-e - 1) as usize));
            s.push_str(&digits);
            trim_decimal(s)
        };
        if self.is_negative() {
            body.insert(0, '-');
        }
        body
    }
}

fn split_sign(s: &str) -> (i8, &str) {
    if let Some(rest) = s.strip_prefix('-') {
        (-1, rest)
    } else if let Some(rest) = s.strip_prefix('+') {
        (1, rest)
    } else {
        (1, s)
    }
}

/// Strict integer parse: optional sign then ASCII digits, nothing else.
/// (`BigInt::from_str` accepts `_` separators, which we do not.)
fn parse_int_strict(s: &str) -> Option<BigInt> {
    let (sign, digits) = split_sign(s.trim());
    if digits.is_empty() || !digits.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    let magnitude = BigInt::from_str(digits).ok()?;
    Some(if sign < 0 { -magnitude } else { magnitude })
}

fn pow10(k: u32) -> BigInt {
    BigInt::from(10u32).pow(k)
}

/// Compares `p` with `q * 10^e` without leaving integer arithmetic.
fn cmp_scaled(p: &BigInt, q: &BigInt, e: i64) -> std::cmp::Ordering {
    if e >= 0 {
        p.cmp(&(q * pow10(e as u32)))
    } else {
        (p * pow10((-e) as u32)).cmp(q)
    }
}

/// num/den rounded to the nearest integer, ties to even. Both positive.
fn round_half_even(num: &BigInt, den: &BigInt) -> BigInt {
    let (quot, rem) = num_integer::Integer::div_rem(num, den);
    let twice = &rem * 2;
    if twice > *den || (twice == *den && num_integer::Integer::is_odd(&quot)) {
        quot + 1
    } else {
        quot
    }
}

fn trim_decimal(mut s: String) -> String {
    if s.contains('.') {
        while s.ends_with('0') {
            s.pop();
        }
        if s.ends_with('.') {
            s.pop();
        }
    }
    s
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_int(n)
    }
}

macro_rules! impl_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(self.0.$method(rhs.0))
            }
        }
        impl<'a> $trait<&'a Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &'a Rational) -> Rational {
                Rational(self.0.$method(&rhs.0))
            }
        }
        impl<'a> $trait<Rational> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational((&self.0).$method(rhs.0))
            }
        }
        impl<'a, 'b> $trait<&'b Rational> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: &'b Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
    };
}

impl_binop!(Add, add);
impl_binop!(Sub, sub);
impl_binop!(Mul, mul);
impl_binop!(Div, div);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

impl AddAssign<&Rational> for Rational {
    fn add_assign(&mut self, rhs: &Rational) {
        self.0 += &rhs.0;
    }
}

impl AddAssign for Rational {
    fn add_assign(&mut self, rhs: Rational) {
        self.0 += rhs.0;
    }
}

impl SubAssign<&Rational> for Rational {
    fn sub_assign(&mut self, rhs: &Rational) {
        self.0 -= &rhs.0;
    }
}

impl MulAssign<&Rational> for Rational {
    fn mul_assign(&mut self, rhs: &Rational) {
        self.0 *= &rhs.0;
    }
}

impl DivAssign<&Rational> for Rational {
    fn div_assign(&mut self, rhs: &Rational) {
        self.0 /= &rhs.0;
    }
}

impl Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Rational {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

impl<'a> Sum<&'a Rational> for Rational {
    fn sum<I: Iterator<Item = &'a Rational>>(iter: I) -> Rational {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_fraction_string())
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        Rational::parse(&s).map_err(de::Error::custom)
    }
}
