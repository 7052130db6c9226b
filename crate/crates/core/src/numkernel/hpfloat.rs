use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use rug::float::Constant;
use rug::ops::Pow;
use rug::{Float, Integer, Rational};
use serde::{Serialize, Serializer};

use crate::error::{domain, Result};

/// Working precision used when the caller does not choose one.
pub const DEFAULT_DIGITS: u32 = 50;
/// Smallest working precision accepted anywhere in the crate.
pub const MIN_DIGITS: u32 = 15;

const GUARD_BITS: u32 = 64;

/// Number of mantissa bits backing `digits` decimal digits (guard bits included).
pub fn bits_for(digits: u32) -> u32 {
    (f64::from(digits) * std::f64::consts::LOG2_10).ceil() as u32 + GUARD_BITS
}

/// A real number carried at a stated decimal working precision.
///
/// Binary operations run at the larger of the two operand precisions. Values are
/// immutable once built; every operation returns a fresh value.
#[derive(Clone, Debug)]
pub struct HPFloat {
    value: Float,
    digits: u32,
}

impl HPFloat {
    fn wrap(value: Float, digits: u32) -> Self {
        HPFloat { value, digits }
    }

    pub fn zero(digits: u32) -> Self {
        Self::from_i64(0, digits)
    }

    pub fn one(digits: u32) -> Self {
        Self::from_i64(1, digits)
    }

    pub fn from_i64(x: i64, digits: u32) -> Self {
        Self::wrap(Float::with_val(bits_for(digits), x), digits)
    }

    pub fn from_f64(x: f64, digits: u32) -> Self {
        Self::wrap(Float::with_val(bits_for(digits), x), digits)
    }

    pub fn from_integer(x: &Integer, digits: u32) -> Self {
        Self::wrap(Float::with_val(bits_for(digits), x), digits)
    }

    pub fn from_rational(x: &Rational, digits: u32) -> Self {
        Self::wrap(Float::with_val(bits_for(digits), x), digits)
    }

    /// Parses a decimal literal such as `0.37` or `1e-3` exactly to working precision.
    pub fn parse(text: &str, digits: u32) -> Result<Self> {
        match Float::parse(text.trim()) {
            Ok(parsed) => Ok(Self::wrap(Float::with_val(bits_for(digits), parsed), digits)),
            Err(e) => domain(format!("cannot parse `{text}` as a real number: {e}")),
        }
    }

    pub fn pi(digits: u32) -> Self {
        Self::wrap(Float::with_val(bits_for(digits), Constant::Pi), digits)
    }

    /// `10^exp` at the given precision.
    pub fn ten_pow(exp: i32, digits: u32) -> Self {
        Self::wrap(Float::with_val(bits_for(digits), 10).pow(exp), digits)
    }

    pub fn digits(&self) -> u32 {
        self.digits
    }

    pub fn as_float(&self) -> &Float {
        &self.value
    }

    /// Same value re-rounded to another working precision.
    pub fn with_digits(&self, digits: u32) -> Self {
        Self::wrap(Float::with_val(bits_for(digits), &self.value), digits)
    }

    fn bits(&self) -> u32 {
        bits_for(self.digits)
    }

    pub fn sqrt(&self) -> Self {
        Self::wrap(Float::with_val(self.bits(), self.value.sqrt_ref()), self.digits)
    }

    pub fn exp(&self) -> Self {
        Self::wrap(Float::with_val(self.bits(), self.value.exp_ref()), self.digits)
    }

    pub fn ln(&self) -> Self {
        Self::wrap(Float::with_val(self.bits(), self.value.ln_ref()), self.digits)
    }

    pub fn sinh(&self) -> Self {
        Self::wrap(Float::with_val(self.bits(), self.value.sinh_ref()), self.digits)
    }

    pub fn cos(&self) -> Self {
        Self::wrap(Float::with_val(self.bits(), self.value.cos_ref()), self.digits)
    }

    pub fn sin(&self) -> Self {
        Self::wrap(Float::with_val(self.bits(), self.value.sin_ref()), self.digits)
    }

    pub fn powi(&self, n: i32) -> Self {
        Self::wrap(Float::with_val(self.bits(), (&self.value).pow(n)), self.digits)
    }

    pub fn abs(&self) -> Self {
        Self::wrap(Float::with_val(self.bits(), self.value.abs_ref()), self.digits)
    }

    pub fn square(&self) -> Self {
        Self::wrap(Float::with_val(self.bits(), self.value.square_ref()), self.digits)
    }

    pub fn recip(&self) -> Self {
        Self::wrap(Float::with_val(self.bits(), self.value.recip_ref()), self.digits)
    }

    pub fn mul_int(&self, n: i64) -> Self {
        Self::wrap(Float::with_val(self.bits(), &self.value * n), self.digits)
    }

    pub fn div_int(&self, n: i64) -> Self {
        Self::wrap(Float::with_val(self.bits(), &self.value / n), self.digits)
    }

    pub fn mul_integer(&self, n: &Integer) -> Self {
        Self::wrap(Float::with_val(self.bits(), &self.value * n), self.digits)
    }

    pub fn mul_rational(&self, r: &Rational) -> Self {
        Self::wrap(Float::with_val(self.bits(), &self.value * r), self.digits)
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.value.is_sign_positive() && !self.value.is_zero()
    }

    pub fn is_finite(&self) -> bool {
        self.value.is_finite()
    }

    pub fn max(self, other: Self) -> Self {
        if self >= other {
            self
        } else {
            other
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.value.to_f64()
    }

    /// Scientific decimal rendering with `digits` significant digits; lossless at
    /// the stated precision.
    pub fn to_decimal_string(&self) -> String {
        if self.value.is_zero() {
            return "0".to_string();
        }
        self.value.to_string_radix(10, Some(self.digits as usize))
    }

    /// Short rendering for human-readable tables.
    pub fn to_short_string(&self, significant: usize) -> String {
        if self.value.is_zero() {
            return "0".to_string();
        }
        self.value.to_string_radix(10, Some(significant))
    }
}

impl PartialEq for HPFloat {
    fn eq(&self, other: &Self) -> bool {
        self.value == other.value
    }
}

impl PartialOrd for HPFloat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.value.partial_cmp(&other.value)
    }
}

impl fmt::Display for HPFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_decimal_string())
    }
}

impl Serialize for HPFloat {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_decimal_string())
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $op:tt) => {
        impl $trait<&HPFloat> for &HPFloat {
            type Output = HPFloat;
            fn $method(self, rhs: &HPFloat) -> HPFloat {
                let digits = self.digits.max(rhs.digits);
                HPFloat::wrap(Float::with_val(bits_for(digits), &self.value $op &rhs.value), digits)
            }
        }
        impl $trait<HPFloat> for HPFloat {
            type Output = HPFloat;
            fn $method(self, rhs: HPFloat) -> HPFloat {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&HPFloat> for HPFloat {
            type Output = HPFloat;
            fn $method(self, rhs: &HPFloat) -> HPFloat {
                (&self).$method(rhs)
            }
        }
        impl $trait<HPFloat> for &HPFloat {
            type Output = HPFloat;
            fn $method(self, rhs: HPFloat) -> HPFloat {
                self.$method(&rhs)
            }
        }
    };
}

binop!(Add, add, +);
binop!(Sub, sub, -);
binop!(Mul, mul, *);
binop!(Div, div, /);

impl Neg for &HPFloat {
    type Output = HPFloat;
    fn neg(self) -> HPFloat {
        HPFloat::wrap(Float::with_val(self.bits(), -&self.value), self.digits)
    }
}

impl Neg for HPFloat {
    type Output = HPFloat;
    fn neg(self) -> HPFloat {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_is_exact_to_precision() {
        let x = HPFloat::parse("0.3", 50).unwrap();
        let tenth = HPFloat::one(50).div_int(10).mul_int(3);
        assert!((&x - &tenth).abs() < HPFloat::ten_pow(-55, 50));
        assert!(HPFloat::parse("zero point three", 50).is_err());
    }

    #[test]
    fn mixed_precision_uses_the_larger() {
        let a = HPFloat::one(20);
        let b = HPFloat::one(60);
        assert_eq!((&a + &b).digits(), 60);
    }

    #[test]
    fn primitives_meet_the_relative_error_contract() {
        // exp(ln 2) = 2, sinh via exp, sqrt(2)^2 = 2
        let digits = 40;
        let two = HPFloat::from_i64(2, digits);
        let bound = HPFloat::ten_pow(2 - digits as i32, digits);
        assert!((two.ln().exp() - &two).abs() < bound);
        assert!((two.sqrt().square() - &two).abs() < bound);
        let x = HPFloat::parse("0.7", digits).unwrap();
        let via_exp = (x.exp() - (-&x).exp()).div_int(2);
        assert!((x.sinh() - via_exp).abs() < bound);
    }

    #[test]
    fn decimal_rendering_has_stated_digits() {
        let pi = HPFloat::pi(30);
        let s = pi.to_decimal_string();
        assert_eq!(s, "3.14159265358979323846264338328");
        assert_eq!(HPFloat::zero(30).to_decimal_string(), "0");
    }
}
