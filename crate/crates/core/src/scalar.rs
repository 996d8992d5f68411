//! Configurable-precision real numbers.
//!
//! [`Real`] wraps an MPFR float. Every value carries its own precision and
//! binary operations produce a result at the larger of the two operand
//! precisions, so a computation seeded from a single [`Precision`] stays at
//! that precision throughout.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use num_rational::Ratio;
use rug::float::{Constant, Round};
use rug::ops::Pow;
use rug::Float;
use serde::Serialize;

use crate::error::{Error, Result};

/// Extra decimal digits carried internally beyond the requested precision.
pub const GUARD_DIGITS: u32 = 20;

const LOG2_10: f64 = std::f64::consts::LOG2_10;

/// Requested number of significant decimal digits.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Precision {
    digits: u32,
}

impl Precision {
    pub const DEFAULT: Precision = Precision { digits: 50 };

    pub fn new(digits: u32) -> Result<Self> {
        if !(10..=10_000).contains(&digits) {
            return Err(Error::Domain(format!(
                "precision must be between 10 and 10000 digits, got {digits}"
            )));
        }
        Ok(Precision { digits })
    }

    pub fn digits(self) -> u32 {
        self.digits
    }

    /// Working mantissa size in bits, guard digits included.
    pub fn bits(self) -> u32 {
        ((self.digits + GUARD_DIGITS) as f64 * LOG2_10).ceil() as u32
    }

    /// `10^-(digits - loss)`: the tolerance left after `loss` digits of cancellation.
    pub fn tolerance(self, loss: u32) -> Real {
        let e = self.digits.saturating_sub(loss);
        Real::int(10, self).powi(-(e as i64))
    }
}

impl Default for Precision {
    fn default() -> Self {
        Precision::DEFAULT
    }
}

/// Arbitrary-precision real scalar.
#[derive(Clone, Debug, PartialEq, PartialOrd)]
pub struct Real(Float);

impl Real {
    pub fn from_float(f: Float) -> Self {
        Real(f)
    }

    pub fn as_float(&self) -> &Float {
        &self.0
    }

    pub fn zero(p: Precision) -> Self {
        Real(Float::new(p.bits()))
    }

    /// Zero at the precision of `other`.
    pub fn zero_like(other: &Real) -> Self {
        Real(Float::new(other.prec_bits()))
    }

    /// Integer at the precision of `other`.
    pub fn int_like(v: i64, other: &Real) -> Self {
        Real(Float::with_val(other.prec_bits(), v))
    }

    pub fn one(p: Precision) -> Self {
        Real::int(1, p)
    }

    pub fn int(v: i64, p: Precision) -> Self {
        Real(Float::with_val(p.bits(), v))
    }

    pub fn ratio(num: i64, den: i64, p: Precision) -> Self {
        assert!(den != 0, "zero denominator");
        Real(Float::with_val(p.bits(), num) / den)
    }

    pub fn from_rational(r: &Ratio<i64>, p: Precision) -> Self {
        Real::ratio(*r.numer(), *r.denom(), p)
    }

    /// Exact conversion of a binary double.
    pub fn from_f64(v: f64, p: Precision) -> Self {
        Real(Float::with_val(p.bits(), v))
    }

    /// Parses a decimal literal such as `"0.1"` or `"1e-3"` at precision `p`.
    pub fn parse(s: &str, p: Precision) -> Result<Self> {
        let parsed = Float::parse(s.trim()).map_err(|_| Error::Parse(s.to_string()))?;
        let f = Float::with_val(p.bits(), parsed);
        if !f.is_finite() {
            return Err(Error::Parse(s.to_string()));
        }
        Ok(Real(f))
    }

    pub fn pi(p: Precision) -> Self {
        Real(Float::with_val(p.bits(), Constant::Pi))
    }

    pub fn prec_bits(&self) -> u32 {
        self.0.prec()
    }

    fn bits_with(&self, other: &Real) -> u32 {
        self.0.prec().max(other.0.prec())
    }

    pub fn with_bits(&self, bits: u32) -> Self {
        Real(Float::with_val(bits, &self.0))
    }

    pub fn exp(&self) -> Self {
        Real(self.0.clone().exp())
    }

    pub fn exp_m1(&self) -> Self {
        Real(self.0.clone().exp_m1())
    }

    pub fn ln(&self) -> Self {
        Real(self.0.clone().ln())
    }

    pub fn sqrt(&self) -> Self {
        Real(self.0.clone().sqrt())
    }

    pub fn abs(&self) -> Self {
        Real(self.0.clone().abs())
    }

    pub fn recip(&self) -> Self {
        Real(self.0.clone().recip())
    }

    pub fn square(&self) -> Self {
        Real(self.0.clone().square())
    }

    pub fn gamma(&self) -> Self {
        Real(self.0.clone().gamma())
    }

    pub fn powi(&self, e: i64) -> Self {
        Real(self.0.clone().pow(e))
    }

    pub fn pow(&self, e: &Real) -> Self {
        let bits = self.bits_with(e);
        Real(Float::with_val(bits, (&self.0).pow(&e.0)))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_finite(&self) -> bool {
        self.0.is_finite()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_sign_negative() && !self.0.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_sign_positive() && !self.0.is_zero()
    }

    /// -1, 0 or +1.
    pub fn signum(&self) -> i32 {
        match self.0.cmp0() {
            Some(Ordering::Less) => -1,
            Some(Ordering::Greater) => 1,
            _ => 0,
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64()
    }

    pub fn max(self, other: Real) -> Real {
        if other > self {
            other
        } else {
            self
        }
    }

    pub fn min(self, other: Real) -> Real {
        if other < self {
            other
        } else {
            self
        }
    }

    /// Decimal string with `digits` significant digits, in plain notation
    /// when the exponent is moderate and scientific notation otherwise.
    pub fn to_decimal(&self, digits: u32) -> String {
        format_decimal(&self.0, digits.max(1) as usize)
    }
}

fn format_decimal(f: &Float, digits: usize) -> String {
    if f.is_zero() {
        return if digits > 1 {
            format!("0.{}", "0".repeat(digits - 1))
        } else {
            "0".to_string()
        };
    }
    if !f.is_finite() {
        return f.to_string();
    }
    let (neg, mantissa, exp) = f.to_sign_string_exp_round(10, Some(digits), Round::Nearest);
    // mantissa holds `digits` decimal digits d1 d2 ... with value 0.d1d2... * 10^exp
    let exp = exp.unwrap_or(0) as i64;
    let sign = if neg { "-" } else { "" };
    let mantissa = mantissa.trim_start_matches('-');
    if (-6..=40).contains(&exp) {
        let body = if exp <= 0 {
            format!("0.{}{}", "0".repeat((-exp) as usize), mantissa)
        } else if (exp as usize) >= mantissa.len() {
            format!("{}{}", mantissa, "0".repeat(exp as usize - mantissa.len()))
        } else {
            let (int, frac) = mantissa.split_at(exp as usize);
            format!("{int}.{frac}")
        };
        format!("{sign}{body}")
    } else {
        let (first, rest) = mantissa.split_at(1);
        format!("{sign}{first}.{rest}e{}", exp - 1)
    }
}

/// Serialized as a decimal string carrying the requested digits, guard digits dropped.
impl Serialize for Real {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let digits = (self.prec_bits() as f64 / LOG2_10).floor() as u32;
        s.serialize_str(&self.to_decimal(digits.saturating_sub(GUARD_DIGITS).max(1)))
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().unwrap_or(20);
        f.write_str(&self.to_decimal(digits as u32))
    }
}

macro_rules! real_binop {
    ($trait:ident, $method:ident, $assign_trait:ident, $assign_method:ident) => {
        impl<'a, 'b> $trait<&'b Real> for &'a Real {
            type Output = Real;
            fn $method(self, rhs: &'b Real) -> Real {
                let bits = self.bits_with(rhs);
                Real(Float::with_val(bits, $trait::$method(&self.0, &rhs.0)))
            }
        }
        impl<'b> $trait<&'b Real> for Real {
            type Output = Real;
            fn $method(self, rhs: &'b Real) -> Real {
                $trait::$method(&self, rhs)
            }
        }
        impl<'a> $trait<Real> for &'a Real {
            type Output = Real;
            fn $method(self, rhs: Real) -> Real {
                $trait::$method(self, &rhs)
            }
        }
        impl $trait<Real> for Real {
            type Output = Real;
            fn $method(self, rhs: Real) -> Real {
                $trait::$method(&self, &rhs)
            }
        }
        impl<'a> $trait<i64> for &'a Real {
            type Output = Real;
            fn $method(self, rhs: i64) -> Real {
                Real(Float::with_val(self.0.prec(), $trait::$method(&self.0, rhs)))
            }
        }
        impl $trait<i64> for Real {
            type Output = Real;
            fn $method(self, rhs: i64) -> Real {
                $trait::$method(&self, rhs)
            }
        }
        impl<'a> $trait<&'a Real> for i64 {
            type Output = Real;
            fn $method(self, rhs: &'a Real) -> Real {
                Real(Float::with_val(rhs.0.prec(), $trait::$method(self, &rhs.0)))
            }
        }
        impl $trait<Real> for i64 {
            type Output = Real;
            fn $method(self, rhs: Real) -> Real {
                $trait::$method(self, &rhs)
            }
        }
        impl<'b> $assign_trait<&'b Real> for Real {
            fn $assign_method(&mut self, rhs: &'b Real) {
                *self = $trait::$method(&*self, rhs);
            }
        }
        impl $assign_trait<Real> for Real {
            fn $assign_method(&mut self, rhs: Real) {
                *self = $trait::$method(&*self, &rhs);
            }
        }
        impl $assign_trait<i64> for Real {
            fn $assign_method(&mut self, rhs: i64) {
                *self = $trait::$method(&*self, rhs);
            }
        }
    };
}

real_binop!(Add, add, AddAssign, add_assign);
real_binop!(Sub, sub, SubAssign, sub_assign);
real_binop!(Mul, mul, MulAssign, mul_assign);
real_binop!(Div, div, DivAssign, div_assign);

impl Neg for Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real(-self.0)
    }
}

impl Neg for &Real {
    type Output = Real;
    fn neg(self) -> Real {
        Real(Float::with_val(self.0.prec(), -&self.0))
    }
}

impl PartialEq<i64> for Real {
    fn eq(&self, other: &i64) -> bool {
        self.0 == *other
    }
}

impl PartialOrd<i64> for Real {
    fn partial_cmp(&self, other: &i64) -> Option<Ordering> {
        self.0.partial_cmp(other)
    }
}

/// Relative difference `|a - b| / max(|a|, |b|)`, or `|a - b|` when both vanish.
pub fn rel_diff(a: &Real, b: &Real) -> Real {
    let d = (a - b).abs();
    let scale = a.abs().max(b.abs());
    if scale.is_zero() {
        d
    } else {
        d / scale
    }
}
