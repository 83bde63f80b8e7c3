//! Exact rational values.
//!
//! Every diversity value, admissible-function value, distance and tolerance in
//! this crate is a [`Rat`]. Values are kept in lowest terms with a positive
//! denominator, so structural equality is numeric equality.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// An exact rational number in lowest terms.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rat(Ratio<i128>);

/// Error returned when a string is not a decimal or `p/q` rational.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid rational literal {0:?}")]
pub struct ParseRatError(pub String);

impl Rat {
    pub const ZERO: Rat = Rat(Ratio::new_raw(0, 1));
    pub const ONE: Rat = Rat(Ratio::new_raw(1, 1));

    /// `numer / denom`, reduced. Panics if `denom` is zero.
    pub fn new(numer: i128, denom: i128) -> Rat {
        Rat(Ratio::new(numer, denom))
    }

    pub fn from_integer(n: i128) -> Rat {
        Rat(Ratio::from_integer(n))
    }

    pub fn numer(&self) -> i128 {
        *self.0.numer()
    }

    pub fn denom(&self) -> i128 {
        *self.0.denom()
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

    pub fn abs(&self) -> Rat {
        Rat(self.0.abs())
    }

    pub fn floor(&self) -> Rat {
        Rat(self.0.floor())
    }

    pub fn ceil(&self) -> Rat {
        Rat(self.0.ceil())
    }

    /// Nearest `f64`, for display only.
    pub fn to_f64(&self) -> f64 {
        *self.0.numer() as f64 / *self.0.denom() as f64
    }

    /// True when `self` is an integer multiple of `step` (`step > 0`).
    pub fn is_multiple_of(&self, step: Rat) -> bool {
        (*self / step).is_integer()
    }

    /// Decimal rendering with `digits` fractional digits, rounded half away from zero.
    pub fn to_decimal_string(&self, digits: u32) -> String {
        let scale = 10i128.pow(digits);
        let scaled = self.0 * Ratio::from_integer(scale);
        let rounded = scaled.round().to_integer();
        let neg = rounded < 0;
        let mag = rounded.unsigned_abs();
        let int_part = mag / scale as u128;
        let frac_part = mag % scale as u128;
        let sign = if neg { "-" } else { "" };
        if digits == 0 {
            format!("{sign}{int_part}")
        } else {
            format!("{sign}{int_part}.{frac_part:0width$}", width = digits as usize)
        }
    }

    pub(crate) fn lcm_denom(a: i128, b: i128) -> Option<i128> {
        let g = a.gcd(&b);
        (a / g).checked_mul(b)
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rat {
    type Err = ParseRatError;

    fn from_str(s: &str) -> Result<Rat, ParseRatError> {
        let err = || ParseRatError(s.to_string());
        let t = s.trim();
        if t.is_empty() {
            return Err(err());
        }
        if let Some((p, q)) = t.split_once('/') {
            let p: i128 = parse_int(p.trim()).ok_or_else(err)?;
            let q: i128 = parse_int(q.trim()).ok_or_else(err)?;
            if q == 0 {
                return Err(err());
            }
            return Ok(Rat::new(p, q));
        }
        let (neg, body) = match t.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, t.strip_prefix('+').unwrap_or(t)),
        };
        let (int_s, frac_s) = match body.split_once('.') {
            Some((i, f)) => (i, f),
            None => (body, ""),
        };
        if int_s.is_empty() && frac_s.is_empty() {
            return Err(err());
        }
        let all_digits = |x: &str| x.bytes().all(|b| b.is_ascii_digit());
        if !all_digits(int_s) || !all_digits(frac_s) || frac_s.len() > 30 {
            return Err(err());
        }
        let int_v: i128 = if int_s.is_empty() { 0 } else { int_s.parse().map_err(|_| err())? };
        let mut value = Ratio::from_integer(int_v);
        if !frac_s.is_empty() {
            let denom = 10i128.checked_pow(frac_s.len() as u32).ok_or_else(err)?;
            let frac_v: i128 = frac_s.parse().map_err(|_| err())?;
            value += Ratio::new(frac_v, denom);
        }
        Ok(Rat(if neg { -value } else { value }))
    }
}

fn parse_int(s: &str) -> Option<i128> {
    let digits = s.strip_prefix('-').or_else(|| s.strip_prefix('+')).unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

impl From<i64> for Rat {
    fn from(v: i64) -> Rat {
        Rat::from_integer(v as i128)
    }
}

impl From<i32> for Rat {
    fn from(v: i32) -> Rat {
        Rat::from_integer(v as i128)
    }
}

impl Add for Rat {
    type Output = Rat;
    fn add(self, rhs: Rat) -> Rat {
        Rat(self.0 + rhs.0)
    }
}

impl Sub for Rat {
    type Output = Rat;
    fn sub(self, rhs: Rat) -> Rat {
        Rat(self.0 - rhs.0)
    }
}

impl Mul for Rat {
    type Output = Rat;
    fn mul(self, rhs: Rat) -> Rat {
        Rat(self.0 * rhs.0)
    }
}

impl Div for Rat {
    type Output = Rat;
    fn div(self, rhs: Rat) -> Rat {
        Rat(self.0 / rhs.0)
    }
}

impl Neg for Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-self.0)
    }
}

impl AddAssign for Rat {
    fn add_assign(&mut self, rhs: Rat) {
        self.0 += rhs.0;
    }
}

impl SubAssign for Rat {
    fn sub_assign(&mut self, rhs: Rat) {
        self.0 -= rhs.0;
    }
}

impl Sum for Rat {
    fn sum<I: Iterator<Item = Rat>>(iter: I) -> Rat {
        iter.fold(Rat::ZERO, |a, b| a + b)
    }
}

impl<'a> Sum<&'a Rat> for Rat {
    fn sum<I: Iterator<Item = &'a Rat>>(iter: I) -> Rat {
        iter.fold(Rat::ZERO, |a, b| a + *b)
    }
}

impl Serialize for Rat {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rat {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Rat, D::Error> {
        struct RatVisitor;
        impl serde::de::Visitor<'_> for RatVisitor {
            type Value = Rat;
            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a rational string such as \"3/2\" or \"0.25\", or an integer")
            }
            fn visit_str<E: serde::de::Error>(self, v: &str) -> Result<Rat, E> {
                v.parse().map_err(E::custom)
            }
            fn visit_i64<E: serde::de::Error>(self, v: i64) -> Result<Rat, E> {
                Ok(Rat::from(v))
            }
            fn visit_u64<E: serde::de::Error>(self, v: u64) -> Result<Rat, E> {
                Ok(Rat::from_integer(v as i128))
            }
        }
        deserializer.deserialize_any(RatVisitor)
    }
}

/// Shorthand for building values in code and tests: `rat(3, 2)` is 3/2.
pub fn rat(numer: i128, denom: i128) -> Rat {
    Rat::new(numer, denom)
}
