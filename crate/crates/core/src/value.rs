//! Exact rational values.
//!
//! Every valuation, threshold and comparison in this crate goes through
//! [`Value`]. There is no floating point anywhere on the decision path.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_rational::Ratio;
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// An exact rational number kept in lowest terms with a positive denominator.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Value(Ratio<i64>);

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseValueError {
    #[error("empty value")]
    Empty,
    #[error("invalid integer in value `{0}`")]
    BadInteger(String),
    #[error("zero denominator in value `{0}`")]
    ZeroDenominator(String),
}

impl Value {
    pub const ZERO: Value = Value(Ratio::new_raw(0, 1));
    pub const ONE: Value = Value(Ratio::new_raw(1, 1));

    /// Builds `num / den`, reducing to lowest terms.
    ///
    /// Panics if `den` is zero.
    pub fn new(num: i64, den: i64) -> Self {
        Value(Ratio::new(num, den))
    }

    pub fn integer(n: i64) -> Self {
        Value(Ratio::from_integer(n))
    }

    pub fn numer(&self) -> i64 {
        *self.0.numer()
    }

    pub fn denom(&self) -> i64 {
        *self.0.denom()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_zero(&self) -> bool {
        self.numer() == 0
    }

    pub fn is_negative(&self) -> bool {
        self.numer() < 0
    }

    pub fn is_positive(&self) -> bool {
        self.numer() > 0
    }

    pub fn abs(self) -> Self {
        if self.is_negative() {
            -self
        } else {
            self
        }
    }
}

impl From<i64> for Value {
    fn from(n: i64) -> Self {
        Value::integer(n)
    }
}

impl From<i32> for Value {
    fn from(n: i32) -> Self {
        Value::integer(n as i64)
    }
}

impl From<usize> for Value {
    fn from(n: usize) -> Self {
        Value::integer(n as i64)
    }
}

impl Add for Value {
    type Output = Value;
    fn add(self, rhs: Value) -> Value {
        Value(self.0 + rhs.0)
    }
}

impl AddAssign for Value {
    fn add_assign(&mut self, rhs: Value) {
        self.0 += rhs.0;
    }
}

impl Sub for Value {
    type Output = Value;
    fn sub(self, rhs: Value) -> Value {
        Value(self.0 - rhs.0)
    }
}

impl Mul for Value {
    type Output = Value;
    fn mul(self, rhs: Value) -> Value {
        Value(self.0 * rhs.0)
    }
}

impl Div for Value {
    type Output = Value;
    fn div(self, rhs: Value) -> Value {
        Value(self.0 / rhs.0)
    }
}

impl Neg for Value {
    type Output = Value;
    fn neg(self) -> Value {
        Value(-self.0)
    }
}

impl Sum for Value {
    fn sum<I: Iterator<Item = Value>>(iter: I) -> Value {
        iter.fold(Value::ZERO, |acc, v| acc + v)
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

impl fmt::Debug for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Value {
    type Err = ParseValueError;

    /// Accepts `p` or `p/q` with optional surrounding whitespace.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() {
            return Err(ParseValueError::Empty);
        }
        let parse = |part: &str| {
            part.trim()
                .parse::<i64>()
                .map_err(|_| ParseValueError::BadInteger(s.to_string()))
        };
        match s.split_once('/') {
            None => Ok(Value::integer(parse(s)?)),
            Some((n, d)) => {
                let (n, d) = (parse(n)?, parse(d)?);
                if d == 0 {
                    return Err(ParseValueError::ZeroDenominator(s.to_string()));
                }
                Ok(Value::new(n, d))
            }
        }
    }
}

// Integers serialize as integers, everything else as a "p/q" string.
impl Serialize for Value {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        if self.is_integer() {
            serializer.serialize_i64(self.numer())
        } else {
            serializer.serialize_str(&self.to_string())
        }
    }
}

impl<'de> Deserialize<'de> for Value {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct ValueVisitor;

        impl Visitor<'_> for ValueVisitor {
            type Value = Value;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("an integer or a rational string \"p/q\"")
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Value, E> {
                Ok(Value::integer(v))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Value, E> {
                i64::try_from(v)
                    .map(Value::integer)
                    .map_err(|_| E::custom("integer out of range"))
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<Value, E> {
                v.parse().map_err(E::custom)
            }
        }

        deserializer.deserialize_any(ValueVisitor)
    }
}
