//! Fixed-point exact decimals.
//!
//! Every threshold, level and measurement in the engine is a [`Decimal`]:
//! a signed integer count of nano-units (nine fractional digits). Equality
//! and ordering are integer comparisons, so two levels either are equal or
//! they are not; no epsilon is ever involved.

use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Number of fractional digits carried by every [`Decimal`].
pub const FRACTION_DIGITS: usize = 9;

/// Largest number of integer digits accepted by the parser.
///
/// Bounding the magnitude keeps `value * count` products (used for exact
/// mean comparisons) far away from `i128` overflow.
pub const MAX_INTEGER_DIGITS: usize = 15;

const UNIT: i128 = 1_000_000_000;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Decimal(i128);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecimalError {
    #[error("empty number")]
    Empty,
    #[error("unexpected character {found:?} at offset {offset}")]
    InvalidChar { offset: usize, found: char },
    #[error("more than {FRACTION_DIGITS} fractional digits")]
    TooPrecise,
    #[error("more than {MAX_INTEGER_DIGITS} integer digits")]
    TooLarge,
}

impl Decimal {
    pub const ZERO: Decimal = Decimal(0);
    pub const ONE: Decimal = Decimal(UNIT);

    /// `mantissa * 10^-scale`, e.g. `Decimal::new(95, 2)` is `0.95`.
    ///
    /// Returns `None` when `scale` exceeds [`FRACTION_DIGITS`].
    pub fn new(mantissa: i64, scale: u32) -> Option<Decimal> {
        if scale as usize > FRACTION_DIGITS {
            return None;
        }
        let factor = 10i128.pow(FRACTION_DIGITS as u32 - scale);
        Some(Decimal(mantissa as i128 * factor))
    }

    pub fn from_int(value: i64) -> Decimal {
        Decimal(value as i128 * UNIT)
    }

    /// Raw nano-unit count.
    pub fn nanos(self) -> i128 {
        self.0
    }

    pub fn from_nanos(nanos: i128) -> Decimal {
        Decimal(nanos)
    }

    pub fn abs(self) -> Decimal {
        Decimal(self.0.abs())
    }

    pub fn is_negative(self) -> bool {
        self.0 < 0
    }

    pub fn checked_add(self, rhs: Decimal) -> Option<Decimal> {
        self.0.checked_add(rhs.0).map(Decimal)
    }

    /// Multiplies by an integer count. Used for exact "mean vs threshold" tests.
    pub fn checked_mul_count(self, count: usize) -> Option<Decimal> {
        self.0.checked_mul(count as i128).map(Decimal)
    }
}

impl Add for Decimal {
    type Output = Decimal;
    fn add(self, rhs: Decimal) -> Decimal {
        Decimal(self.0 + rhs.0)
    }
}

impl Sub for Decimal {
    type Output = Decimal;
    fn sub(self, rhs: Decimal) -> Decimal {
        Decimal(self.0 - rhs.0)
    }
}

impl Neg for Decimal {
    type Output = Decimal;
    fn neg(self) -> Decimal {
        Decimal(-self.0)
    }
}

impl FromStr for Decimal {
    type Err = DecimalError;

    /// Accepts `-?[0-9]+(\.[0-9]+)?`. No leading `+`, no exponent, no percent.
    fn from_str(s: &str) -> Result<Decimal, DecimalError> {
        let (negative, body, base) = match s.strip_prefix('-') {
            Some(rest) => (true, rest, 1),
            None => (false, s, 0),
        };
        if body.is_empty() {
            return Err(DecimalError::Empty);
        }
        let (int_part, frac_part) = match body.find('.') {
            Some(dot) => (&body[..dot], Some(&body[dot + 1..])),
            None => (body, None),
        };
        let check_digits = |part: &str, offset: usize| -> Result<(), DecimalError> {
            match part.char_indices().find(|(_, c)| !c.is_ascii_digit()) {
                Some((i, c)) => Err(DecimalError::InvalidChar {
                    offset: offset + i,
                    found: c,
                }),
                None => Ok(()),
            }
        };
        check_digits(int_part, base)?;
        if int_part.is_empty() {
            let found = body.chars().next().unwrap_or('.');
            return Err(DecimalError::InvalidChar {
                offset: base,
                found,
            });
        }
        let frac = frac_part.unwrap_or("");
        let frac_offset = base + int_part.len() + 1;
        check_digits(frac, frac_offset)?;
        if frac_part.is_some() && frac.is_empty() {
            return Err(DecimalError::Empty);
        }
        let significant = int_part.trim_start_matches('0');
        if significant.len() > MAX_INTEGER_DIGITS {
            return Err(DecimalError::TooLarge);
        }
        if frac.len() > FRACTION_DIGITS {
            return Err(DecimalError::TooPrecise);
        }
        let int_value: i128 = if significant.is_empty() {
            0
        } else {
            significant.parse().unwrap_or(0)
        };
        let mut frac_value: i128 = 0;
        for b in frac.bytes() {
            frac_value = frac_value * 10 + i128::from(b - b'0');
        }
        frac_value *= 10i128.pow((FRACTION_DIGITS - frac.len()) as u32);
        let nanos = int_value * UNIT + frac_value;
        Ok(Decimal(if negative { -nanos } else { nanos }))
    }
}

impl fmt::Display for Decimal {
    /// Canonical form: no trailing fractional zeros, no `.` for integers,
    /// `-` only for values below zero.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.0 < 0 { "-" } else { "" };
        let magnitude = self.0.unsigned_abs();
        let unit = UNIT as u128;
        let int_part = magnitude / unit;
        let frac_part = magnitude % unit;
        if frac_part == 0 {
            write!(f, "{sign}{int_part}")
        } else {
            let digits = format!("{frac_part:09}");
            write!(f, "{sign}{int_part}.{}", digits.trim_end_matches('0'))
        }
    }
}

impl Serialize for Decimal {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Decimal {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Decimal, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
