use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::accountability::Rational;
use crate::error::{Error, Result};

/// Fractional digits kept by [`Decimal`].
pub const SCALE: u32 = 9;
const UNIT: i128 = 1_000_000_000;

/// Exact decimal with at most nine fractional digits, stored as an integer
/// count of `10^-9`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Decimal(i128);

impl Decimal {
    pub fn from_scaled(scaled: i128) -> Decimal {
        Decimal(scaled)
    }

    pub fn scaled(self) -> i128 {
        self.0
    }

    pub fn to_rational(self) -> Rational {
        Rational::new(BigInt::from(self.0), BigInt::from(UNIT))
    }
}

impl FromStr for Decimal {
    type Err = Error;

    /// Accepts an optional sign, digits with an optional fraction, and an
    /// optional exponent, as in `-12.5`, `.25` or `1e-7`.
    fn from_str(text: &str) -> Result<Decimal> {
        let bad = || Error::InvalidDecimal(text.to_string());
        let s = text.trim();
        let (negative, s) = match s.as_bytes().first() {
            Some(b'-') => (true, &s[1..]),
            Some(b'+') => (false, &s[1..]),
            _ => (false, s),
        };
        let (mantissa, exponent) = match s.find(['e', 'E']) {
            Some(i) => (&s[..i], s[i + 1..].parse::<i32>().map_err(|_| bad())?),
            None => (s, 0),
        };
        let (int, frac) = mantissa.split_once('.').unwrap_or((mantissa, ""));
        if int.is_empty() && frac.is_empty() {
            return Err(bad());
        }
        if !int.bytes().chain(frac.bytes()).all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let mut digits: String = format!("{int}{frac}");
        // value = digits * 10^(exponent - frac.len()); scaled adds SCALE.
        let mut shift = exponent as i64 - frac.len() as i64 + SCALE as i64;
        while shift < 0 {
            match digits.pop() {
                Some('0') => shift += 1,
                Some(_) => return Err(bad()),
                None => {
                    digits.push('0');
                    shift = 0;
                }
            }
        }
        let digits = digits.trim_start_matches('0');
        if digits.len() as i64 + shift > 36 {
            return Err(bad());
        }
        let mut value: i128 = if digits.is_empty() {
            0
        } else {
            digits.parse().map_err(|_| bad())?
        };
        for _ in 0..shift {
            value = value.checked_mul(10).ok_or_else(bad)?;
        }
        Ok(Decimal(if negative { -value } else { value }))
    }
}

impl fmt::Display for Decimal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.0 < 0 { "-" } else { "" };
        let abs = self.0.unsigned_abs();
        let int = abs / UNIT as u128;
        let frac = abs % UNIT as u128;
        if frac.is_zero() {
            write!(f, "{sign}{int}")
        } else {
            let frac = format!("{frac:09}");
            write!(f, "{sign}{int}.{}", frac.trim_end_matches('0'))
        }
    }
}
