//! Exact rational values.
//!
//! Every cocycle value and every reported maximum is a `Rat`: an `i64/i64`
//! fraction kept in canonical reduced form (gcd 1, positive denominator).
//! Arithmetic is checked; an overflow surfaces as [`Error::Overflow`] instead
//! of wrapping. Serialization is always the lowest-terms `"num/den"` string
//! (`"num"` alone for integers).

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num::rational::Ratio;
use num::traits::{CheckedAdd, CheckedMul, Signed, Zero};
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// An exact rational in canonical reduced form.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rat(Ratio<i64>);

impl Rat {
    pub const ZERO: Rat = Rat(Ratio::new_raw(0, 1));
    pub const ONE: Rat = Rat(Ratio::new_raw(1, 1));

    /// Builds `num/den` in lowest terms. `den` must be nonzero.
    pub fn new(num: i64, den: i64) -> Result<Rat> {
        if den == 0 {
            return Err(Error::Validation("zero denominator".into()));
        }
        if num == i64::MIN || den == i64::MIN {
            // Ratio::new negates internally; i64::MIN has no positive image.
            return Err(Error::Overflow(format!("{num}/{den}")));
        }
        Ok(Rat(Ratio::new(num, den)))
    }

    pub fn integer(n: i64) -> Rat {
        Rat(Ratio::from_integer(n))
    }

    pub fn numer(&self) -> i64 {
        *self.0.numer()
    }

    pub fn denom(&self) -> i64 {
        *self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn abs(&self) -> Rat {
        Rat(self.0.abs())
    }

    pub fn neg(&self) -> Rat {
        Rat(-self.0)
    }

    pub fn checked_add(&self, rhs: &Rat) -> Result<Rat> {
        self.0
            .checked_add(&rhs.0)
            .map(Rat)
            .ok_or_else(|| Error::Overflow(format!("{self} + {rhs}")))
    }

    pub fn checked_mul(&self, rhs: &Rat) -> Result<Rat> {
        self.0
            .checked_mul(&rhs.0)
            .map(Rat)
            .ok_or_else(|| Error::Overflow(format!("{self} * {rhs}")))
    }

    /// Approximate value as `f64`; for display only, never for decisions.
    pub fn to_f64(&self) -> f64 {
        self.numer() as f64 / self.denom() as f64
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denom() == 1 {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

impl fmt::Debug for Rat {
    // Debug mirrors Display; the reduced fraction is the whole state.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rat {
    type Err = Error;

    /// Parses `"num"` or `"num/den"`; the result is reduced, so `"22/90"`
    /// parses equal to `"11/45"`.
    fn from_str(s: &str) -> Result<Rat> {
        let s = s.trim();
        let parse_int = |part: &str, what: &str| -> Result<i64> {
            part.trim().parse::<i64>().map_err(|e| Error::Parse {
                line: 0,
                field: what.into(),
                message: format!("`{part}`: {e}"),
            })
        };
        match s.split_once('/') {
            None => Ok(Rat::integer(parse_int(s, "numerator")?)),
            Some((n, d)) => Rat::new(parse_int(n, "numerator")?, parse_int(d, "denominator")?),
        }
    }
}

impl PartialOrd<(i64, i64)> for Rat {
    fn partial_cmp(&self, other: &(i64, i64)) -> Option<Ordering> {
        let rhs = Ratio::new(other.0, other.1);
        self.0.partial_cmp(&rhs)
    }
}

impl PartialEq<(i64, i64)> for Rat {
    fn eq(&self, other: &(i64, i64)) -> bool {
        self.0 == Ratio::new(other.0, other.1)
    }
}

impl Serialize for Rat {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rat {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Rat, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduces_on_construction() {
        let r = Rat::new(22, 90).unwrap();
        assert_eq!((r.numer(), r.denom()), (11, 45));
        let r = Rat::new(3, -6).unwrap();
        assert_eq!((r.numer(), r.denom()), (-1, 2));
    }

    #[test]
    fn zero_denominator_rejected() {
        assert!(Rat::new(1, 0).is_err());
    }

    #[test]
    fn parse_normalizes() {
        let r: Rat = "22/90".parse().unwrap();
        assert_eq!(r.to_string(), "11/45");
        let r: Rat = "-4/2".parse().unwrap();
        assert_eq!(r.to_string(), "-2");
        assert!("1/0".parse::<Rat>().is_err());
        assert!("x/2".parse::<Rat>().is_err());
    }

    #[test]
    fn overflow_is_an_error() {
        let big = Rat::integer(i64::MAX);
        assert!(matches!(big.checked_add(&Rat::ONE), Err(Error::Overflow(_))));
        assert!(matches!(big.checked_mul(&big), Err(Error::Overflow(_))));
    }

    #[test]
    fn json_roundtrip() {
        let r = Rat::new(11, 45).unwrap();
        let s = serde_json::to_string(&r).unwrap();
        assert_eq!(s, "\"11/45\"");
        let back: Rat = serde_json::from_str(&s).unwrap();
        assert_eq!(back, r);
    }
}
