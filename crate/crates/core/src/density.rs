//! Exact non-negative rationals used for densities, slopes and thresholds.
//!
//! Every comparison goes through 128-bit cross multiplication, so `6/2` and
//! `3/1` compare equal and no floating point value ever decides an ordering.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;

/// A degree sum over a window of `den` timestamps, or any other non-negative
/// rational `num / den` with `den >= 1`.
///
/// Values are kept unreduced so a window density remembers its length; call
/// [`Density::reduced`] when a canonical form is wanted.
#[derive(Clone, Copy, Serialize, Deserialize)]
pub struct Density {
    pub num: u64,
    pub den: u64,
}

impl Density {
    pub const ZERO: Density = Density { num: 0, den: 1 };

    /// # Panics
    /// If `den` is zero.
    pub fn new(num: u64, den: u64) -> Density {
        assert!(den > 0, "density denominator must be positive");
        Density { num, den }
    }

    pub fn integer(value: u64) -> Density {
        Density { num: value, den: 1 }
    }

    pub fn reduced(self) -> Density {
        let g = gcd(self.num, self.den);
        Density {
            num: self.num / g,
            den: self.den / g,
        }
    }

    pub fn is_zero(self) -> bool {
        self.num == 0
    }

    /// `self * factor / divisor`, reduced. Used for the shrunken threshold
    /// `delta * l / (l + 1)`.
    pub fn scaled(self, factor: u64, divisor: u64) -> Density {
        assert!(divisor > 0, "divisor must be positive");
        let r = self.reduced();
        let g1 = gcd(factor, r.den);
        let g2 = gcd(r.num, divisor);
        Density::new((r.num / g2) * (factor / g1), (r.den / g1) * (divisor / g2)).reduced()
    }

    /// Exact `count < self` for an integer count (a degree).
    pub fn exceeds_count(self, count: u64) -> bool {
        (count as u128) * (self.den as u128) < self.num as u128
    }

    pub fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

pub(crate) fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a.max(1)
}

impl PartialEq for Density {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Density {}

impl Ord for Density {
    fn cmp(&self, other: &Self) -> Ordering {
        let lhs = self.num as u128 * other.den as u128;
        let rhs = other.num as u128 * self.den as u128;
        lhs.cmp(&rhs)
    }
}

impl PartialOrd for Density {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Density {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl fmt::Debug for Density {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

/// Accepts `"p/q"`, an integer, or a plain decimal such as `"1.25"`; the
/// decimal is converted digit by digit so `"0.1"` is exactly `1/10`.
impl FromStr for Density {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let bad = || Error::InvalidParameter(format!("not a non-negative rational: {s:?}"));
        if let Some((p, q)) = s.split_once('/') {
            let num: u64 = p.trim().parse().map_err(|_| bad())?;
            let den: u64 = q.trim().parse().map_err(|_| bad())?;
            if den == 0 {
                return Err(bad());
            }
            return Ok(Density::new(num, den).reduced());
        }
        let (int_part, frac_part) = s.split_once('.').unwrap_or((s, ""));
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(bad());
        }
        if !int_part.chars().all(|c| c.is_ascii_digit())
            || !frac_part.chars().all(|c| c.is_ascii_digit())
        {
            return Err(bad());
        }
        // 10^18 is the largest power of ten that fits in u64.
        if frac_part.len() > 18 {
            return Err(bad());
        }
        let den = 10u64.pow(frac_part.len() as u32);
        let int_val: u64 = if int_part.is_empty() {
            0
        } else {
            int_part.parse().map_err(|_| bad())?
        };
        let frac_val: u64 = if frac_part.is_empty() {
            0
        } else {
            frac_part.parse().map_err(|_| bad())?
        };
        let num = int_val
            .checked_mul(den)
            .and_then(|v| v.checked_add(frac_val))
            .ok_or_else(bad)?;
        Ok(Density::new(num, den).reduced())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn equality_is_by_value() {
        assert_eq!(Density::new(6, 2), Density::integer(3));
        assert_eq!(Density::new(14, 4), Density::new(7, 2));
        assert!(Density::new(11, 3) > Density::new(18, 5));
        assert!(Density::new(8, 3) < Density::integer(3));
    }

    #[test]
    fn parses_fractions_and_decimals_exactly() {
        assert_eq!("3/2".parse::<Density>().unwrap(), Density::new(3, 2));
        assert_eq!("1.5".parse::<Density>().unwrap(), Density::new(3, 2));
        assert_eq!("0.1".parse::<Density>().unwrap(), Density::new(1, 10));
        assert_eq!("3".parse::<Density>().unwrap(), Density::integer(3));
        assert_eq!(".5".parse::<Density>().unwrap(), Density::new(1, 2));
        for bad in ["", "a", "1/0", "-1", "1.2.3", "1e3", "/2"] {
            assert!(bad.parse::<Density>().is_err(), "{bad} should not parse");
        }
    }

    #[test]
    fn count_comparison() {
        let d = Density::new(3, 2);
        assert!(d.exceeds_count(1));
        assert!(!d.exceeds_count(2));
        assert!(!Density::integer(2).exceeds_count(2));
    }

    #[test]
    fn scaled_threshold() {
        assert_eq!(Density::integer(3).scaled(2, 3), Density::integer(2));
        assert_eq!(Density::new(8, 3).scaled(3, 4), Density::integer(2));
    }
}
