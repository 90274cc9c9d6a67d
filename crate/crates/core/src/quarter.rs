use std::fmt;
use std::iter::Sum;
use std::ops::{Add, Neg, Sub};

use serde::{Deserialize, Serialize};

/// An exact rational with denominator 4, stored as its numerator.
///
/// Adjusted Euler characteristics are always quarter-integers, so this is
/// the only number type the core needs.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Quarters(pub i64);

impl Quarters {
    pub const ZERO: Quarters = Quarters(0);

    pub fn from_int(v: i64) -> Self {
        Quarters(4 * v)
    }

    pub fn abs(self) -> Self {
        Quarters(self.0.abs())
    }

    /// Smallest integer `>= self`.
    pub fn ceil(self) -> i64 {
        self.0.div_euclid(4) + i64::from(self.0.rem_euclid(4) != 0)
    }

    /// `ceil(self / d)` for a positive integer divisor.
    pub fn ceil_div(self, d: i64) -> i64 {
        assert!(d > 0);
        let den = 4 * d;
        self.0.div_euclid(den) + i64::from(self.0.rem_euclid(den) != 0)
    }

    pub fn is_integer(self) -> bool {
        self.0 % 4 == 0
    }
}

impl Add for Quarters {
    type Output = Quarters;
    fn add(self, o: Quarters) -> Quarters {
        Quarters(self.0 + o.0)
    }
}

impl Sub for Quarters {
    type Output = Quarters;
    fn sub(self, o: Quarters) -> Quarters {
        Quarters(self.0 - o.0)
    }
}

impl Neg for Quarters {
    type Output = Quarters;
    fn neg(self) -> Quarters {
        Quarters(-self.0)
    }
}

impl Sum for Quarters {
    fn sum<I: Iterator<Item = Quarters>>(iter: I) -> Quarters {
        Quarters(iter.map(|q| q.0).sum())
    }
}

impl fmt::Display for Quarters {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (n, d) = match self.0 {
            v if v % 4 == 0 => return write!(f, "{}", v / 4),
            v if v % 2 == 0 => (v / 2, 2),
            v => (v, 4),
        };
        write!(f, "{n}/{d}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ceil_handles_negative_and_fractional() {
        assert_eq!(Quarters(1).ceil(), 1);
        assert_eq!(Quarters(4).ceil(), 1);
        assert_eq!(Quarters(-1).ceil(), 0);
        assert_eq!(Quarters(-5).ceil(), -1);
        assert_eq!(Quarters(0).ceil(), 0);
    }

    #[test]
    fn ceil_div_by_six() {
        // 1/4 / 6 -> 1, 1 / 6 -> 1, 6 / 6 -> 1, 25/4 / 6 -> 2
        assert_eq!(Quarters(1).ceil_div(6), 1);
        assert_eq!(Quarters(4).ceil_div(6), 1);
        assert_eq!(Quarters(24).ceil_div(6), 1);
        assert_eq!(Quarters(25).ceil_div(6), 2);
        assert_eq!(Quarters(0).ceil_div(6), 0);
    }

    #[test]
    fn display_reduces() {
        assert_eq!(Quarters(-4).to_string(), "-1");
        assert_eq!(Quarters(-2).to_string(), "-1/2");
        assert_eq!(Quarters(-1).to_string(), "-1/4");
        assert_eq!(Quarters(3).to_string(), "3/4");
    }
}
