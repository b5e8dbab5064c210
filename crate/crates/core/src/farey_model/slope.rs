use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::error::{McgError, Result};

/// An essential simple closed curve on the once-punctured torus, i.e. a vertex
/// of the Farey graph: a coprime pair `(p, q)` up to sign.
///
/// Canonical form has `q > 0`, or `(p, q) = (1, 0)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Slope {
    p: BigInt,
    q: BigInt,
}

impl Slope {
    /// Canonical representative of `±(p, q)`; rejects non-coprime pairs.
    pub fn new(p: impl Into<BigInt>, q: impl Into<BigInt>) -> Result<Self> {
        let (p, q) = (p.into(), q.into());
        if !p.gcd(&q).is_one() {
            return Err(McgError::NotACurve {
                p: p.to_string(),
                q: q.to_string(),
            });
        }
        Ok(Self::normalized(p, q))
    }

    /// Sign-normalizes a pair already known to be coprime.
    pub(crate) fn normalized(p: BigInt, q: BigInt) -> Self {
        debug_assert!(p.gcd(&q).is_one());
        if q.is_negative() || (q.is_zero() && p.is_negative()) {
            Slope { p: -p, q: -q }
        } else {
            Slope { p, q }
        }
    }

    pub fn infinity() -> Self {
        Slope {
            p: BigInt::one(),
            q: BigInt::zero(),
        }
    }

    pub fn p(&self) -> &BigInt {
        &self.p
    }

    pub fn q(&self) -> &BigInt {
        &self.q
    }

    /// Geometric intersection number `|p q' − p' q|`.
    pub fn intersection(&self, other: &Slope) -> BigInt {
        (&self.p * &other.q - &other.p * &self.q).abs()
    }
}

/// Free-function form of [`Slope::intersection`].
pub fn intersection(s1: &Slope, s2: &Slope) -> BigInt {
    s1.intersection(s2)
}

/// Canonical slope constructor.
pub fn canonical_slope(p: impl Into<BigInt>, q: impl Into<BigInt>) -> Result<Slope> {
    Slope::new(p, q)
}

impl fmt::Display for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.p, self.q)
    }
}

impl FromStr for Slope {
    type Err = McgError;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let (ps, qs) = t
            .split_once('/')
            .ok_or_else(|| McgError::parse(t, "expected a slope of the form p/q"))?;
        let p: BigInt = ps
            .trim()
            .parse()
            .map_err(|_| McgError::parse(ps.trim(), "not an integer"))?;
        let q: BigInt = qs
            .trim()
            .parse()
            .map_err(|_| McgError::parse(qs.trim(), "not an integer"))?;
        Slope::new(p, q)
    }
}

impl Serialize for Slope {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sl(p: i64, q: i64) -> Slope {
        Slope::new(p, q).unwrap()
    }

    #[test]
    fn canonical_examples() {
        let s = sl(3, -2);
        assert_eq!((s.p(), s.q()), (&BigInt::from(-3), &BigInt::from(2)));
        assert_eq!(sl(1, 0), Slope::infinity());
        assert_eq!(sl(-1, 0), Slope::infinity());
        assert!(matches!(Slope::new(2, 4), Err(McgError::NotACurve { .. })));
        assert!(Slope::new(0, 0).is_err());
    }

    #[test]
    fn intersection_examples() {
        assert_eq!(sl(1, 0).intersection(&sl(0, 1)), BigInt::from(1));
        assert_eq!(sl(1, 0).intersection(&sl(1, 0)), BigInt::from(0));
        assert_eq!(sl(2, 3).intersection(&sl(1, 1)), BigInt::from(1));
    }

    #[test]
    fn parse_slopes() {
        assert_eq!("5/2".parse::<Slope>().unwrap(), sl(5, 2));
        assert_eq!(" -1 / 0 ".parse::<Slope>().unwrap(), Slope::infinity());
        let err = "3/x".parse::<Slope>().unwrap_err();
        assert_eq!(err, McgError::parse("x", "not an integer"));
        assert!("4/6".parse::<Slope>().is_err());
    }
}
