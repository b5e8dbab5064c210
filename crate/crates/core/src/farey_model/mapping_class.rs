use std::fmt;
use std::ops::Mul;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use super::slope::Slope;
use crate::error::{McgError, Result};

/// A mapping class of the once-punctured torus: an integer matrix
/// `[[a, b], [c, d]]` with `ad − bc = 1`.
///
/// `==` compares entries exactly (group identity). Curves cannot tell `M`
/// from `−M`; use [`MappingClass::eq_projective`] for action-level equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MappingClass {
    a: BigInt,
    b: BigInt,
    c: BigInt,
    d: BigInt,
}

impl MappingClass {
    pub fn new(
        a: impl Into<BigInt>,
        b: impl Into<BigInt>,
        c: impl Into<BigInt>,
        d: impl Into<BigInt>,
    ) -> Result<Self> {
        let m = MappingClass {
            a: a.into(),
            b: b.into(),
            c: c.into(),
            d: d.into(),
        };
        let det = m.determinant();
        if det.is_one() {
            Ok(m)
        } else {
            Err(McgError::NotUnimodular {
                det: det.to_string(),
            })
        }
    }

    /// Row-major constructor for literals in tests and examples; panics when
    /// the determinant is not 1.
    pub fn from_rows(rows: [[i64; 2]; 2]) -> Self {
        Self::new(rows[0][0], rows[0][1], rows[1][0], rows[1][1]).expect("determinant 1")
    }

    pub(crate) fn from_entries_unchecked(a: BigInt, b: BigInt, c: BigInt, d: BigInt) -> Self {
        MappingClass { a, b, c, d }
    }

    pub fn identity() -> Self {
        MappingClass {
            a: BigInt::one(),
            b: BigInt::zero(),
            c: BigInt::zero(),
            d: BigInt::one(),
        }
    }

    pub fn entries(&self) -> [&BigInt; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }

    pub fn determinant(&self) -> BigInt {
        &self.a * &self.d - &self.b * &self.c
    }

    pub fn trace(&self) -> BigInt {
        &self.a + &self.d
    }

    pub fn is_identity(&self) -> bool {
        self.a.is_one() && self.d.is_one() && self.b.is_zero() && self.c.is_zero()
    }

    /// True for `I` and `−I`.
    pub fn is_central(&self) -> bool {
        self.b.is_zero() && self.c.is_zero() && self.a == self.d && self.a.abs().is_one()
    }

    pub fn inverse(&self) -> Self {
        MappingClass {
            a: self.d.clone(),
            b: -&self.b,
            c: -&self.c,
            d: self.a.clone(),
        }
    }

    pub fn negated(&self) -> Self {
        MappingClass {
            a: -&self.a,
            b: -&self.b,
            c: -&self.c,
            d: -&self.d,
        }
    }

    /// Integer power by repeated squaring; negative exponents invert.
    pub fn pow(&self, n: i64) -> Self {
        let mut base = if n < 0 { self.inverse() } else { self.clone() };
        let mut e = n.unsigned_abs();
        let mut acc = MappingClass::identity();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn commutes_with(&self, other: &Self) -> bool {
        self * other == other * self
    }

    pub fn eq_projective(&self, other: &Self) -> bool {
        self == other || self.negated() == *other
    }

    /// Representative of `±M` whose first nonzero entry is positive.
    pub fn projective_key(&self) -> Self {
        let lead = [&self.a, &self.b, &self.c, &self.d]
            .into_iter()
            .find(|x| !x.is_zero())
            .expect("nonzero matrix");
        if lead.is_negative() {
            self.negated()
        } else {
            self.clone()
        }
    }

    /// Image of a curve: canonical slope of `M · (p, q)ᵀ`.
    pub fn apply(&self, s: &Slope) -> Slope {
        let p = &self.a * s.p() + &self.b * s.q();
        let q = &self.c * s.p() + &self.d * s.q();
        Slope::normalized(p, q)
    }

    /// Reduction modulo 3 with entries in `0..3`, row-major.
    pub fn mod3(&self) -> [u8; 4] {
        let r = |x: &BigInt| -> u8 {
            let m = x.mod_floor(&BigInt::from(3));
            u8::try_from(m).expect("residue")
        };
        [r(&self.a), r(&self.b), r(&self.c), r(&self.d)]
    }
}

/// Applies a mapping class to a slope.
pub fn apply(m: &MappingClass, s: &Slope) -> Slope {
    m.apply(s)
}

impl Mul<&MappingClass> for &MappingClass {
    type Output = MappingClass;
    fn mul(self, o: &MappingClass) -> MappingClass {
        MappingClass {
            a: &self.a * &o.a + &self.b * &o.c,
            b: &self.a * &o.b + &self.b * &o.d,
            c: &self.c * &o.a + &self.d * &o.c,
            d: &self.c * &o.b + &self.d * &o.d,
        }
    }
}

impl Mul for MappingClass {
    type Output = MappingClass;
    fn mul(self, o: MappingClass) -> MappingClass {
        &self * &o
    }
}

impl fmt::Display for MappingClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{},{}],[{},{}]]", self.a, self.b, self.c, self.d)
    }
}

impl Serialize for MappingClass {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl FromStr for MappingClass {
    type Err = McgError;

    /// Accepts `[[a,b],[c,d]]` or the flat form `a b c d`.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let tokens: Vec<&str> = if t.starts_with('[') {
            let mut depth = 0i32;
            for ch in t.chars() {
                match ch {
                    '[' => depth += 1,
                    ']' => depth -= 1,
                    _ => {}
                }
                if depth < 0 {
                    return Err(McgError::parse(t, "unbalanced brackets"));
                }
            }
            if depth != 0 {
                return Err(McgError::parse(t, "unbalanced brackets"));
            }
            t.split(['[', ']', ','])
                .map(str::trim)
                .filter(|x| !x.is_empty())
                .collect()
        } else {
            t.split(|c: char| c.is_whitespace() || c == ',')
                .filter(|x| !x.is_empty())
                .collect()
        };
        if tokens.len() != 4 {
            return Err(McgError::parse(
                t,
                format!("expected 4 matrix entries, found {}", tokens.len()),
            ));
        }
        let mut vals = Vec::with_capacity(4);
        for tok in tokens {
            let v: BigInt = tok
                .parse()
                .map_err(|_| McgError::parse(tok, "not an integer"))?;
            vals.push(v);
        }
        let mut it = vals.into_iter();
        let (a, b, c, d) = (
            it.next().unwrap(),
            it.next().unwrap(),
            it.next().unwrap(),
            it.next().unwrap(),
        );
        MappingClass::new(a, b, c, d)
    }
}

/// Parses a `;`-separated list of matrices.
pub fn parse_matrix_list(s: &str) -> Result<Vec<MappingClass>> {
    let out: Vec<MappingClass> = s
        .split(';')
        .map(str::trim)
        .filter(|x| !x.is_empty())
        .map(str::parse)
        .collect::<Result<_>>()?;
    if out.is_empty() {
        return Err(McgError::parse(s, "no matrices given"));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sl(p: i64, q: i64) -> Slope {
        Slope::new(p, q).unwrap()
    }

    #[test]
    fn apply_examples() {
        let id = MappingClass::identity();
        assert_eq!(id.apply(&sl(5, 3)), sl(5, 3));
        let t = MappingClass::from_rows([[1, 1], [0, 1]]);
        assert_eq!(t.apply(&sl(0, 1)), sl(1, 1));
        let m = MappingClass::from_rows([[2, 1], [1, 1]]);
        assert_eq!(m.apply(&sl(1, 0)), sl(2, 1));
    }

    #[test]
    fn powers_and_inverses() {
        let m = MappingClass::from_rows([[2, 1], [1, 1]]);
        assert_eq!(m.pow(4), MappingClass::from_rows([[34, 21], [21, 13]]));
        assert!((&m.pow(-3) * &m.pow(3)).is_identity());
        assert!(m.pow(0).is_identity());
    }

    #[test]
    fn projective_comparison() {
        let m = MappingClass::from_rows([[2, 1], [1, 1]]);
        let n = m.negated();
        assert_ne!(m, n);
        assert!(m.eq_projective(&n));
        assert_eq!(m.projective_key(), n.projective_key());
    }

    #[test]
    fn parse_both_forms() {
        let m: MappingClass = "[[2,1],[1,1]]".parse().unwrap();
        assert_eq!(m, MappingClass::from_rows([[2, 1], [1, 1]]));
        let f: MappingClass = "0 -1 1 0".parse().unwrap();
        assert_eq!(f, MappingClass::from_rows([[0, -1], [1, 0]]));
        assert_eq!(m.to_string().parse::<MappingClass>().unwrap(), m);
        assert!(matches!(
            "[[2,1],[1,2]]".parse::<MappingClass>(),
            Err(McgError::NotUnimodular { .. })
        ));
        assert_eq!(
            "[[2,q],[1,1]]".parse::<MappingClass>().unwrap_err(),
            McgError::parse("q", "not an integer")
        );
        assert!("[[1,0],[0,1]".parse::<MappingClass>().is_err());
        let list = parse_matrix_list("[[1,2],[0,1]]; 1 0 2 1").unwrap();
        assert_eq!(list.len(), 2);
    }

    #[test]
    fn mod3_reduction() {
        let m = MappingClass::from_rows([[1, -3], [3, -8]]);
        assert_eq!(m.mod3(), [1, 0, 0, 1]);
    }
}
