//! Exact arithmetic in real quadratic fields.
//!
//! A [`QuadraticIrrational`] is `(a + b√D) / c`. Fixed points and eigenvalues
//! of hyperbolic 2×2 integer matrices live here, so every comparison a
//! certificate relies on is decided exactly.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{McgError, Result};
use crate::exact::{ln_bigint_abs, sign_of};

/// Primes below this bound are stripped from the radicand when building
/// canonical forms. Larger square factors are detected only when the
/// remaining cofactor is itself a perfect square; arithmetic stays exact
/// either way because operands are aligned by [`QuadraticIrrational::align`].
const SQUAREFREE_TRIAL_LIMIT: u32 = 10_000;

/// `(a + b√D) / c` with `c > 0`, `gcd(a, b, c) = 1`, and `D = 0` exactly when
/// the value is rational (`b = 0`).
#[derive(Clone, Debug)]
pub struct QuadraticIrrational {
    a: BigInt,
    b: BigInt,
    c: BigInt,
    radicand: BigInt,
}

fn is_perfect_square(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    if &r * &r == *n {
        Some(r)
    } else {
        None
    }
}

/// Splits `n ≥ 1` as `f² · r`, stripping every square factor made of primes
/// below the trial limit and absorbing a perfect-square cofactor.
fn square_part(n: &BigInt) -> (BigInt, BigInt) {
    let mut rest = n.clone();
    let mut f = BigInt::one();
    let mut p: u32 = 2;
    while p <= SQUAREFREE_TRIAL_LIMIT {
        let pp = BigInt::from(p) * p;
        if pp > rest {
            break;
        }
        while (&rest % &pp).is_zero() {
            rest /= &pp;
            f *= p;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if let Some(r) = is_perfect_square(&rest) {
        f *= r;
        rest = BigInt::one();
    }
    (f, rest)
}

impl QuadraticIrrational {
    /// Builds `(a + b√radicand) / c`, extracting square factors of the radicand.
    pub fn new(a: BigInt, b: BigInt, radicand: BigInt, c: BigInt) -> Result<Self> {
        if c.is_zero() {
            return Err(McgError::InvalidParameter("zero denominator".into()));
        }
        if radicand.is_negative() {
            return Err(McgError::InvalidParameter(format!(
                "negative radicand {radicand}"
            )));
        }
        let (mut a, mut b) = (a, b);
        let mut d = radicand;
        if d.is_zero() || b.is_zero() {
            b = BigInt::zero();
            d = BigInt::zero();
        } else {
            let (f, r) = square_part(&d);
            b *= f;
            d = r;
            if d.is_one() {
                a += &b;
                b = BigInt::zero();
                d = BigInt::zero();
            }
        }
        Ok(Self::reduced(a, b, c, d))
    }

    pub fn from_integer(n: BigInt) -> Self {
        Self::reduced(n, BigInt::zero(), BigInt::one(), BigInt::zero())
    }

    pub fn from_rational(r: &BigRational) -> Self {
        Self::reduced(
            r.numer().clone(),
            BigInt::zero(),
            r.denom().clone(),
            BigInt::zero(),
        )
    }

    /// `√n / 1`.
    pub fn sqrt_of(n: BigInt) -> Result<Self> {
        Self::new(BigInt::zero(), BigInt::one(), n, BigInt::one())
    }

    fn reduced(mut a: BigInt, mut b: BigInt, mut c: BigInt, mut d: BigInt) -> Self {
        if b.is_zero() {
            d = BigInt::zero();
        }
        if c.is_negative() {
            a = -a;
            b = -b;
            c = -c;
        }
        let g = a.gcd(&b).gcd(&c);
        if !g.is_zero() && !g.is_one() {
            a /= &g;
            b /= &g;
            c /= &g;
        }
        if a.is_zero() && b.is_zero() {
            c = BigInt::one();
        }
        QuadraticIrrational {
            a,
            b,
            c,
            radicand: d,
        }
    }

    pub fn rational_part(&self) -> &BigInt {
        &self.a
    }
    pub fn surd_coefficient(&self) -> &BigInt {
        &self.b
    }
    pub fn denominator(&self) -> &BigInt {
        &self.c
    }
    pub fn radicand(&self) -> &BigInt {
        &self.radicand
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn to_rational(&self) -> Option<BigRational> {
        self.is_rational()
            .then(|| BigRational::new(self.a.clone(), self.c.clone()))
    }

    /// Rewrites both operands over one radicand. Fails only when both are
    /// irrational and their radicands differ by a non-square factor.
    #[allow(clippy::type_complexity)]
    fn align(
        x: &Self,
        y: &Self,
    ) -> Result<((BigInt, BigInt, BigInt), (BigInt, BigInt, BigInt), BigInt)> {
        let xs = (x.a.clone(), x.b.clone(), x.c.clone());
        let ys = (y.a.clone(), y.b.clone(), y.c.clone());
        if x.is_rational() {
            return Ok((xs, ys, y.radicand.clone()));
        }
        if y.is_rational() || x.radicand == y.radicand {
            return Ok((xs, ys, x.radicand.clone()));
        }
        let prod = &x.radicand * &y.radicand;
        match is_perfect_square(&prod) {
            // √D_y = (k / D_x) √D_x
            Some(k) => {
                let ys = (&y.a * &x.radicand, &y.b * k, &y.c * &x.radicand);
                Ok((xs, ys, x.radicand.clone()))
            }
            None => Err(McgError::RadicandMismatch(x.to_string(), y.to_string())),
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        let ((a1, b1, c1), (a2, b2, c2), d) = Self::align(self, other)?;
        Ok(Self::reduced(
            &a1 * &c2 + &a2 * &c1,
            &b1 * &c2 + &b2 * &c1,
            c1 * c2,
            d,
        ))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.checked_add(&-other)
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        let ((a1, b1, c1), (a2, b2, c2), d) = Self::align(self, other)?;
        let a = &a1 * &a2 + &b1 * &b2 * &d;
        let b = &a1 * &b2 + &a2 * &b1;
        Ok(Self::reduced(a, b, c1 * c2, d))
    }

    pub fn recip(&self) -> Result<Self> {
        let norm = &self.a * &self.a - &self.b * &self.b * &self.radicand;
        if norm.is_zero() {
            return Err(McgError::InvalidParameter("division by zero".into()));
        }
        Ok(Self::reduced(
            &self.c * &self.a,
            -(&self.c * &self.b),
            norm,
            self.radicand.clone(),
        ))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self> {
        self.checked_mul(&other.recip()?)
    }

    /// Galois conjugate `(a − b√D) / c`.
    pub fn conjugate(&self) -> Self {
        Self::reduced(
            self.a.clone(),
            -self.b.clone(),
            self.c.clone(),
            self.radicand.clone(),
        )
    }

    /// Exact sign: -1, 0 or 1.
    pub fn signum(&self) -> i8 {
        let sa = sign_of(&self.a);
        let sb = sign_of(&self.b);
        if sb == 0 {
            return sa;
        }
        if sa == 0 {
            return sb;
        }
        if sa == sb {
            return sa;
        }
        let a2 = &self.a * &self.a;
        let b2d = &self.b * &self.b * &self.radicand;
        match a2.cmp(&b2d) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => 0,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.signum() == 0
    }

    /// Exact comparison; panics on incompatible radicands.
    pub fn cmp_exact(&self, other: &Self) -> Ordering {
        self.try_cmp(other).expect("compatible radicands")
    }

    pub fn try_cmp(&self, other: &Self) -> Result<Ordering> {
        Ok(self.checked_sub(other)?.signum().cmp(&0))
    }

    /// Largest integer not exceeding the value.
    pub fn floor(&self) -> BigInt {
        if self.is_rational() {
            return self.a.div_floor(&self.c);
        }
        let b2d = &self.b * &self.b * &self.radicand;
        let root = b2d.sqrt();
        let exact = &root * &root == b2d;
        let surd_floor = if self.b.is_positive() {
            root
        } else if exact {
            -root
        } else {
            -root - 1
        };
        (&self.a + surd_floor).div_floor(&self.c)
    }

    pub fn ceil(&self) -> BigInt {
        -(-self).floor()
    }

    pub fn to_f64(&self) -> f64 {
        let conv = |x: &BigInt| x.to_f64().filter(|v| v.is_finite());
        if let (Some(a), Some(b), Some(c), Some(d)) = (
            conv(&self.a),
            conv(&self.b),
            conv(&self.c),
            conv(&self.radicand),
        ) {
            return (a + b * d.sqrt()) / c;
        }
        // Scale down in log space when parts overflow f64.
        let la = ln_bigint_abs(&self.a);
        let lb = ln_bigint_abs(&self.b) + 0.5 * ln_bigint_abs(&self.radicand);
        let lc = ln_bigint_abs(&self.c);
        let m = la.max(lb);
        let sa = sign_of(&self.a) as f64;
        let sb = sign_of(&self.b) as f64;
        let num = sa * (la - m).exp() + sb * (lb - m).exp();
        num * (m - lc).exp()
    }
}

impl PartialEq for QuadraticIrrational {
    fn eq(&self, other: &Self) -> bool {
        matches!(self.try_cmp(other), Ok(Ordering::Equal))
    }
}

impl Eq for QuadraticIrrational {}

impl PartialOrd for QuadraticIrrational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.try_cmp(other).ok()
    }
}

impl Neg for &QuadraticIrrational {
    type Output = QuadraticIrrational;
    fn neg(self) -> QuadraticIrrational {
        QuadraticIrrational {
            a: -self.a.clone(),
            b: -self.b.clone(),
            c: self.c.clone(),
            radicand: self.radicand.clone(),
        }
    }
}

impl Neg for QuadraticIrrational {
    type Output = QuadraticIrrational;
    fn neg(self) -> QuadraticIrrational {
        -&self
    }
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident, $checked:ident) => {
        impl $tr<&QuadraticIrrational> for &QuadraticIrrational {
            type Output = QuadraticIrrational;
            /// Panics when the radicands are incompatible.
            fn $m(self, rhs: &QuadraticIrrational) -> QuadraticIrrational {
                self.$checked(rhs).expect("quadratic field mismatch")
            }
        }
        impl $tr for QuadraticIrrational {
            type Output = QuadraticIrrational;
            fn $m(self, rhs: QuadraticIrrational) -> QuadraticIrrational {
                (&self).$m(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, checked_add);
forward_binop!(Sub, sub, checked_sub);
forward_binop!(Mul, mul, checked_mul);
forward_binop!(Div, div, checked_div);

impl fmt::Display for QuadraticIrrational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let numer = if self.is_rational() {
            self.a.to_string()
        } else {
            let surd = if self.b.is_one() {
                format!("√{}", self.radicand)
            } else if self.b == -BigInt::one() {
                format!("-√{}", self.radicand)
            } else {
                format!("{}√{}", self.b, self.radicand)
            };
            if self.a.is_zero() {
                surd
            } else if self.b.is_negative() {
                format!("{}{}", self.a, surd)
            } else {
                format!("{}+{}", self.a, surd)
            }
        };
        if self.c.is_one() {
            write!(f, "{numer}")
        } else if self.a.is_zero() || self.is_rational() {
            write!(f, "{numer}/{}", self.c)
        } else {
            write!(f, "({numer})/{}", self.c)
        }
    }
}

impl Serialize for QuadraticIrrational {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("QuadraticIrrational", 6)?;
        st.serialize_field("a", &self.a.to_string())?;
        st.serialize_field("b", &self.b.to_string())?;
        st.serialize_field("c", &self.c.to_string())?;
        st.serialize_field("D", &self.radicand.to_string())?;
        st.serialize_field("text", &self.to_string())?;
        st.serialize_field("decimal", &self.to_f64())?;
        st.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: i64, b: i64, d: i64, c: i64) -> QuadraticIrrational {
        QuadraticIrrational::new(a.into(), b.into(), d.into(), c.into()).unwrap()
    }

    #[test]
    fn golden_ratio_square_and_reciprocal() {
        let lambda = q(3, 1, 5, 2);
        let inv = lambda.recip().unwrap();
        assert_eq!(inv, q(3, -1, 5, 2));
        assert_eq!(&lambda + &inv, QuadraticIrrational::from_integer(3.into()));
        assert_eq!(lambda.to_string(), "(3+√5)/2");
    }

    #[test]
    fn square_factors_are_extracted() {
        let x = q(0, 1, 12, 1);
        assert_eq!(x.radicand(), &BigInt::from(3));
        assert_eq!(x.surd_coefficient(), &BigInt::from(2));
        assert!(q(1, 1, 49, 1).is_rational());
        assert_eq!(q(1, 1, 49, 1), QuadraticIrrational::from_integer(8.into()));
    }

    #[test]
    fn mixed_radicand_alignment() {
        // √2 and √8 = 2√2 share a field even if written differently.
        let x = QuadraticIrrational {
            a: 0.into(),
            b: 1.into(),
            c: 1.into(),
            radicand: 2.into(),
        };
        let y = QuadraticIrrational {
            a: 0.into(),
            b: 1.into(),
            c: 1.into(),
            radicand: 8.into(),
        };
        assert_eq!(&y - &x, x);
        assert!(x.checked_add(&q(0, 1, 3, 1)).is_err());
    }

    #[test]
    fn floor_and_sign_are_exact() {
        assert_eq!(q(1, 1, 5, 2).floor(), BigInt::from(1));
        assert_eq!(q(1, -1, 5, 2).floor(), BigInt::from(-1));
        assert_eq!(q(0, -1, 2, 1).floor(), BigInt::from(-2));
        assert_eq!(q(0, -1, 2, 1).ceil(), BigInt::from(-1));
        assert_eq!(q(-7, 3, 5, 1).signum(), -1);
        assert_eq!(q(-6, 3, 5, 1).signum(), 1);
        assert_eq!(q(7, 2, 11, 1).floor(), BigInt::from(13));
    }

    #[test]
    fn zero_denominator_rejected() {
        assert!(QuadraticIrrational::new(1.into(), 1.into(), 5.into(), 0.into()).is_err());
        assert!(QuadraticIrrational::new(1.into(), 1.into(), (-5).into(), 1.into()).is_err());
    }

    #[test]
    fn huge_values_render() {
        let big = BigInt::from(10).pow(400);
        let x = QuadraticIrrational::new(big.clone(), &big + 1, 5.into(), big * 2).unwrap();
        assert_eq!(x.denominator().bits(), BigInt::from(10).pow(400).bits() + 1);
        assert!((x.to_f64() - (1.0 + 5f64.sqrt()) / 2.0).abs() < 1e-12);
    }
}
