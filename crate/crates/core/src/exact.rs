//! Structural JSON forms for exact numbers and a few floating-point helpers
//! for rendering them.
//!
//! Exact values never travel as JSON floats. Rationals become
//! `{"num": "...", "den": "...", "decimal": ...}` with integers as decimal
//! strings, so arbitrarily large values survive a round trip through any JSON
//! reader.

use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

/// Natural logarithm of a positive big integer, accurate to f64 precision
/// even when the integer is far outside the f64 range.
pub fn ln_biguint(x: &BigUint) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().map(f64::ln).unwrap_or(f64::INFINITY);
    }
    let shift = bits - 64;
    let top = (x >> shift).to_f64().unwrap_or(f64::INFINITY);
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

pub fn ln_bigint_abs(x: &BigInt) -> f64 {
    ln_biguint(x.magnitude())
}

/// Decimal value of a rational, robust to huge numerators and denominators.
pub fn rational_to_f64(r: &BigRational) -> f64 {
    if r.is_zero() {
        return 0.0;
    }
    if let (Some(n), Some(d)) = (r.numer().to_f64(), r.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && d != 0.0 {
            return n / d;
        }
    }
    let ln = ln_bigint_abs(r.numer()) - ln_bigint_abs(r.denom());
    let v = ln.exp();
    if r.is_negative() {
        -v
    } else {
        v
    }
}

/// Natural logarithm of a positive rational.
pub fn ln_rational(r: &BigRational) -> f64 {
    ln_bigint_abs(r.numer()) - ln_bigint_abs(r.denom())
}

/// Exact rational equal to a finite f64 (every finite double is dyadic).
pub fn f64_to_rational(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite float")
}

/// Serialize wrapper for [`BigRational`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactRational(pub BigRational);

impl Serialize for ExactRational {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("ExactRational", 3)?;
        st.serialize_field("num", &self.0.numer().to_string())?;
        st.serialize_field("den", &self.0.denom().to_string())?;
        st.serialize_field("decimal", &rational_to_f64(&self.0))?;
        st.end()
    }
}

impl From<BigRational> for ExactRational {
    fn from(r: BigRational) -> Self {
        ExactRational(r)
    }
}

/// Serializes a big integer as a decimal string.
pub fn serialize_bigint<S: Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

pub fn serialize_rational<S: Serializer>(x: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    ExactRational(x.clone()).serialize(s)
}

pub fn serialize_optional_rational<S: Serializer>(
    x: &Option<BigRational>,
    s: S,
) -> Result<S::Ok, S::Error> {
    x.clone().map(ExactRational).serialize(s)
}

pub fn serialize_rationals<S: Serializer>(xs: &[BigRational], s: S) -> Result<S::Ok, S::Error> {
    let v: Vec<ExactRational> = xs.iter().cloned().map(ExactRational).collect();
    v.serialize(s)
}

pub(crate) fn sign_of(x: &BigInt) -> i8 {
    match x.sign() {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}
