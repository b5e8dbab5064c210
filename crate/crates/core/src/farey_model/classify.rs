use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::mapping_class::MappingClass;
use super::quadratic::QuadraticIrrational;
use super::slope::Slope;
use crate::error::{McgError, Result};
use crate::exact::serialize_bigint;

/// Nielsen–Thurston type of a mapping class of the once-punctured torus,
/// read off from the trace.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ClassificationResult {
    /// `±I`: acts trivially on every curve.
    Identity { negated: bool },
    FiniteOrder {
        #[serde(serialize_with = "serialize_bigint")]
        trace: BigInt,
    },
    /// `M = ±T_axis^power`. The axis is the canonical reducing system.
    DehnTwist {
        axis: Slope,
        #[serde(serialize_with = "serialize_bigint")]
        power: BigInt,
        negated: bool,
    },
    PseudoAnosov { dilatation: QuadraticIrrational },
}

impl ClassificationResult {
    pub fn is_pseudo_anosov(&self) -> bool {
        matches!(self, ClassificationResult::PseudoAnosov { .. })
    }

    pub fn is_dehn_twist(&self) -> bool {
        matches!(self, ClassificationResult::DehnTwist { .. })
    }

    pub fn name(&self) -> &'static str {
        match self {
            ClassificationResult::Identity { .. } => "identity",
            ClassificationResult::FiniteOrder { .. } => "finite_order",
            ClassificationResult::DehnTwist { .. } => "dehn_twist",
            ClassificationResult::PseudoAnosov { .. } => "pseudo_anosov",
        }
    }
}

/// Trace trichotomy: `|t| < 2` finite order, `|t| = 2` twist, `|t| > 2`
/// pseudo-Anosov.
pub fn classify(m: &MappingClass) -> ClassificationResult {
    if m.is_central() {
        return ClassificationResult::Identity {
            negated: !m.is_identity(),
        };
    }
    let t = m.trace();
    let two = BigInt::from(2);
    let abs_t = t.abs();
    if abs_t < two {
        ClassificationResult::FiniteOrder { trace: t }
    } else if abs_t == two {
        let negated = t.is_negative();
        let unipotent = if negated { m.negated() } else { m.clone() };
        let (axis, power) = twist_decomposition(&unipotent);
        ClassificationResult::DehnTwist {
            axis,
            power,
            negated,
        }
    } else {
        ClassificationResult::PseudoAnosov {
            dilatation: dilatation(&t),
        }
    }
}

/// `(|t| + √(t² − 4)) / 2`.
fn dilatation(t: &BigInt) -> QuadraticIrrational {
    let disc: BigInt = t * t - 4;
    QuadraticIrrational::new(t.abs(), BigInt::one(), disc, BigInt::from(2))
        .expect("positive denominator")
}

/// For a unipotent `U = I + n·N_axis ≠ I`, recovers `(axis, n)`.
fn twist_decomposition(u: &MappingClass) -> (Slope, BigInt) {
    let [a, b, c, d] = u.entries();
    // The fixed line is the kernel of U − I: (a − 1) p + b q = 0.
    let (p, q) = if !b.is_zero() || !(a - 1u32).is_zero() {
        (b.clone(), BigInt::one() - a)
    } else {
        (BigInt::one() - d, c.clone())
    };
    let g = p.gcd(&q);
    let axis = Slope::normalized(p / &g, q / &g);
    let power = if !axis.p().is_zero() {
        b / (axis.p() * axis.p())
    } else {
        -(c / (axis.q() * axis.q()))
    };
    (axis, power)
}

/// `I + n·[[−pq, p²], [−q², pq]]`: the `n`-th power of the twist about `axis`.
pub fn twist_matrix(axis: &Slope, n: impl Into<BigInt>) -> Result<MappingClass> {
    let n = n.into();
    if n.is_zero() {
        return Err(McgError::ZeroTwistPower);
    }
    let (p, q) = (axis.p(), axis.q());
    let pq = p * q;
    Ok(MappingClass::from_entries_unchecked(
        BigInt::one() - &n * &pq,
        &n * p * p,
        -(&n * q * q),
        BigInt::one() + &n * &pq,
    ))
}

/// Membership in the level-3 congruence subgroup: `M ≡ I (mod 3)`.
pub fn is_pure(m: &MappingClass) -> bool {
    m.mod3() == [1, 0, 0, 1]
}

/// Attracting and repelling fixed points of a hyperbolic matrix on the
/// projective line, where slope `p/q` is the point `p/q`.
pub fn hyperbolic_fixed_points(
    m: &MappingClass,
) -> Option<(QuadraticIrrational, QuadraticIrrational)> {
    let t = m.trace();
    if t.abs() <= BigInt::from(2) {
        return None;
    }
    let [a, _, c, d] = m.entries();
    let disc: BigInt = &t * &t - 4;
    let two_c: BigInt = c * BigInt::from(2);
    let plus = QuadraticIrrational::new(a - d, BigInt::one(), disc.clone(), two_c.clone())
        .expect("c nonzero for hyperbolic");
    let minus = QuadraticIrrational::new(a - d, -BigInt::one(), disc, two_c)
        .expect("c nonzero for hyperbolic");
    // Eigenvalue at the fixed point x is c·x + d; the attracting point carries
    // the eigenvalue of larger modulus, which has the sign of the trace.
    if t.is_positive() {
        Some((plus, minus))
    } else {
        Some((minus, plus))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sl(p: i64, q: i64) -> Slope {
        Slope::new(p, q).unwrap()
    }

    #[test]
    fn classify_examples() {
        let t = MappingClass::from_rows([[1, 1], [0, 1]]);
        assert_eq!(
            classify(&t),
            ClassificationResult::DehnTwist {
                axis: sl(1, 0),
                power: 1.into(),
                negated: false
            }
        );
        let m = MappingClass::from_rows([[2, 1], [1, 1]]);
        match classify(&m) {
            ClassificationResult::PseudoAnosov { dilatation } => {
                assert_eq!(dilatation.to_string(), "(3+√5)/2");
                // Root of x² − 3x + 1.
                let x2 = &dilatation * &dilatation;
                let three_x = &QuadraticIrrational::from_integer(3.into()) * &dilatation;
                let val = &(&x2 - &three_x) + &QuadraticIrrational::from_integer(1.into());
                assert!(val.is_zero());
            }
            other => panic!("unexpected {other:?}"),
        }
        let s = MappingClass::from_rows([[0, -1], [1, 0]]);
        assert_eq!(classify(&s).name(), "finite_order");
        assert_eq!(
            classify(&MappingClass::identity().negated()),
            ClassificationResult::Identity { negated: true }
        );
    }

    #[test]
    fn negative_trace_twist() {
        let m = twist_matrix(&sl(2, 3), 5).unwrap().negated();
        assert_eq!(
            classify(&m),
            ClassificationResult::DehnTwist {
                axis: sl(2, 3),
                power: 5.into(),
                negated: true
            }
        );
    }

    #[test]
    fn twist_matrix_examples() {
        assert_eq!(
            twist_matrix(&sl(1, 0), 4).unwrap(),
            MappingClass::from_rows([[1, 4], [0, 1]])
        );
        assert_eq!(
            twist_matrix(&sl(0, 1), 4).unwrap(),
            MappingClass::from_rows([[1, 0], [-4, 1]])
        );
        let t = twist_matrix(&sl(1, 1), 1).unwrap();
        assert_eq!(t, MappingClass::from_rows([[0, 1], [-1, 2]]));
        assert!(t.determinant().is_one());
        assert_eq!(t.apply(&sl(1, 1)), sl(1, 1));
        assert_eq!(twist_matrix(&sl(1, 1), 0), Err(McgError::ZeroTwistPower));
    }

    #[test]
    fn purity_examples() {
        assert!(is_pure(&MappingClass::identity()));
        assert!(is_pure(&MappingClass::from_rows([[1, 3], [0, 1]])));
        assert!(!is_pure(&MappingClass::from_rows([[1, 1], [0, 1]])));
    }

    #[test]
    fn fixed_points_are_fixed() {
        let m = MappingClass::from_rows([[2, 1], [1, 1]]);
        let (att, rep) = hyperbolic_fixed_points(&m).unwrap();
        assert_eq!(att.to_string(), "(1+√5)/2");
        assert_eq!(rep.to_string(), "(1-√5)/2");
        let neg = m.negated();
        let (att2, _) = hyperbolic_fixed_points(&neg).unwrap();
        assert_eq!(att2, att);
    }
}
