//! Ping-pong on the projective line `ℝP¹ = ℝ ∪ {∞}`.
//!
//! A slope `p/q` is the point `p/q`, and a matrix acts by Möbius
//! transformation. Determinant-1 maps preserve the cyclic order, so the image
//! of the arc from `s` to `e` is the arc from `g(s)` to `g(e)`. All endpoints
//! are rational and every comparison is exact.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use crate::error::{McgError, Result};
use crate::exact::f64_to_rational;
use crate::farey_model::{classify, hyperbolic_fixed_points, MappingClass, QuadraticIrrational};
use crate::free_cert::{
    CertificateKind, CertificateParameters, ChainStep, FreeCertificate, ProjectivePingPongEvidence,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProjPoint {
    Finite(BigRational),
    Infinity,
}

impl ProjPoint {
    pub fn image(&self, m: &MappingClass) -> ProjPoint {
        let [a, b, c, d] = m.entries();
        match self {
            ProjPoint::Infinity => {
                if c.is_zero() {
                    ProjPoint::Infinity
                } else {
                    ProjPoint::Finite(BigRational::new(a.clone(), c.clone()))
                }
            }
            ProjPoint::Finite(x) => {
                let num = x * BigRational::from_integer(a.clone()) + BigRational::from_integer(b.clone());
                let den = x * BigRational::from_integer(c.clone()) + BigRational::from_integer(d.clone());
                if den.is_zero() {
                    ProjPoint::Infinity
                } else {
                    ProjPoint::Finite(num / den)
                }
            }
        }
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProjPoint::Finite(x) => write!(f, "{x}"),
            ProjPoint::Infinity => write!(f, "∞"),
        }
    }
}

impl Serialize for ProjPoint {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Closed arc traversed in the positive direction from `start` to `end`,
/// passing through `∞` when `start > end`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Arc {
    pub start: ProjPoint,
    pub end: ProjPoint,
}

/// Position of a point on the circle, for points that are either rational,
/// quadratic or infinite.
enum Pos<'a> {
    Rat(&'a BigRational),
    Quad(&'a QuadraticIrrational),
    Inf,
}

fn cmp_pos(x: &Pos<'_>, y: &BigRational) -> Ordering {
    match x {
        Pos::Rat(r) => (*r).cmp(y),
        Pos::Quad(q) => q.cmp_exact(&QuadraticIrrational::from_rational(y)),
        Pos::Inf => Ordering::Greater,
    }
}

impl Arc {
    pub fn new(start: ProjPoint, end: ProjPoint) -> Self {
        Arc { start, end }
    }

    fn contains_pos(&self, x: &Pos<'_>) -> bool {
        use ProjPoint::*;
        match (&self.start, &self.end) {
            (Infinity, Infinity) => matches!(x, Pos::Inf),
            (Infinity, Finite(e)) => matches!(x, Pos::Inf) || cmp_pos(x, e) != Ordering::Greater,
            (Finite(s), Infinity) => matches!(x, Pos::Inf) || cmp_pos(x, s) != Ordering::Less,
            (Finite(s), Finite(e)) => {
                if matches!(x, Pos::Inf) {
                    return s > e;
                }
                let after_start = cmp_pos(x, s) != Ordering::Less;
                let before_end = cmp_pos(x, e) != Ordering::Greater;
                if s <= e {
                    after_start && before_end
                } else {
                    after_start || before_end
                }
            }
        }
    }

    pub fn contains(&self, x: &ProjPoint) -> bool {
        match x {
            ProjPoint::Finite(r) => self.contains_pos(&Pos::Rat(r)),
            ProjPoint::Infinity => self.contains_pos(&Pos::Inf),
        }
    }

    pub fn contains_quadratic(&self, x: &QuadraticIrrational) -> bool {
        match x.to_rational() {
            Some(r) => self.contains_pos(&Pos::Rat(&r)),
            None => self.contains_pos(&Pos::Quad(x)),
        }
    }

    /// Closure of the complement.
    pub fn complement(&self) -> Arc {
        Arc::new(self.end.clone(), self.start.clone())
    }

    pub fn image(&self, m: &MappingClass) -> Arc {
        Arc::new(self.start.image(m), self.end.image(m))
    }

    /// `self ⊆ other`, assuming neither arc is the whole circle.
    pub fn is_subset_of(&self, other: &Arc) -> bool {
        other.contains(&self.start)
            && Arc::new(self.start.clone(), other.end.clone()).contains(&self.end)
    }

    pub fn is_disjoint_from(&self, other: &Arc) -> bool {
        !self.contains(&other.start) && !other.contains(&self.start)
    }
}

impl fmt::Display for Arc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.start, self.end)
    }
}

/// `floor(x · 2^k) / 2^k`.
fn dyadic_floor(x: &QuadraticIrrational, k: u32) -> BigRational {
    let scale = BigInt::one() << k;
    let scaled = x
        .checked_mul(&QuadraticIrrational::from_integer(scale.clone()))
        .expect("integer factor");
    BigRational::new(scaled.floor(), scale)
}

/// Rational arc around `x` reaching at least `r` to each side.
fn arc_around(x: &QuadraticIrrational, r: &BigRational, k: u32) -> Arc {
    let lo = dyadic_floor(x, k);
    let step = BigRational::new(BigInt::one(), BigInt::one() << k);
    Arc::new(
        ProjPoint::Finite(&lo - r),
        ProjPoint::Finite(lo + step + r),
    )
}

#[derive(Clone, Copy, Debug)]
enum Construction {
    Symmetric,
    FromRepelling,
    FromAttracting,
}

const CONSTRUCTIONS: [Construction; 3] = [
    Construction::FromRepelling,
    Construction::FromAttracting,
    Construction::Symmetric,
];

struct Hyperbolic<'a> {
    m: &'a MappingClass,
    attracting: QuadraticIrrational,
    repelling: QuadraticIrrational,
}

impl Hyperbolic<'_> {
    /// `(U₊, U₋)` for the given construction.
    fn arcs(&self, c: Construction, r: &BigRational, k: u32) -> (Arc, Arc) {
        match c {
            Construction::Symmetric => (
                arc_around(&self.attracting, r, k),
                arc_around(&self.repelling, r, k),
            ),
            Construction::FromRepelling => {
                let minus = arc_around(&self.repelling, r, k);
                (minus.complement().image(self.m), minus)
            }
            Construction::FromAttracting => {
                let plus = arc_around(&self.attracting, r, k);
                let minus = plus.complement().image(&self.m.inverse());
                (plus, minus)
            }
        }
    }
}

fn hyperbolic(name: &str, m: &MappingClass) -> Result<(QuadraticIrrational, QuadraticIrrational)> {
    let kind = classify(m);
    if !kind.is_pseudo_anosov() {
        return Err(McgError::NotPseudoAnosov(format!("{name} = {m} is {}", kind.name())));
    }
    Ok(hyperbolic_fixed_points(m).expect("hyperbolic"))
}

/// Verifies every ping-pong condition for the four arcs and returns the
/// checks in order.
fn check_arcs(
    g: &Hyperbolic<'_>,
    h: &Hyperbolic<'_>,
    g_arcs: &(Arc, Arc),
    h_arcs: &(Arc, Arc),
) -> Vec<ChainStep> {
    let mut checks = Vec::new();
    let named = [
        ("U_a+", &g_arcs.0),
        ("U_a-", &g_arcs.1),
        ("U_b+", &h_arcs.0),
        ("U_b-", &h_arcs.1),
    ];
    for (i, (n1, a1)) in named.iter().enumerate() {
        for (n2, a2) in named.iter().skip(i + 1) {
            checks.push(ChainStep::new(
                format!("{n1} ∩ {n2} = ∅"),
                a1,
                a2,
                a1.is_disjoint_from(a2),
            ));
        }
    }
    for (name, gen, (plus, minus)) in [("a", g, g_arcs), ("b", h, h_arcs)] {
        let forward = minus.complement().image(gen.m);
        checks.push(ChainStep::new(
            format!("{name}(closure of complement of U_{name}-) ⊆ U_{name}+"),
            &forward,
            plus,
            forward.is_subset_of(plus),
        ));
        let backward = plus.complement().image(&gen.m.inverse());
        checks.push(ChainStep::new(
            format!("{name}⁻¹(closure of complement of U_{name}+) ⊆ U_{name}-"),
            &backward,
            minus,
            backward.is_subset_of(minus),
        ));
        checks.push(ChainStep::new(
            format!("attracting point of {name} in U_{name}+"),
            &gen.attracting,
            plus,
            plus.contains_quadratic(&gen.attracting),
        ));
        checks.push(ChainStep::new(
            format!("repelling point of {name} in U_{name}-"),
            &gen.repelling,
            minus,
            minus.contains_quadratic(&gen.repelling),
        ));
    }
    checks
}

/// Number of halvings of the initial radius tried before giving up.
pub const PRECISION_LADDER: std::ops::RangeInclusive<u32> = 2..=60;

/// Certifies `⟨a, b⟩ ≅ F₂` for pseudo-Anosov `a`, `b` by exhibiting four
/// pairwise disjoint rational arcs `U_a±`, `U_b±` around the fixed points with
/// `a(ℝP¹ ∖ int U_a-) ⊆ U_a+` and `a⁻¹(ℝP¹ ∖ int U_a+) ⊆ U_a-`, and likewise
/// for `b`. Then `a^k` maps `U_b+ ∪ U_b-` into `U_a+ ∪ U_a-` for every
/// `k ≠ 0`, and symmetrically.
pub fn projective_pingpong_cert(a: &MappingClass, b: &MappingClass) -> Result<FreeCertificate> {
    let (ga, gr) = hyperbolic("a", a)?;
    let (ha, hr) = hyperbolic("b", b)?;
    let points = [&ga, &gr, &ha, &hr];
    for (i, x) in points.iter().enumerate() {
        for y in points.iter().skip(i + 1) {
            if x == y {
                return Err(McgError::CertificationFailed(format!(
                    "a and b share the fixed point {x}"
                )));
            }
        }
    }
    let approx: Vec<f64> = points.iter().map(|x| x.to_f64()).collect();
    let mut gap = f64::INFINITY;
    for (i, x) in approx.iter().enumerate() {
        for y in approx.iter().skip(i + 1) {
            gap = gap.min((x - y).abs());
        }
    }
    if !(gap.is_finite() && gap > 0.0) {
        return Err(McgError::CertificationFailed(
            "fixed points are not separated in double precision".into(),
        ));
    }
    let base = f64_to_rational(gap);
    let gap_bits = (-gap.log2()).ceil().max(0.0) as u32;

    let g = Hyperbolic { m: a, attracting: ga, repelling: gr };
    let h = Hyperbolic { m: b, attracting: ha, repelling: hr };
    for j in PRECISION_LADDER {
        let r = &base / BigRational::from_integer(BigInt::one() << j);
        let k = j + gap_bits + 4;
        for cg in CONSTRUCTIONS {
            let g_arcs = g.arcs(cg, &r, k);
            for ch in CONSTRUCTIONS {
                let h_arcs = h.arcs(ch, &r, k);
                let checks = check_arcs(&g, &h, &g_arcs, &h_arcs);
                if checks.iter().all(|c| c.holds) {
                    return Ok(FreeCertificate {
                        kind: CertificateKind::ProjectivePingpong,
                        generators: [a.clone(), b.clone()],
                        parameters: CertificateParameters::Projective(ProjectivePingPongEvidence {
                            a_attracting: g_arcs.0,
                            a_repelling: g_arcs.1,
                            b_attracting: h_arcs.0,
                            b_repelling: h_arcs.1,
                            checks,
                        }),
                        oracle_cross_check_depth: None,
                    });
                }
            }
        }
    }
    Err(McgError::CertificationFailed(format!(
        "no disjoint rational neighbourhoods found down to radius gap·2^-{}",
        PRECISION_LADDER.end()
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> ProjPoint {
        ProjPoint::Finite(BigRational::new(n.into(), d.into()))
    }

    #[test]
    fn arcs_through_infinity() {
        let wrap = Arc::new(q(3, 1), q(-3, 1));
        assert!(wrap.contains(&ProjPoint::Infinity));
        assert!(wrap.contains(&q(5, 1)));
        assert!(!wrap.contains(&q(0, 1)));
        assert!(Arc::new(q(4, 1), q(-4, 1)).is_subset_of(&wrap));
        assert!(!Arc::new(q(-4, 1), q(4, 1)).is_subset_of(&wrap));
        assert!(Arc::new(q(-1, 1), q(1, 1)).is_disjoint_from(&wrap));
        assert!(!Arc::new(q(-1, 1), q(4, 1)).is_disjoint_from(&wrap));
    }

    #[test]
    fn image_of_an_arc_follows_the_endpoints() {
        let t = MappingClass::from_rows([[1, 1], [0, 1]]);
        let arc = Arc::new(q(0, 1), q(1, 1));
        assert_eq!(arc.image(&t), Arc::new(q(1, 1), q(2, 1)));
        let s = MappingClass::from_rows([[0, -1], [1, 0]]);
        assert_eq!(Arc::new(q(0, 1), ProjPoint::Infinity).image(&s), Arc::new(ProjPoint::Infinity, q(0, 1)));
    }

    #[test]
    fn identical_axes_fail() {
        let m = MappingClass::from_rows([[2, 1], [1, 1]]);
        assert!(matches!(
            projective_pingpong_cert(&m, &m.inverse()),
            Err(McgError::CertificationFailed(_))
        ));
    }

    #[test]
    fn separated_conjugates_certify() {
        let m = MappingClass::from_rows([[2, 1], [1, 1]]);
        let c = MappingClass::from_rows([[1, 3], [0, 1]]);
        let a = m.pow(3);
        let b = &(&c * &a) * &c.inverse();
        let cert = projective_pingpong_cert(&a, &b).unwrap();
        assert_eq!(cert.kind, CertificateKind::ProjectivePingpong);
        match cert.parameters {
            CertificateParameters::Projective(ev) => assert!(ev.checks.iter().all(|c| c.holds)),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn twists_are_rejected() {
        let t = MappingClass::from_rows([[1, 4], [0, 1]]);
        let m = MappingClass::from_rows([[2, 1], [1, 1]]);
        assert!(matches!(projective_pingpong_cert(&t, &m), Err(McgError::NotPseudoAnosov(_))));
    }
}
