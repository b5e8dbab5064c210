//! Arithmetic skeleton of the relative pseudo-Anosov ping-pong.
//!
//! Subsurface projections are not computed. They enter as parameters: a
//! translation constant `c`, a Behrstock hypothesis threshold `D_in` and a
//! conclusion bound `D_out`. The engine checks that the inequalities of the
//! argument close up with exact rationals.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{McgError, Result};
use crate::exact::{serialize_bigint, serialize_rational};
use crate::free_cert::ChainStep;

/// Additive constant in `i(u,v) ≤ a + 4·i(a_u, a_v)`.
pub const FACT3_ADDITIVE: i64 = 2;

/// Arcs needed to force a segment inside the other subsurface.
pub const ARCS_NEEDED: i64 = 3;

/// Bound delivered by Behrstock's conclusion.
pub const BEHRSTOCK_CONCLUSION: i64 = 4;

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Fact2Bound {
    pub d: u64,
    #[serde(serialize_with = "serialize_bigint")]
    pub value: BigInt,
    pub exponent: u64,
    /// Set when `d` is odd and the exponent `(d−2)/2` was rounded down.
    pub floored: bool,
}

/// `2^{(d−2)/2}`, with the exponent floored for odd `d`.
pub fn fact2_lower(d: u64) -> Result<Fact2Bound> {
    if d < 2 {
        return Err(McgError::InvalidParameter("d must be at least 2".into()));
    }
    let exponent = (d - 2) / 2;
    Ok(Fact2Bound {
        d,
        value: BigInt::one() << exponent,
        exponent,
        floored: d % 2 == 1,
    })
}

/// `(i − a)/4`: arcs forced by intersection number `i`, additive constant `a`.
pub fn fact3_arcs_lower_with(iuv: &BigInt, additive: i64) -> BigRational {
    BigRational::new(iuv - additive, BigInt::from(4))
}

/// `(i − 2)/4`.
pub fn fact3_arcs_lower(iuv: &BigInt) -> Result<BigRational> {
    if iuv.is_negative() {
        return Err(McgError::InvalidParameter("intersection number is negative".into()));
    }
    Ok(fact3_arcs_lower_with(iuv, FACT3_ADDITIVE))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BehrstockReport {
    pub d_in: u64,
    #[serde(serialize_with = "serialize_bigint")]
    pub iuv_min: BigInt,
    pub iuv_floored: bool,
    #[serde(serialize_with = "serialize_rational")]
    pub arcs_min: BigRational,
    pub implies_d_out_4: bool,
}

pub fn behrstock_threshold_check(d_in: u64) -> Result<BehrstockReport> {
    behrstock_threshold_check_with(d_in, FACT3_ADDITIVE)
}

/// Behrstock chain with a configurable additive constant in the arc bound.
pub fn behrstock_threshold_check_with(d_in: u64, additive: i64) -> Result<BehrstockReport> {
    let f2 = fact2_lower(d_in)?;
    let arcs = fact3_arcs_lower_with(&f2.value, additive);
    Ok(BehrstockReport {
        d_in,
        implies_d_out_4: arcs >= rat(ARCS_NEEDED),
        iuv_min: f2.value,
        iuv_floored: f2.floored,
        arcs_min: arcs,
    })
}

/// `max({14/c} ∪ {2})`.
pub fn p1_constant(c_values: &[BigRational]) -> Result<BigRational> {
    if c_values.is_empty() {
        return Err(McgError::InvalidParameter("need at least one c".into()));
    }
    let mut best = rat(2);
    for c in c_values {
        if !c.is_positive() {
            return Err(McgError::InvalidParameter(format!("c = {c} must be positive")));
        }
        let v = rat(14) / c;
        if v > best {
            best = v;
        }
    }
    Ok(best)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProjectionParams {
    #[serde(serialize_with = "serialize_rational")]
    pub c: BigRational,
    pub d_in: u64,
    pub d_out: u64,
}

impl ProjectionParams {
    pub fn new(c: BigRational, d_in: u64, d_out: u64) -> Result<Self> {
        if !c.is_positive() {
            return Err(McgError::InvalidParameter(format!("c = {c} must be positive")));
        }
        if d_in <= d_out {
            return Err(McgError::InvalidParameter(format!(
                "need D_in > D_out, got {d_in} and {d_out}"
            )));
        }
        Ok(ProjectionParams { c, d_in, d_out })
    }

    /// `(c, 10, 4)`.
    pub fn standard(c: BigRational) -> Self {
        ProjectionParams { c, d_in: 10, d_out: 4 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConstantChain {
    pub params: ProjectionParams,
    pub p: u64,
    pub m: i64,
    pub steps: Vec<ChainStep>,
    pub accepted: bool,
    /// Index of the first failing step.
    pub first_failure: Option<usize>,
}

/// Verifies, in order:
/// (i) `D_in` passes the Behrstock check and `D_out` is at least the
///     conclusion bound 4;
/// (ii) translation `c·p·|m| ≥ D_in + D_out`;
/// (iii) triangle `c·p·|m| − D_out ≥ D_in`.
pub fn chain_verify(params: &ProjectionParams, p: u64, m: i64) -> Result<ConstantChain> {
    if m == 0 || p == 0 {
        return Err(McgError::InvalidParameter("need p ≥ 1 and m ≠ 0".into()));
    }
    let behrstock = behrstock_threshold_check(params.d_in)?;
    let translation = &params.c * rat(i64::try_from(p).expect("p fits")) * rat(m.abs());
    let d_in = rat(params.d_in as i64);
    let d_out = rat(params.d_out as i64);
    let budget = &d_in + &d_out;
    let steps = vec![
        ChainStep::new(
            format!(
                "Behrstock: D_in = {} gives arcs ≥ {} ≥ 3, so the conclusion is ≤ 4 ≤ D_out",
                params.d_in, behrstock.arcs_min
            ),
            format!("arcs {} / D_out {}", behrstock.arcs_min, params.d_out),
            format!("arcs 3 / D_out {BEHRSTOCK_CONCLUSION}"),
            behrstock.implies_d_out_4 && params.d_out >= BEHRSTOCK_CONCLUSION as u64,
        ),
        ChainStep::new(
            "translation: c·p·|m| ≥ D_in + D_out",
            &translation,
            &budget,
            translation >= budget,
        ),
        ChainStep::new(
            "triangle: c·p·|m| − D_out ≥ D_in",
            &translation - &d_out,
            &d_in,
            &translation - &d_out >= d_in,
        ),
    ];
    let first_failure = steps.iter().position(|s| !s.holds);
    Ok(ConstantChain {
        params: params.clone(),
        p,
        m,
        accepted: first_failure.is_none(),
        first_failure,
        steps,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ThresholdSearch {
    pub d_in_min: u64,
    pub d_out: u64,
    pub sum_min: u64,
    pub scanned: Vec<BehrstockReport>,
    pub fact3_additive: i64,
}

pub fn threshold_search() -> Result<ThresholdSearch> {
    threshold_search_with(FACT3_ADDITIVE, 100)
}

/// Scans `D_in = 2..=cap` for the first threshold passing the Behrstock
/// check; the translation budget is then `D_in + 4`.
pub fn threshold_search_with(additive: i64, cap: u64) -> Result<ThresholdSearch> {
    let mut scanned = Vec::new();
    for d in 2..=cap {
        let report = behrstock_threshold_check_with(d, additive)?;
        let ok = report.implies_d_out_4;
        scanned.push(report);
        if ok {
            let d_out = BEHRSTOCK_CONCLUSION as u64;
            return Ok(ThresholdSearch {
                d_in_min: d,
                d_out,
                sum_min: d + d_out,
                scanned,
                fact3_additive: additive,
            });
        }
    }
    Err(McgError::CertificationFailed(format!(
        "no threshold up to D_in = {cap}"
    )))
}

/// Which pair is free, by how the components of the two reducing systems
/// overlap.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OverlapCase {
    /// Every component of each system overlaps the other: `⟨a^k, b^k⟩`.
    Case1,
    /// Some component of `A` fails to overlap `B`: `⟨a^k, b^k a^k b^{−k}⟩`.
    Case2,
    /// Symmetric to case 2: `⟨b^k, a^k b^k a^{−k}⟩`.
    Case3,
}

/// Abstract overlap data: whether some component of one system is nested
/// in or disjoint from the other system.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct OverlapConfig {
    pub a_has_non_overlapping: bool,
    pub b_has_non_overlapping: bool,
}

impl OverlapConfig {
    pub fn case(self) -> OverlapCase {
        match (self.a_has_non_overlapping, self.b_has_non_overlapping) {
            (false, false) => OverlapCase::Case1,
            (true, _) => OverlapCase::Case2,
            (false, true) => OverlapCase::Case3,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DispatchEntry {
    pub config: OverlapConfig,
    pub case: OverlapCase,
    pub free_pair: &'static str,
    pub chain: ConstantChain,
}

impl OverlapCase {
    pub fn free_pair(self) -> &'static str {
        match self {
            OverlapCase::Case1 => "⟨a^k, b^k⟩",
            OverlapCase::Case2 => "⟨a^k, b^k a^k b^{−k}⟩",
            OverlapCase::Case3 => "⟨b^k, a^k b^k a^{−k}⟩",
        }
    }
}

/// Selects the branch for `config` and checks its inequalities. Every branch
/// plays ping-pong between two relative pseudo-Anosovs with overlapping
/// supports, so each needs the same chain.
pub fn relpa_dispatch(config: OverlapConfig, params: &ProjectionParams, p: u64) -> Result<DispatchEntry> {
    let case = config.case();
    Ok(DispatchEntry {
        config,
        case,
        free_pair: case.free_pair(),
        chain: chain_verify(params, p, 1)?,
    })
}

/// All four overlap configurations with their branches.
pub fn relpa_dispatch_table(params: &ProjectionParams, p: u64) -> Result<Vec<DispatchEntry>> {
    let mut out = Vec::new();
    for a in [false, true] {
        for b in [false, true] {
            out.push(relpa_dispatch(
                OverlapConfig {
                    a_has_non_overlapping: a,
                    b_has_non_overlapping: b,
                },
                params,
                p,
            )?);
        }
    }
    Ok(out)
}

/// Bounds on a projection coordinate; `hi = None` is unbounded.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Interval {
    #[serde(serialize_with = "serialize_rational")]
    pub lo: BigRational,
    #[serde(serialize_with = "crate::exact::serialize_optional_rational")]
    pub hi: Option<BigRational>,
}

impl Interval {
    fn at_least(lo: BigRational) -> Self {
        Interval { lo, hi: None }
    }

    fn up_to(hi: BigRational) -> Self {
        Interval { lo: BigRational::zero(), hi: Some(hi) }
    }

    fn unknown() -> Self {
        Interval::at_least(BigRational::zero())
    }
}

/// `d_A(γ, ∂B)` and `d_B(γ, ∂A)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Token {
    pub d_a: Interval,
    pub d_b: Interval,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SimulationStep {
    pub generator: String,
    #[serde(serialize_with = "serialize_rational")]
    pub translation: BigRational,
    pub token: Token,
    pub in_x_a: bool,
    pub in_x_b: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SimulationTrace {
    pub passed: bool,
    pub steps: Vec<SimulationStep>,
    pub rejected_instances: usize,
}

/// Symbolic ping-pong on coordinate intervals.
///
/// `X_a` is `d_A(γ, ∂B) ≥ D_in` and `X_b` is `d_B(γ, ∂A) ≥ D_in`. A token in
/// `X_a` has `d_B ≤ D_out` by Behrstock. Applying `b^{pm}` moves `d_B` by a
/// sampled translation `t ≥ c·p·|m|`, so the triangle inequality gives
/// `d_B ≥ t − D_out`; if that reaches `D_in`, Behrstock caps `d_A` by
/// `D_out`. The orbit must alternate between `X_a` and `X_b`. Sampled
/// translations below `c·p·|m|` violate the translation axiom and are
/// rejected before use.
pub fn simulate_relpa_pingpong(
    params: &ProjectionParams,
    p: u64,
    trajectory_length: usize,
    seed: u64,
) -> Result<SimulationTrace> {
    let chain = chain_verify(params, p, 1)?;
    if !chain.accepted {
        return Err(McgError::HypothesisViolated(format!(
            "chain rejected at step {}",
            chain.first_failure.map_or(0, |i| i + 1)
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d_in = rat(params.d_in as i64);
    let d_out = rat(params.d_out as i64);
    let pi = i64::try_from(p).map_err(|_| McgError::InvalidParameter("p too large".into()))?;
    let mut token = Token {
        d_a: Interval::at_least(d_in.clone()),
        d_b: Interval::up_to(d_out.clone()),
    };
    let mut in_a = true;
    let mut steps = Vec::new();
    let mut rejected = 0;
    let mut passed = true;
    while steps.len() < trajectory_length {
        let m: i64 = loop {
            let m = rng.gen_range(-3i64..=3);
            if m != 0 {
                break m;
            }
        };
        let floor = &params.c * rat(pi * m.abs());
        let slack = BigRational::new(BigInt::from(rng.gen_range(-2..=8)), BigInt::from(4));
        let t = &floor + slack;
        if t < floor {
            rejected += 1;
            continue;
        }
        let moved = if in_a { &token.d_b } else { &token.d_a };
        let old_hi = moved.hi.clone().expect("Behrstock bound on the passive coordinate");
        let lo = (&t - old_hi).max(BigRational::zero());
        let raised = Interval::at_least(lo.clone());
        let capped = if lo >= d_in { Interval::up_to(d_out.clone()) } else { Interval::unknown() };
        let (name, next) = if in_a {
            (format!("b^{}", pi * m), Token { d_a: capped, d_b: raised })
        } else {
            (format!("a^{}", pi * m), Token { d_a: raised, d_b: capped })
        };
        let in_x_a = next.d_a.lo >= d_in;
        let in_x_b = next.d_b.lo >= d_in;
        let expected = if in_a { in_x_b && !in_x_a } else { in_x_a && !in_x_b };
        passed &= expected;
        token = next;
        in_a = !in_a;
        steps.push(SimulationStep {
            generator: name,
            translation: t,
            token: token.clone(),
            in_x_a,
            in_x_b,
        });
        if !expected {
            break;
        }
    }
    Ok(SimulationTrace {
        passed,
        steps,
        rejected_instances: rejected,
    })
}

/// Least integer `p > max{4, p₁, p₂}`, with `p₂` supplied by the caller.
pub fn main_lemma_power(p1: &BigRational, p2: u64) -> BigInt {
    let m = p1.clone().max(rat(4)).max(BigRational::from_integer(BigInt::from(p2)));
    m.floor().to_integer() + 1
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn fact_examples() {
        assert_eq!(fact2_lower(10).unwrap().value, 16.into());
        assert_eq!(fact2_lower(2).unwrap().value, 1.into());
        assert_eq!(fact2_lower(6).unwrap().value, 4.into());
        assert!(fact2_lower(9).unwrap().floored);
        assert_eq!(fact3_arcs_lower(&16.into()).unwrap(), q(7, 2));
        assert_eq!(fact3_arcs_lower(&2.into()).unwrap(), q(0, 1));
        assert_eq!(fact3_arcs_lower(&14.into()).unwrap(), q(3, 1));
    }

    #[test]
    fn behrstock_examples() {
        let r = behrstock_threshold_check(10).unwrap();
        assert_eq!((r.iuv_min.clone(), r.arcs_min.clone(), r.implies_d_out_4), (16.into(), q(7, 2), true));
        let r = behrstock_threshold_check(8).unwrap();
        assert_eq!((r.iuv_min.clone(), r.arcs_min.clone(), r.implies_d_out_4), (8.into(), q(3, 2), false));
        let r = behrstock_threshold_check(9).unwrap();
        assert_eq!((r.iuv_min.clone(), r.implies_d_out_4, r.iuv_floored), (8.into(), false, true));
    }

    #[test]
    fn p1_examples() {
        assert_eq!(p1_constant(&[q(1, 1)]).unwrap(), q(14, 1));
        assert_eq!(p1_constant(&[q(2, 1)]).unwrap(), q(7, 1));
        assert_eq!(p1_constant(&[q(10, 1), q(14, 1)]).unwrap(), q(2, 1));
        assert!(p1_constant(&[]).is_err());
    }

    #[test]
    fn chain_examples() {
        let one = ProjectionParams::standard(q(1, 1));
        assert!(chain_verify(&one, 14, 1).unwrap().accepted);
        let bad = chain_verify(&one, 13, 1).unwrap();
        assert_eq!(bad.first_failure, Some(1));
        assert_eq!(bad.steps[1].lhs, "13");
        assert!(chain_verify(&ProjectionParams::standard(q(1, 2)), 28, 1).unwrap().accepted);
    }

    #[test]
    fn search_examples() {
        let s = threshold_search().unwrap();
        assert_eq!((s.d_in_min, s.sum_min), (10, 14));
        assert_eq!(threshold_search_with(5, 100).unwrap().d_in_min, 12);
        assert_eq!(threshold_search_with(-4, 100).unwrap().d_in_min, 8);
    }

    #[test]
    fn simulation_examples() {
        let params = ProjectionParams::standard(q(1, 1));
        let trace = simulate_relpa_pingpong(&params, 14, 20, 3).unwrap();
        assert!(trace.passed);
        assert_eq!(trace.steps.len(), 20);
        assert!(simulate_relpa_pingpong(&params, 13, 20, 3).is_err());
        assert!(simulate_relpa_pingpong(&params, 14, 0, 3).unwrap().passed);
    }

    #[test]
    fn dispatch_covers_three_cases() {
        let params = ProjectionParams::standard(q(1, 1));
        let table = relpa_dispatch_table(&params, 14).unwrap();
        assert_eq!(table.len(), 4);
        assert!(table.iter().all(|e| e.chain.accepted));
        let cases: Vec<_> = table.iter().map(|e| e.case).collect();
        assert_eq!(cases, [OverlapCase::Case1, OverlapCase::Case3, OverlapCase::Case2, OverlapCase::Case2]);
    }

    #[test]
    fn main_lemma_power_is_strict() {
        assert_eq!(main_lemma_power(&q(14, 1), 0), 15.into());
        assert_eq!(main_lemma_power(&q(7, 2), 0), 5.into());
        assert_eq!(main_lemma_power(&q(2, 1), 20), 21.into());
        assert_eq!(main_lemma_power(&q(29, 2), 3), 15.into());
    }
}
