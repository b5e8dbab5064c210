//! Intersection numbers after Dehn twisting, and ping-pong for pairs of
//! twists.
//!
//! For disjoint curves `γ_j` and `T = Π T_{γ_j}^{e_j}`,
//!
//! ```text
//! i(T(δ), δ') ≥ Σ_j (|e_j| − 2) · i(δ, γ_j) · i(δ', γ_j) − i(δ, δ')
//! ```
//!
//! On the torus two distinct curves always intersect, so a multicurve is a
//! single slope and every twist word collapses to one axis with one total
//! power. The checker still evaluates the sum over the collapsed factors.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{McgError, Result};
use crate::exact::serialize_bigint;
use crate::farey_model::{twist_matrix, MappingClass, Slope};
use crate::free_cert::{
    CertificateKind, CertificateParameters, ChainStep, FreeCertificate, TwistPingPongEvidence,
};

/// Smallest twist power magnitude for which the twist ping-pong is proved.
pub const TWIST_PINGPONG_MIN_POWER: i64 = 4;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TwistFactor {
    pub axis: Slope,
    pub power: i64,
}

/// A product of twists about pairwise disjoint curves.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TwistWord {
    factors: Vec<TwistFactor>,
}

impl TwistWord {
    pub fn new(factors: Vec<TwistFactor>) -> Result<Self> {
        if factors.is_empty() {
            return Err(McgError::NotMulticurve("empty twist word".into()));
        }
        for f in &factors {
            if f.power == 0 {
                return Err(McgError::ZeroTwistPower);
            }
        }
        let axis = &factors[0].axis;
        if let Some(other) = factors.iter().find(|f| !f.axis.intersection(axis).is_zero()) {
            return Err(McgError::NotMulticurve(format!(
                "{} and {} intersect",
                axis, other.axis
            )));
        }
        let word = TwistWord { factors };
        if word.total_power() == 0 {
            return Err(McgError::ZeroTwistPower);
        }
        Ok(word)
    }

    pub fn single(axis: Slope, power: i64) -> Result<Self> {
        Self::new(vec![TwistFactor { axis, power }])
    }

    pub fn factors(&self) -> &[TwistFactor] {
        &self.factors
    }

    pub fn axis(&self) -> &Slope {
        &self.factors[0].axis
    }

    pub fn total_power(&self) -> i64 {
        self.factors.iter().map(|f| f.power).sum()
    }

    /// Distinct axes with summed powers; on the torus always one factor.
    pub fn collapsed(&self) -> Vec<TwistFactor> {
        vec![TwistFactor {
            axis: self.axis().clone(),
            power: self.total_power(),
        }]
    }

    /// `self^k`.
    pub fn power(&self, k: i64) -> Result<Self> {
        Self::single(self.axis().clone(), self.total_power() * k)
    }

    pub fn matrix(&self) -> MappingClass {
        twist_matrix(self.axis(), self.total_power()).expect("nonzero total power")
    }

    pub fn apply(&self, s: &Slope) -> Slope {
        self.matrix().apply(s)
    }
}

/// Whether to keep the `−2` correction. It may be dropped when all the
/// exponents share a sign, which after collapsing is always the case on the
/// torus.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum InequalityMode {
    #[default]
    Standard,
    SameSign,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TwistInequalityReport {
    #[serde(serialize_with = "serialize_bigint")]
    pub lhs: BigInt,
    #[serde(serialize_with = "serialize_bigint")]
    pub rhs: BigInt,
    pub holds: bool,
    pub mode: InequalityMode,
}

pub fn twist_inequality_check(
    t: &TwistWord,
    delta: &Slope,
    delta_prime: &Slope,
) -> TwistInequalityReport {
    twist_inequality_check_with(t, delta, delta_prime, InequalityMode::Standard)
}

pub fn twist_inequality_check_with(
    t: &TwistWord,
    delta: &Slope,
    delta_prime: &Slope,
    mode: InequalityMode,
) -> TwistInequalityReport {
    let lhs = t.apply(delta).intersection(delta_prime);
    let correction = match mode {
        InequalityMode::Standard => 2,
        InequalityMode::SameSign => 0,
    };
    let sum: BigInt = t
        .collapsed()
        .iter()
        .map(|f| {
            BigInt::from(f.power.unsigned_abs() as i128 - correction)
                * delta.intersection(&f.axis)
                * delta_prime.intersection(&f.axis)
        })
        .sum();
    let rhs = sum - delta.intersection(delta_prime);
    TwistInequalityReport {
        holds: lhs >= rhs,
        lhs,
        rhs,
        mode,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Membership {
    InXa,
    InXb,
    Neither,
}

/// `X_a` (closer to `α`) and `X_b` (closer to `β`), measured by intersection
/// number.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PingPongSets {
    pub alpha: Slope,
    pub beta: Slope,
}

impl PingPongSets {
    pub fn new(alpha: Slope, beta: Slope) -> Result<Self> {
        if alpha.intersection(&beta).is_zero() {
            return Err(McgError::NotIndependent(format!(
                "axes {alpha} and {beta} are disjoint, i(α,β) = 0"
            )));
        }
        Ok(PingPongSets { alpha, beta })
    }

    pub fn membership(&self, gamma: &Slope) -> Membership {
        let ia = gamma.intersection(&self.alpha);
        let ib = gamma.intersection(&self.beta);
        match ia.cmp(&ib) {
            std::cmp::Ordering::Less => Membership::InXa,
            std::cmp::Ordering::Greater => Membership::InXb,
            std::cmp::Ordering::Equal => Membership::Neither,
        }
    }
}

pub fn pingpong_membership(sets: &PingPongSets, gamma: &Slope) -> Membership {
    sets.membership(gamma)
}

/// All canonical slopes with `|p|, |q| ≤ bound`.
pub fn slope_box(bound: i64) -> Vec<Slope> {
    let mut out = Vec::new();
    for q in 0..=bound {
        for p in -bound..=bound {
            if p.gcd(&q) == 1 && (q > 0 || p == 1) {
                out.push(Slope::new(p, q).expect("coprime"));
            }
        }
    }
    out
}

/// Default sample exponents `±1, ±2, ±3`.
pub fn default_sample_powers() -> Vec<i64> {
    vec![1, -1, 2, -2, 3, -3]
}

/// Replays `i(x^k γ, home) > i(x^k γ, away)` for `γ` closer to `home` than to
/// the twisted axis `away`. Returns the failing link, if any.
fn replay_containment(
    x: &TwistWord,
    k: i64,
    gamma: &Slope,
    home: &Slope,
) -> Result<Option<String>> {
    let away = x.axis();
    let xk = x.power(k)?;
    let moved = xk.apply(gamma);
    let report = twist_inequality_check(&xk, gamma, home);
    if !report.holds {
        return Ok(Some(format!(
            "twist inequality failed at γ={gamma}, k={k}: {} < {}",
            report.lhs, report.rhs
        )));
    }
    let e = BigInt::from(xk.total_power().unsigned_abs());
    let i_ga = gamma.intersection(away);
    let i_home_away = home.intersection(away);
    // Σ(|e|−2) i(γ,away) i(home,away) − i(γ,home) > same sum − i(γ,away)
    let strict_drop = gamma.intersection(home) < i_ga;
    let coefficient: BigInt = (&e - 2) * &i_home_away - 1;
    let regrouped = &coefficient * &i_ga;
    let sum_minus_away = (&e - 2) * &i_ga * &i_home_away - &i_ga;
    let last = moved.intersection(home) > moved.intersection(away);
    let links = [
        (strict_drop, "i(γ,home) < i(γ,away)"),
        (regrouped == sum_minus_away, "regrouping"),
        (regrouped >= i_ga, "coefficient bound"),
        (moved.intersection(away) == i_ga, "twist fixes its axis"),
        (last, "containment"),
    ];
    Ok(links
        .iter()
        .find(|(ok, _)| !ok)
        .map(|(_, name)| format!("link `{name}` failed at γ={gamma}, k={k}")))
}

/// Certifies `⟨a, b⟩ ≅ F₂` for twists about intersecting curves with powers
/// of magnitude at least 4.
///
/// The universal claim rests on the coefficient inequality
/// `(|l|−2)·i(α,β) − 1 ≥ 1` for each twist power `l`. The sample and the
/// exponent list are a smoke test: every sampled containment is replayed
/// link by link with exact integers.
pub fn verify_twist_pingpong(
    a: &TwistWord,
    b: &TwistWord,
    sample: &[Slope],
    powers: &[i64],
) -> Result<FreeCertificate> {
    for (name, w) in [("a", a), ("b", b)] {
        if w.total_power().abs() < TWIST_PINGPONG_MIN_POWER {
            return Err(McgError::HypothesisViolated(format!(
                "twist power of {name} is {}, need magnitude ≥ {TWIST_PINGPONG_MIN_POWER}",
                w.total_power()
            )));
        }
    }
    if powers.contains(&0) {
        return Err(McgError::InvalidParameter("sample exponents must be nonzero".into()));
    }
    let sets = PingPongSets::new(a.axis().clone(), b.axis().clone())?;
    let (alpha, beta) = (&sets.alpha, &sets.beta);
    let iab = alpha.intersection(beta);

    let mut universal = Vec::new();
    for (name, w) in [("b", b), ("a", a)] {
        let l = BigInt::from(w.total_power().unsigned_abs());
        let coefficient: BigInt = (&l - 2) * &iab - 1;
        universal.push(ChainStep::new(
            format!("(|l|−2)·i(α,β) − 1 ≥ 1 for {name} (l = {}), minimal at |k| = 1", w.total_power()),
            &coefficient,
            1,
            coefficient >= BigInt::from(1),
        ));
    }
    universal.push(ChainStep::new(
        "X_a nonempty: i(α,α) < i(α,β)",
        0,
        &iab,
        sets.membership(alpha) == Membership::InXa,
    ));
    universal.push(ChainStep::new(
        "X_b nonempty: i(β,β) < i(β,α)",
        0,
        &iab,
        sets.membership(beta) == Membership::InXb,
    ));
    if let Some(step) = universal.iter().find(|s| !s.holds) {
        return Err(McgError::CertificationFailed(format!(
            "universal chain failed: {} ({} vs {})",
            step.claim, step.lhs, step.rhs
        )));
    }

    let (mut in_xa, mut in_xb, mut replayed) = (0usize, 0usize, 0usize);
    for gamma in sample {
        let (mover, home, target) = match sets.membership(gamma) {
            Membership::InXa => {
                in_xa += 1;
                (b, alpha, Membership::InXb)
            }
            Membership::InXb => {
                in_xb += 1;
                (a, beta, Membership::InXa)
            }
            Membership::Neither => continue,
        };
        for &k in powers {
            let image = mover.power(k)?.apply(gamma);
            if sets.membership(&image) != target {
                return Err(McgError::CertificationFailed(format!(
                    "counterexample: γ={gamma}, k={k}, image {image} not in {target:?}"
                )));
            }
            if let Some(failure) = replay_containment(mover, k, gamma, home)? {
                return Err(McgError::CertificationFailed(failure));
            }
            replayed += 1;
        }
    }

    Ok(FreeCertificate {
        kind: CertificateKind::TwistPingpong,
        generators: [a.matrix(), b.matrix()],
        parameters: CertificateParameters::Twist(TwistPingPongEvidence {
            alpha: alpha.clone(),
            beta: beta.clone(),
            a_power: a.total_power(),
            b_power: b.total_power(),
            alpha_beta_intersection: iab.to_string(),
            universal_chain: universal,
            sample_size: sample.len(),
            sampled_in_xa: in_xa,
            sampled_in_xb: in_xb,
            instances_replayed: replayed,
        }),
        oracle_cross_check_depth: None,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FuzzReport {
    pub instances: usize,
    pub violations: usize,
    pub first_violation: Option<String>,
}

fn random_slope(rng: &mut ChaCha8Rng, max_entry: i64) -> Slope {
    loop {
        let p = rng.gen_range(-max_entry..=max_entry);
        let q = rng.gen_range(-max_entry..=max_entry);
        if let Ok(s) = Slope::new(p, q) {
            return s;
        }
    }
}

/// Checks the twist inequality on seeded pseudorandom instances with
/// `0 < |power| ≤ max_power` and slope entries bounded by `max_entry`.
pub fn fuzz_twist_inequality(
    instances: usize,
    max_power: i64,
    max_entry: i64,
    seed: u64,
) -> FuzzReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut violations = 0;
    let mut first = None;
    for _ in 0..instances {
        let axis = random_slope(&mut rng, max_entry);
        let mut power = 0;
        while power == 0 {
            power = rng.gen_range(-max_power..=max_power);
        }
        let t = TwistWord::single(axis, power).expect("nonzero power");
        let delta = random_slope(&mut rng, max_entry);
        let delta_prime = random_slope(&mut rng, max_entry);
        let report = twist_inequality_check(&t, &delta, &delta_prime);
        if !report.holds {
            violations += 1;
            first.get_or_insert_with(|| {
                format!(
                    "T={}^{power}, δ={delta}, δ'={delta_prime}: {} < {}",
                    t.axis(),
                    report.lhs,
                    report.rhs
                )
            });
        }
    }
    FuzzReport {
        instances,
        violations,
        first_violation: first,
    }
}
