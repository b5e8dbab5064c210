//! Return probabilities of simple random walks, spectral radius bounds, and
//! the uniform bound `f(k)` on the spectral radius.
//!
//! Probabilities are exact rationals: the dynamic programs count walks with
//! big integers and divide by `|A|^n` at the end.

use std::collections::HashMap;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{McgError, Result};
use crate::exact::{ln_biguint, ln_rational, serialize_rationals};
use crate::farey_model::{MappingClass, QuadraticIrrational};

pub const DEFAULT_STATE_CAP: usize = 10_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WalkSource {
    /// Uniform steps over the list as given, repeats included.
    Matrices { generators: Vec<MappingClass> },
    /// Distance from the identity in the free group of the given rank with
    /// its standard symmetric generators.
    FreeRadial { rank: u32 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WalkTable {
    pub source: WalkSource,
    /// `probs[n]` is the probability of being at the identity after `n` steps.
    #[serde(serialize_with = "serialize_rationals")]
    pub probs: Vec<BigRational>,
    /// First step that was not computed because the state cap was reached.
    pub truncated_at: Option<usize>,
    pub warnings: Vec<String>,
}

impl WalkTable {
    pub fn steps(&self) -> usize {
        self.probs.len() - 1
    }
}

/// Exact return probabilities for the walk with uniform steps from `gens`.
pub fn return_probs(gens: &[MappingClass], steps: usize) -> Result<WalkTable> {
    return_probs_capped(gens, steps, DEFAULT_STATE_CAP)
}

/// As [`return_probs`], stopping before a step whose support would exceed
/// `cap` elements.
///
/// The list is treated as a multiset: repeated generators weigh more. A list
/// that is not closed under inverses (with multiplicity) gets its missing
/// inverses appended, with a warning.
pub fn return_probs_capped(gens: &[MappingClass], steps: usize, cap: usize) -> Result<WalkTable> {
    if gens.is_empty() {
        return Err(McgError::InvalidParameter("generating set is empty".into()));
    }
    let mut list = gens.to_vec();
    let mut warnings = Vec::new();
    let mult = |g: &MappingClass| gens.iter().filter(|x| *x == g).count();
    let mut distinct: Vec<&MappingClass> = Vec::new();
    for g in gens {
        if !distinct.contains(&g) {
            distinct.push(g);
        }
    }
    let mut appended = 0;
    for g in &distinct {
        let inv = g.inverse();
        let (need, have) = (mult(g), mult(&inv));
        if need > have {
            list.extend(std::iter::repeat_n(inv, need - have));
            appended += need - have;
        }
    }
    if appended > 0 {
        warnings.push(format!("appended {appended} missing inverses"));
    }
    if distinct.len() < gens.len() {
        warnings.push("repeated generators kept with multiplicity".to_string());
    }

    let size = BigUint::from(list.len());
    let mut dist: HashMap<MappingClass, BigUint> = HashMap::from([(MappingClass::identity(), BigUint::one())]);
    let mut probs = vec![BigRational::one()];
    let mut denom = BigUint::one();
    let mut truncated_at = None;
    for n in 1..=steps {
        let mut next: HashMap<MappingClass, BigUint> = HashMap::with_capacity(dist.len() * 3);
        for (x, c) in &dist {
            for g in &list {
                *next.entry(x * g).or_default() += c;
            }
        }
        if next.len() > cap {
            truncated_at = Some(n);
            break;
        }
        dist = next;
        denom *= &size;
        let at_identity = dist.get(&MappingClass::identity()).cloned().unwrap_or_default();
        probs.push(BigRational::new(at_identity.into(), denom.clone().into()));
    }
    Ok(WalkTable {
        source: WalkSource::Matrices { generators: list },
        probs,
        truncated_at,
        warnings,
    })
}

/// Return probabilities of the simple random walk on the free group of rank
/// `k`, through the distance-from-identity chain: from 0 every step moves
/// out; from `r ≥ 1` one step in `2k` moves in.
pub fn free_radial_probs(rank: u32, steps: usize) -> Result<WalkTable> {
    if rank == 0 {
        return Err(McgError::InvalidParameter("rank must be at least 1".into()));
    }
    let out0 = BigUint::from(2 * rank);
    let out = BigUint::from(2 * rank - 1);
    // counts[r]: walks of the current length ending at distance r. Walks
    // farther than the remaining steps cannot return and are dropped.
    let mut counts = vec![BigUint::one()];
    let mut probs = vec![BigRational::one()];
    let mut denom = BigUint::one();
    for n in 1..=steps {
        let horizon = (steps - n).min(n);
        let mut next = vec![BigUint::zero(); horizon + 1];
        for (r, c) in counts.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if r == 0 {
                if horizon >= 1 {
                    next[1] += c * &out0;
                }
            } else {
                next[r - 1] += c;
                if r < horizon {
                    next[r + 1] += c * &out;
                }
            }
        }
        counts = next;
        denom *= &out0;
        probs.push(BigRational::new(counts[0].clone().into(), denom.clone().into()));
    }
    Ok(WalkTable {
        source: WalkSource::FreeRadial { rank },
        probs,
        truncated_at: None,
        warnings: Vec::new(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundEntry {
    pub n: usize,
    pub value: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundMethod {
    Root,
    Ratio,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RhoEstimate {
    /// `(p⁽²ⁿ⁾)^{1/2n}` at each even step `2n`.
    pub lower_bounds: Vec<BoundEntry>,
    /// `(p⁽²ⁿ⁺²⁾ / p⁽²ⁿ⁾)^{1/2}` at each even step `2n + 2`.
    pub ratio_bounds: Vec<BoundEntry>,
    pub best: f64,
    pub best_index: usize,
    pub best_method: BoundMethod,
}

/// Lower bounds for the spectral radius `ρ` from a table of a symmetric walk.
///
/// Both families are rigorous. The even moments are `p⁽²ⁿ⁾ = ∫ x²ⁿ dμ` for a
/// probability measure `μ` on `[−ρ, ρ]`, so `p⁽²ⁿ⁾ ≤ ρ²ⁿ` and
/// `p⁽²ⁿ⁺²⁾ ≤ ρ² p⁽²ⁿ⁾`. The ratio family converges much faster.
pub fn rho_estimate(table: &WalkTable) -> Result<RhoEstimate> {
    let mut lower_bounds = Vec::new();
    let mut ratio_bounds = Vec::new();
    let mut prev: Option<&BigRational> = None;
    for n in (2..table.probs.len()).step_by(2) {
        let p = &table.probs[n];
        if p.is_zero() {
            prev = None;
            continue;
        }
        lower_bounds.push(BoundEntry {
            n,
            value: (ln_rational(p) / n as f64).exp(),
        });
        if let Some(q) = prev {
            ratio_bounds.push(BoundEntry {
                n,
                value: (0.5 * (ln_rational(p) - ln_rational(q))).exp(),
            });
        }
        prev = Some(p);
    }
    if lower_bounds.is_empty() {
        return Err(McgError::InvalidParameter(
            "table needs a nonzero even step ≥ 2".into(),
        ));
    }
    let mut best = (f64::NEG_INFINITY, 0, BoundMethod::Root);
    for (entries, method) in [(&lower_bounds, BoundMethod::Root), (&ratio_bounds, BoundMethod::Ratio)] {
        for e in entries.iter() {
            if e.value > best.0 {
                best = (e.value, e.n, method);
            }
        }
    }
    Ok(RhoEstimate {
        lower_bounds,
        ratio_bounds,
        best: best.0.min(1.0),
        best_index: best.1,
        best_method: best.2,
    })
}

/// `√(2k−1)/k`, the spectral radius of the free group of rank `k`.
pub fn kesten_free_radius(k: u32) -> Result<QuadraticIrrational> {
    if k < 2 {
        return Err(McgError::InvalidParameter("rank must be at least 2".into()));
    }
    QuadraticIrrational::new(
        BigInt::zero(),
        BigInt::one(),
        BigInt::from(2 * k - 1),
        BigInt::from(k),
    )
}

/// `κ = (1 − ρ)⁻¹`.
pub fn kappa_from_rho(rho: &QuadraticIrrational) -> Result<QuadraticIrrational> {
    QuadraticIrrational::from_integer(BigInt::one())
        .checked_sub(rho)?
        .recip()
}

/// `ρ = 1 − κ⁻¹`.
pub fn rho_from_kappa(kappa: &QuadraticIrrational) -> Result<QuadraticIrrational> {
    QuadraticIrrational::from_integer(BigInt::one()).checked_sub(&kappa.recip()?)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CorollaryBound {
    pub k: u64,
    pub w: u64,
    /// `w³ (k−1)^{w−1}`.
    pub denominator_digits: usize,
    pub f: QuadraticIrrational,
    /// `log₁₀(1 − f)`, since `f` itself rounds to 1 for large `w`.
    pub log10_one_minus_f: f64,
    /// `κ` for the free pair, `(1 − √3/2)⁻¹`.
    pub kappa_free: QuadraticIrrational,
    /// Logarithm of `κ_free · w³ (k−1)^{w−1}`.
    pub log10_kappa: f64,
    /// `1 − κ⁻¹` agrees exactly with `f`.
    pub kappa_route_agrees: bool,
}

/// `f(k) = 1 − (1 − √3/2) / (w³ (k−1)^{w−1})`, computed exactly, together
/// with the same value through `κ = κ_free · w³ (k−1)^{w−1}` and
/// `ρ ≤ 1 − κ⁻¹`.
pub fn corollary_bound(k: u64, w: u64) -> Result<CorollaryBound> {
    if k < 2 || w < 1 {
        return Err(McgError::InvalidParameter("need k ≥ 2 and w ≥ 1".into()));
    }
    let exp = u32::try_from(w - 1).map_err(|_| McgError::InvalidParameter("w too large".into()))?;
    let d: BigUint = BigUint::from(w).pow(3) * BigUint::from(k - 1).pow(exp);
    let d_int = BigInt::from(d.clone());
    let two_d: BigInt = &d_int * 2;
    // 1 − (2 − √3)/(2D) = (2D − 2 + √3) / (2D)
    let f = QuadraticIrrational::new(&two_d - 2, BigInt::one(), BigInt::from(3), two_d)?;

    let rho_free = kesten_free_radius(2)?;
    let kappa_free = kappa_from_rho(&rho_free)?;
    let kappa = kappa_free.checked_mul(&QuadraticIrrational::from_integer(d_int))?;
    let via_kappa = rho_from_kappa(&kappa)?;

    let ln_gap = (1.0 - 3f64.sqrt() / 2.0).ln() - ln_biguint(&d);
    Ok(CorollaryBound {
        k,
        w,
        denominator_digits: d.to_string().len(),
        log10_one_minus_f: ln_gap / std::f64::consts::LN_10,
        log10_kappa: (kappa_free.to_f64().ln() + ln_biguint(&d)) / std::f64::consts::LN_10,
        kappa_route_agrees: via_kappa == f,
        kappa_free,
        f,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MonteCarloReport {
    pub steps: usize,
    pub trials: u64,
    pub seed: u64,
    /// Trials at the identity after each step, `returns[0] = trials`.
    pub returns: Vec<u64>,
    pub frequencies: Vec<f64>,
}

impl MonteCarloReport {
    /// Whether the frequency at `step` is within three binomial standard
    /// errors of `exact`.
    pub fn agrees_with(&self, step: usize, exact: f64) -> bool {
        let sigma = (exact * (1.0 - exact) / self.trials as f64).sqrt();
        (self.frequencies[step] - exact).abs() <= 3.0 * sigma
    }
}

/// Seeded simulation of the walk; identical inputs give identical output.
pub fn monte_carlo(gens: &[MappingClass], steps: usize, trials: u64, seed: u64) -> Result<MonteCarloReport> {
    if trials == 0 {
        return Err(McgError::InvalidParameter("trials must be at least 1".into()));
    }
    if gens.is_empty() {
        return Err(McgError::InvalidParameter("generating set is empty".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut returns = vec![0u64; steps + 1];
    for _ in 0..trials {
        let mut x = MappingClass::identity();
        returns[0] += 1;
        for slot in returns.iter_mut().skip(1) {
            let g = &gens[rng.gen_range(0..gens.len())];
            x = &x * g;
            if x.is_identity() {
                *slot += 1;
            }
        }
    }
    Ok(MonteCarloReport {
        steps,
        trials,
        seed,
        frequencies: returns.iter().map(|&r| r as f64 / trials as f64).collect(),
        returns,
    })
}
