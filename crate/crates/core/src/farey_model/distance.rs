//! Distances in the Farey graph: slopes are adjacent when they intersect once.
//!
//! The graph is locally infinite, so breadth-first search is only possible on
//! a finite window. [`farey_distance`] instead moves the first endpoint to
//! `1/0` with a unimodular change of coordinates and walks the continued
//! fraction of the image of the second endpoint. Every Farey edge crossed by
//! the hyperbolic geodesic between the endpoints separates them, so a
//! shortest path can be taken through the convergents. Consecutive convergents
//! are adjacent, and `c_{k-2}`, `c_k` are adjacent exactly when the partial
//! quotient `a_k` is 1, which gives a linear-time recurrence.
//!
//! [`BoundedFareyGraph`] is the brute-force cross-check.

use std::collections::{HashMap, VecDeque};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use super::classify::classify;
use super::mapping_class::MappingClass;
use super::slope::Slope;
use crate::error::{McgError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FareyDistance {
    Finite(u64),
    ExceedsCap,
}

impl FareyDistance {
    pub fn value(self) -> Option<u64> {
        match self {
            FareyDistance::Finite(d) => Some(d),
            FareyDistance::ExceedsCap => None,
        }
    }
}

/// A unimodular matrix sending `1/0` to `s`.
fn frame_at(s: &Slope) -> MappingClass {
    let (p, q) = (s.p(), s.q());
    let eg = p.extended_gcd(q);
    debug_assert!(eg.gcd.is_one());
    // p·x + q·y = 1, so [[p, −y], [q, x]] has determinant 1.
    MappingClass::from_entries_unchecked(p.clone(), -eg.y, q.clone(), eg.x)
}

/// Partial quotients of `p/q` with `q > 0`.
fn partial_quotients(p: &BigInt, q: &BigInt) -> Vec<BigInt> {
    let mut out = Vec::new();
    let (mut n, mut d) = (p.clone(), q.clone());
    while !d.is_zero() {
        let (a, r) = n.div_mod_floor(&d);
        out.push(a);
        n = d;
        d = r;
    }
    out
}

/// Farey distance from `1/0` to `p/q`.
fn distance_from_infinity(p: &BigInt, q: &BigInt) -> u64 {
    if q.is_zero() {
        return 0;
    }
    let quotients = partial_quotients(p, q);
    // dist(c_{k-2}), dist(c_{k-1}) with c_{-1} = 1/0 and c_0 = a_0.
    let (mut before, mut last) = (0u64, 1u64);
    for a in quotients.iter().skip(1) {
        let mut next = last + 1;
        if a.is_one() {
            next = next.min(before + 1);
        }
        before = last;
        last = next;
    }
    last
}

/// Graph distance between two slopes; [`FareyDistance::ExceedsCap`] when the
/// distance is larger than `cap`.
pub fn farey_distance(s1: &Slope, s2: &Slope, cap: u64) -> FareyDistance {
    let image = frame_at(s1).inverse().apply(s2);
    let d = distance_from_infinity(image.p(), image.q());
    if d > cap {
        FareyDistance::ExceedsCap
    } else {
        FareyDistance::Finite(d)
    }
}

/// `d(Mⁿ s, s) / n` for a pseudo-Anosov `M`: the empirical translation rate
/// along the orbit of `s`. The minimal translation constant is at most every
/// such value, so tabulating them brackets it from above.
pub fn translation_estimate(m: &MappingClass, s: &Slope, n: u64) -> Result<BigRational> {
    let kind = classify(m);
    if !kind.is_pseudo_anosov() {
        return Err(McgError::NotPseudoAnosov(format!(
            "{m} is {}",
            kind.name()
        )));
    }
    if n == 0 {
        return Err(McgError::InvalidParameter("n must be at least 1".into()));
    }
    let exp = i64::try_from(n).map_err(|_| McgError::InvalidParameter("n too large".into()))?;
    let moved = m.pow(exp).apply(s);
    let d = farey_distance(&moved, s, u64::MAX)
        .value()
        .expect("uncapped distance");
    Ok(BigRational::new(BigInt::from(d), BigInt::from(n)))
}

/// Farey graph restricted to slopes with `|p|, |q| ≤ bound`, explored by
/// breadth-first search. Distances inside the window are upper bounds on the
/// true distance.
#[derive(Debug, Clone)]
pub struct BoundedFareyGraph {
    bound: i64,
    slopes: Vec<(i64, i64)>,
    index: HashMap<(i64, i64), usize>,
    adjacency: Vec<Vec<usize>>,
}

impl BoundedFareyGraph {
    pub fn new(bound: i64) -> Self {
        let mut slopes = Vec::new();
        for q in 0..=bound {
            for p in -bound..=bound {
                if p.gcd(&q) == 1 && (q > 0 || p == 1) {
                    slopes.push((p, q));
                }
            }
        }
        let index: HashMap<_, _> = slopes.iter().enumerate().map(|(i, &s)| (s, i)).collect();
        let mut adjacency = vec![Vec::new(); slopes.len()];
        for i in 0..slopes.len() {
            for j in (i + 1)..slopes.len() {
                let (p1, q1) = slopes[i];
                let (p2, q2) = slopes[j];
                if (p1 * q2 - p2 * q1).abs() == 1 {
                    adjacency[i].push(j);
                    adjacency[j].push(i);
                }
            }
        }
        BoundedFareyGraph {
            bound,
            slopes,
            index,
            adjacency,
        }
    }

    pub fn bound(&self) -> i64 {
        self.bound
    }

    pub fn slopes(&self) -> impl Iterator<Item = Slope> + '_ {
        self.slopes
            .iter()
            .map(|&(p, q)| Slope::new(p, q).expect("coprime"))
    }

    pub fn len(&self) -> usize {
        self.slopes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slopes.is_empty()
    }

    fn key(s: &Slope) -> Option<(i64, i64)> {
        Some((s.p().to_i64()?, s.q().to_i64()?))
    }

    /// Distances from `source` to every slope in the window (`None` when
    /// unreachable or `source` lies outside).
    pub fn distances_from(&self, source: &Slope) -> Option<Vec<Option<u64>>> {
        let start = *self.index.get(&Self::key(source)?)?;
        let mut dist = vec![None; self.slopes.len()];
        dist[start] = Some(0u64);
        let mut queue = VecDeque::from([start]);
        while let Some(u) = queue.pop_front() {
            let du = dist[u].expect("visited");
            for &v in &self.adjacency[u] {
                if dist[v].is_none() {
                    dist[v] = Some(du + 1);
                    queue.push_back(v);
                }
            }
        }
        Some(dist)
    }

    pub fn distance(&self, s1: &Slope, s2: &Slope) -> Option<u64> {
        let target = *self.index.get(&Self::key(s2)?)?;
        self.distances_from(s1)?[target]
    }

    pub fn index_of(&self, s: &Slope) -> Option<usize> {
        self.index.get(&Self::key(s)?).copied()
    }
}

/// Distance by bounded breadth-first search, for cross-validation.
pub fn farey_distance_bfs(s1: &Slope, s2: &Slope, bound: i64) -> Option<u64> {
    BoundedFareyGraph::new(bound).distance(s1, s2)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sl(p: i64, q: i64) -> Slope {
        Slope::new(p, q).unwrap()
    }

    #[test]
    fn distance_examples() {
        assert_eq!(farey_distance(&sl(0, 1), &sl(1, 0), 10), FareyDistance::Finite(1));
        assert_eq!(farey_distance(&sl(3, 7), &sl(3, 7), 10), FareyDistance::Finite(0));
        assert_eq!(farey_distance(&sl(0, 1), &sl(5, 2), 10), FareyDistance::Finite(3));
        assert_eq!(farey_distance(&sl(0, 1), &sl(5, 2), 2), FareyDistance::ExceedsCap);
    }

    #[test]
    fn bfs_oracle_example() {
        // Witness path 0/1, 1/1, 2/1, 5/2.
        assert_eq!(farey_distance_bfs(&sl(0, 1), &sl(5, 2), 8), Some(3));
    }

    #[test]
    fn frame_sends_infinity_to_slope() {
        for s in [sl(5, 2), sl(-7, 3), sl(0, 1), sl(1, 0), sl(13, 21)] {
            let f = frame_at(&s);
            assert!(f.determinant().is_one());
            assert_eq!(f.apply(&Slope::infinity()), s);
        }
    }

    #[test]
    fn translation_examples() {
        let m = MappingClass::from_rows([[2, 1], [1, 1]]);
        let one = translation_estimate(&m, &sl(1, 0), 1).unwrap();
        assert_eq!(one, BigRational::one());
        // M⁴ (1/0) = 34/21; oracle window 40 contains it.
        let four = translation_estimate(&m, &sl(1, 0), 4).unwrap();
        let bfs = farey_distance_bfs(&sl(34, 21), &sl(1, 0), 40).unwrap();
        assert_eq!(four, BigRational::new(BigInt::from(bfs), BigInt::from(4)));
        let t = MappingClass::from_rows([[1, 1], [0, 1]]);
        assert!(matches!(
            translation_estimate(&t, &sl(1, 0), 1),
            Err(McgError::NotPseudoAnosov(_))
        ));
    }
}
