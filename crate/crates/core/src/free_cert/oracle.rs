//! Brute-force search for relations between two matrices.
//!
//! A relation is a nonempty freely reduced word in `a, a⁻¹, b, b⁻¹` that
//! evaluates to `±I`. Letters are ordered `a < a⁻¹ < b < b⁻¹` and words are
//! compared by length, then lexicographically.

use std::collections::HashMap;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{McgError, Result};
use crate::farey_model::MappingClass;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Letter {
    A,
    AInv,
    B,
    BInv,
}

pub const LETTERS: [Letter; 4] = [Letter::A, Letter::AInv, Letter::B, Letter::BInv];

impl Letter {
    pub fn inverse(self) -> Letter {
        match self {
            Letter::A => Letter::AInv,
            Letter::AInv => Letter::A,
            Letter::B => Letter::BInv,
            Letter::BInv => Letter::B,
        }
    }

    /// `a`, `A`, `b`, `B`, with capitals for inverses.
    pub fn compact(self) -> char {
        match self {
            Letter::A => 'a',
            Letter::AInv => 'A',
            Letter::B => 'b',
            Letter::BInv => 'B',
        }
    }

    fn base(self) -> char {
        match self {
            Letter::A | Letter::AInv => 'a',
            Letter::B | Letter::BInv => 'b',
        }
    }

    fn is_inverse(self) -> bool {
        matches!(self, Letter::AInv | Letter::BInv)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn compact(&self) -> String {
        self.0.iter().map(|l| l.compact()).collect()
    }

    pub fn parse(s: &str) -> Result<Word> {
        s.chars()
            .map(|c| match c {
                'a' => Ok(Letter::A),
                'A' => Ok(Letter::AInv),
                'b' => Ok(Letter::B),
                'B' => Ok(Letter::BInv),
                other => Err(McgError::parse(other.to_string(), "expected one of a, A, b, B")),
            })
            .collect::<Result<Vec<_>>>()
            .map(Word)
    }

    pub fn is_reduced(&self) -> bool {
        self.0.windows(2).all(|w| w[0] != w[1].inverse())
    }

    pub fn evaluate(&self, a: &MappingClass, b: &MappingClass) -> MappingClass {
        let (ai, bi) = (a.inverse(), b.inverse());
        self.0.iter().fold(MappingClass::identity(), |acc, l| {
            let m = match l {
                Letter::A => a,
                Letter::AInv => &ai,
                Letter::B => b,
                Letter::BInv => &bi,
            };
            &acc * m
        })
    }

    /// Shortlex comparison.
    pub fn shortlex_cmp(&self, other: &Word) -> std::cmp::Ordering {
        self.len().cmp(&other.len()).then_with(|| self.0.cmp(&other.0))
    }
}

/// Powers are grouped, so `aaB` prints as `a² b⁻¹`.
impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let mut first = true;
        let mut i = 0;
        while i < self.0.len() {
            let l = self.0[i];
            let mut run = 1;
            while i + run < self.0.len() && self.0[i + run] == l {
                run += 1;
            }
            if !first {
                write!(f, " ")?;
            }
            first = false;
            write!(f, "{}", l.base())?;
            let exp = if l.is_inverse() { -(run as i64) } else { run as i64 };
            if exp != 1 {
                write!(f, "{}", superscript(exp))?;
            }
            i += run;
        }
        Ok(())
    }
}

fn superscript(n: i64) -> String {
    const DIGITS: [char; 10] = ['⁰', '¹', '²', '³', '⁴', '⁵', '⁶', '⁷', '⁸', '⁹'];
    let mut out = String::new();
    if n < 0 {
        out.push('⁻');
    }
    for c in n.unsigned_abs().to_string().chars() {
        out.push(DIGITS[c.to_digit(10).expect("digit") as usize]);
    }
    out
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Relation {
    pub word: Word,
    pub compact: String,
    pub length: usize,
}

impl Relation {
    fn from_word(word: Word) -> Self {
        Relation {
            compact: word.compact(),
            length: word.len(),
            word,
        }
    }
}

fn check_depth(depth: usize) -> Result<()> {
    if depth == 0 {
        return Err(McgError::InvalidParameter("oracle depth must be at least 1".into()));
    }
    Ok(())
}

/// Reduced words of each length up to `max_len` with their values, each
/// level in lexicographic order.
fn levels(a: &MappingClass, b: &MappingClass, max_len: usize) -> Vec<Vec<(Vec<Letter>, MappingClass)>> {
    let mats = [a.clone(), a.inverse(), b.clone(), b.inverse()];
    let mut out = vec![vec![(Vec::new(), MappingClass::identity())]];
    for len in 1..=max_len {
        let mut next = Vec::new();
        for (w, m) in &out[len - 1] {
            for (i, &l) in LETTERS.iter().enumerate() {
                if w.last().is_some_and(|&x| x == l.inverse()) {
                    continue;
                }
                let mut w2 = w.clone();
                w2.push(l);
                next.push((w2, m * &mats[i]));
            }
        }
        out.push(next);
    }
    out
}

/// Shortest relation of length at most `depth`, lexicographically least
/// among the shortest, or `None`.
///
/// A word `uv` with `|u| = ⌈ℓ/2⌉` is a relation iff `u = ±v⁻¹`, so words of
/// half length are indexed by the projective class of their inverse and
/// matched against prefixes. Entries are exact.
pub fn relation_oracle(a: &MappingClass, b: &MappingClass, depth: usize) -> Result<Option<Relation>> {
    check_depth(depth)?;
    let table = levels(a, b, depth.div_ceil(2));
    for len in 1..=depth {
        let h1 = len.div_ceil(2);
        let h2 = len - h1;
        let mut suffixes: HashMap<MappingClass, Vec<&Vec<Letter>>> = HashMap::new();
        for (v, m) in &table[h2] {
            suffixes.entry(m.inverse().projective_key()).or_default().push(v);
        }
        for (u, m) in &table[h1] {
            let Some(candidates) = suffixes.get(&m.projective_key()) else {
                continue;
            };
            // Candidates are in lexicographic order already.
            let last = *u.last().expect("h1 ≥ 1");
            if let Some(v) = candidates
                .iter()
                .find(|v| v.first().is_none_or(|&f| f != last.inverse()))
            {
                let mut w = u.clone();
                w.extend_from_slice(v);
                return Ok(Some(Relation::from_word(Word(w))));
            }
        }
    }
    Ok(None)
}

/// Plain depth-first walk over the tree of reduced words, sharing products
/// along prefixes. Exponential in `depth`; kept as an independent check on
/// [`relation_oracle`].
pub fn relation_oracle_tree(a: &MappingClass, b: &MappingClass, depth: usize) -> Result<Option<Relation>> {
    check_depth(depth)?;
    let mats = [a.clone(), a.inverse(), b.clone(), b.inverse()];
    let mut best: Option<Word> = None;
    let mut word = Vec::new();
    fn walk(
        mats: &[MappingClass; 4],
        depth: usize,
        word: &mut Vec<Letter>,
        value: &MappingClass,
        best: &mut Option<Word>,
    ) {
        if !word.is_empty() && value.is_central() {
            let w = Word(word.clone());
            if best.as_ref().is_none_or(|b| w.shortlex_cmp(b).is_lt()) {
                *best = Some(w);
            }
        }
        let limit = best.as_ref().map_or(depth, |b| b.len().min(depth));
        if word.len() >= limit {
            return;
        }
        for (i, &l) in LETTERS.iter().enumerate() {
            if word.last().is_some_and(|&x| x == l.inverse()) {
                continue;
            }
            word.push(l);
            walk(mats, depth, word, &(value * &mats[i]), best);
            word.pop();
        }
    }
    walk(&mats, depth, &mut word, &MappingClass::identity(), &mut best);
    Ok(best.map(Relation::from_word))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: [[i64; 2]; 2]) -> MappingClass {
        MappingClass::from_rows(rows)
    }

    #[test]
    fn sanov_pair_has_no_short_relation() {
        let a = m([[1, 2], [0, 1]]);
        let b = m([[1, 0], [2, 1]]);
        assert_eq!(relation_oracle(&a, &b, 10).unwrap(), None);
    }

    #[test]
    fn trivial_relations() {
        let t = m([[1, 1], [0, 1]]);
        let r = relation_oracle(&t, &t, 2).unwrap().unwrap();
        assert_eq!(r.compact, "aB");
        assert_eq!(r.word.to_string(), "a b⁻¹");
        let r = relation_oracle(&t, &m([[1, 2], [0, 1]]), 3).unwrap().unwrap();
        assert_eq!(r.compact, "aaB");
        assert_eq!(r.word.to_string(), "a² b⁻¹");
    }

    #[test]
    fn commuting_pair_gives_a_commutator() {
        let a = m([[1, 1], [0, 1]]);
        let b = m([[1, 5], [0, 1]]);
        let r = relation_oracle(&a, &b, 4).unwrap().unwrap();
        let tree = relation_oracle_tree(&a, &b, 4).unwrap().unwrap();
        assert_eq!(r, tree);
        assert!(r.word.evaluate(&a, &b).is_central());
    }

    #[test]
    fn torsion_relation_modulo_sign() {
        let s = m([[0, -1], [1, 0]]);
        let t = m([[1, 1], [0, 1]]);
        // (ST)³ = −I in the matrix group.
        let r = relation_oracle(&s, &t, 6).unwrap().unwrap();
        assert_eq!(r.compact, "aa");
        let st = &s * &t;
        assert!(st.pow(3).is_central());
    }

    #[test]
    fn zero_depth_is_rejected() {
        let t = m([[1, 1], [0, 1]]);
        assert!(relation_oracle(&t, &t, 0).is_err());
    }

    #[test]
    fn word_parsing_round_trips() {
        let w = Word::parse("aaBAb").unwrap();
        assert_eq!(w.compact(), "aaBAb");
        assert!(w.is_reduced());
        assert!(!Word::parse("aA").unwrap().is_reduced());
        assert!(Word::parse("ax").is_err());
    }
}
