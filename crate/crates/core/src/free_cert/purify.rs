use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{McgError, Result};
use crate::farey_model::{is_pure, MappingClass};

/// Word in the input generators: `+k` is `A[k-1]`, `-k` its inverse.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct GenWord(pub Vec<i32>);

impl GenWord {
    pub fn letter(index: usize, inverse: bool) -> Self {
        let k = i32::try_from(index + 1).expect("generator count");
        GenWord(vec![if inverse { -k } else { k }])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Freely reduced concatenation.
    pub fn concat(&self, other: &GenWord) -> GenWord {
        let mut out = self.0.clone();
        for &l in &other.0 {
            if out.last() == Some(&-l) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        GenWord(out)
    }

    pub fn inverse(&self) -> GenWord {
        GenWord(self.0.iter().rev().map(|l| -l).collect())
    }

    pub fn pow(&self, n: u32) -> GenWord {
        (0..n).fold(GenWord::default(), |acc, _| acc.concat(self))
    }

    pub fn evaluate(&self, gens: &[MappingClass]) -> MappingClass {
        self.0.iter().fold(MappingClass::identity(), |acc, &l| {
            let g = &gens[l.unsigned_abs() as usize - 1];
            if l > 0 {
                &acc * g
            } else {
                &acc * &g.inverse()
            }
        })
    }
}

impl fmt::Display for GenWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|&l| {
                if l > 0 {
                    format!("g{l}")
                } else {
                    format!("g{}⁻¹", -l)
                }
            })
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

impl Serialize for GenWord {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SchreierGenerator {
    pub element: MappingClass,
    pub a_length: usize,
    pub word: GenWord,
}

/// Generators of `⟨A⟩ ∩ Γ(3)`, where `Γ(3)` is the kernel of reduction mod 3.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PurifiedGenerators {
    pub originals: Vec<MappingClass>,
    pub index: usize,
    pub schreier: Vec<SchreierGenerator>,
}

/// Breadth-first coset enumeration of the image of `⟨A⟩` in `SL(2, ℤ/3)`.
/// Representatives are shortest words and the transversal is prefix closed;
/// Schreier generators `t·g·rep(tg)⁻¹` for `g ∈ A` are returned freely
/// reduced, without the identity and without repeats.
pub fn purify(gens: &[MappingClass]) -> Result<PurifiedGenerators> {
    if gens.is_empty() {
        return Err(McgError::InvalidParameter("generating set is empty".into()));
    }
    let mut steps = Vec::new();
    for (i, g) in gens.iter().enumerate() {
        steps.push((GenWord::letter(i, false), g.clone()));
        steps.push((GenWord::letter(i, true), g.inverse()));
    }
    let mut reps: HashMap<[u8; 4], (GenWord, MappingClass)> = HashMap::new();
    let mut order = Vec::new();
    let start = MappingClass::identity();
    reps.insert(start.mod3(), (GenWord::default(), start.clone()));
    order.push(start.mod3());
    let mut queue = VecDeque::from([start.mod3()]);
    while let Some(key) = queue.pop_front() {
        let (w, m) = reps[&key].clone();
        for (sw, sm) in &steps {
            let next = &m * sm;
            let k = next.mod3();
            if let std::collections::hash_map::Entry::Vacant(e) = reps.entry(k) {
                e.insert((w.concat(sw), next));
                order.push(k);
                queue.push_back(k);
            }
        }
    }
    let index = order.len();

    let mut seen = HashSet::new();
    let mut schreier = Vec::new();
    for key in &order {
        let (tw, tm) = &reps[key];
        for (i, g) in gens.iter().enumerate() {
            let tg = tm * g;
            let (rw, rm) = &reps[&tg.mod3()];
            let element = &tg * &rm.inverse();
            if element.is_identity() {
                continue;
            }
            debug_assert!(is_pure(&element));
            if !seen.insert(element.clone()) {
                continue;
            }
            let word = tw.concat(&GenWord::letter(i, false)).concat(&rw.inverse());
            schreier.push(SchreierGenerator {
                a_length: word.len(),
                element,
                word,
            });
        }
    }
    Ok(PurifiedGenerators {
        originals: gens.to_vec(),
        index,
        schreier,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: [[i64; 2]; 2]) -> MappingClass {
        MappingClass::from_rows(rows)
    }

    #[test]
    fn already_pure() {
        let a = m([[1, 3], [0, 1]]);
        let p = purify(std::slice::from_ref(&a)).unwrap();
        assert_eq!(p.index, 1);
        assert_eq!(p.schreier.len(), 1);
        assert_eq!(p.schreier[0].element, a);
        assert_eq!(p.schreier[0].a_length, 1);
    }

    #[test]
    fn cyclic_of_order_three() {
        let p = purify(&[m([[1, 1], [0, 1]])]).unwrap();
        assert_eq!(p.index, 3);
        let cube = p.schreier.iter().find(|s| s.element == m([[1, 3], [0, 1]])).unwrap();
        assert_eq!(cube.a_length, 3);
        assert!(cube.a_length < 2 * p.index);
    }

    #[test]
    fn full_image_has_index_24() {
        let p = purify(&[m([[1, 1], [0, 1]]), m([[1, 0], [1, 1]])]).unwrap();
        assert_eq!(p.index, 24);
        for s in &p.schreier {
            assert!(is_pure(&s.element));
            assert!(s.a_length < 2 * p.index);
            assert_eq!(s.word.evaluate(&p.originals), s.element);
        }
    }

    #[test]
    fn nielsen_schreier_count_for_the_sanov_pair() {
        // Free of rank 2, so the index-24 subgroup is free of rank 24·1 + 1.
        let p = purify(&[m([[1, 2], [0, 1]]), m([[1, 0], [2, 1]])]).unwrap();
        assert_eq!(p.index, 24);
        assert_eq!(p.schreier.len(), 25);
    }

    #[test]
    fn empty_input_is_rejected() {
        assert!(purify(&[]).is_err());
    }
}
