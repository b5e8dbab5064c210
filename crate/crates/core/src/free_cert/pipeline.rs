use num_traits::ToPrimitive;
use serde::Serialize;

use crate::error::{McgError, Result};
use crate::farey_model::{classify, ClassificationResult, MappingClass};
use crate::free_cert::oracle::relation_oracle;
use crate::free_cert::projective::projective_pingpong_cert;
use crate::free_cert::purify::{purify, GenWord, SchreierGenerator};
use crate::free_cert::{CertificateKind, CertificateParameters, FreeCertificate};
use crate::twist_calculus::{
    default_sample_powers, slope_box, verify_twist_pingpong, TwistWord, TWIST_PINGPONG_MIN_POWER,
};

pub const SUBSURFACE_CASE_NOTE: &str =
    "the subsurface case needs a proper essential subsurface of complexity at least 4, which the once-punctured torus does not have";

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FindConfig {
    /// Largest power tried in the pseudo-Anosov case.
    pub max_power: u32,
    /// Depth of the relation oracle cross-check on every certificate.
    pub oracle_depth: usize,
    /// Twist ping-pong sample: slopes with `|p|, |q| ≤ sample_box`.
    pub sample_box: i64,
    /// Accept an oracle-only certificate when no ping-pong succeeds.
    pub allow_oracle_only: bool,
}

impl Default for FindConfig {
    fn default() -> Self {
        FindConfig {
            max_power: 32,
            oracle_depth: 12,
            sample_box: 5,
            allow_oracle_only: false,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DispatchCase {
    /// `⟨a^p, b a^p b⁻¹⟩` with `a` pseudo-Anosov.
    PseudoAnosovConjugate,
    /// `⟨a^p, b^p⟩` with `a`, `b` twists.
    DehnTwistPowers,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SelectedPair {
    pub a: SchreierGenerator,
    pub b: SchreierGenerator,
    pub a_kind: ClassificationResult,
    pub b_kind: ClassificationResult,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IndependenceResult {
    pub u: MappingClass,
    pub v: MappingClass,
    pub u_word: GenWord,
    pub v_word: GenWord,
    pub u_length: usize,
    pub v_length: usize,
    pub certificate: FreeCertificate,
    /// `ln 3 / max(u_length, v_length)`.
    pub growth_bound: f64,
    pub growth_bound_symbolic: String,
    pub p_used: u32,
    pub index: usize,
    pub case: DispatchCase,
    pub selected: SelectedPair,
    pub note: &'static str,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Theorem1Constants {
    pub p: u64,
    pub index: u64,
    pub w: u64,
    pub r: f64,
    pub r_symbolic: String,
}

/// `w = 3p(2·index − 1)` and `r = ln 3 / w`.
pub fn theorem1_constants(p: u64, index: u64) -> Result<Theorem1Constants> {
    if p == 0 || index == 0 {
        return Err(McgError::InvalidParameter("p and index must be positive".into()));
    }
    let w = 3 * p * (2 * index - 1);
    Ok(Theorem1Constants {
        p,
        index,
        w,
        r: 3f64.ln() / w as f64,
        r_symbolic: format!("log(3)/{w}"),
    })
}

/// Cross-checks a certificate with the relation oracle and records the depth.
fn cross_check(mut cert: FreeCertificate, depth: usize) -> Result<FreeCertificate> {
    let [u, v] = &cert.generators;
    if let Some(rel) = relation_oracle(u, v, depth)? {
        return Err(McgError::CertificationFailed(format!(
            "certificate contradicted by relation {} found by the oracle",
            rel.word
        )));
    }
    cert.oracle_cross_check_depth = Some(depth);
    Ok(cert)
}

fn twist_power(kind: &ClassificationResult) -> Option<i64> {
    match kind {
        ClassificationResult::DehnTwist { power, .. } => power.to_i64(),
        _ => None,
    }
}

/// Noncommuting pure pair with the smallest maximal A-length, ties broken by
/// total length and then by position.
fn select_pair(schreier: &[SchreierGenerator]) -> Option<(usize, usize)> {
    let mut best: Option<((usize, usize), (usize, usize))> = None;
    for i in 0..schreier.len() {
        for j in (i + 1)..schreier.len() {
            let (x, y) = (&schreier[i], &schreier[j]);
            if x.element.commutes_with(&y.element) {
                continue;
            }
            let key = (x.a_length.max(y.a_length), x.a_length + y.a_length);
            if best.is_none_or(|(k, _)| key < k) {
                best = Some((key, (i, j)));
            }
        }
    }
    best.map(|(_, pair)| pair)
}

/// Short generators of a free subgroup of `⟨A⟩`, with a certificate.
///
/// Purifies `A`, picks a noncommuting pure pair `(a, b)` and dispatches: if
/// either is pseudo-Anosov it becomes `a` and `⟨a^p, b a^p b⁻¹⟩` is certified
/// on the projective line for the least working `p`; if both are twists,
/// `⟨a^p, b^p⟩` is certified by the twist ping-pong for the least `p` making
/// both twist powers at least 4 in magnitude.
pub fn find_short_independent(gens: &[MappingClass], config: &FindConfig) -> Result<IndependenceResult> {
    if config.max_power == 0 {
        return Err(McgError::InvalidParameter("max_power must be at least 1".into()));
    }
    let purified = purify(gens)?;
    let (i, j) = select_pair(&purified.schreier).ok_or_else(|| {
        McgError::VirtuallyAbelian(format!(
            "all {} pure Schreier generators commute",
            purified.schreier.len()
        ))
    })?;
    let (mut a, mut b) = (purified.schreier[i].clone(), purified.schreier[j].clone());
    let (mut ka, mut kb) = (classify(&a.element), classify(&b.element));
    if !ka.is_pseudo_anosov() && kb.is_pseudo_anosov() {
        std::mem::swap(&mut a, &mut b);
        std::mem::swap(&mut ka, &mut kb);
    }

    let (case, p, u_word, v_word, cert) = if ka.is_pseudo_anosov() {
        let mut failures = Vec::new();
        let mut found = None;
        for p in 1..=config.max_power {
            let u_word = a.word.pow(p);
            let v_word = b.word.concat(&u_word).concat(&b.word.inverse());
            let u = a.element.pow(i64::from(p));
            let v = &(&b.element * &u) * &b.element.inverse();
            match projective_pingpong_cert(&u, &v) {
                Ok(cert) => {
                    found = Some((p, u_word, v_word, cross_check(cert, config.oracle_depth)?));
                    break;
                }
                Err(e) => failures.push(format!("p = {p}: {e}")),
            }
        }
        let (p, u_word, v_word, cert) = match found {
            Some(f) => f,
            None if config.allow_oracle_only => {
                let u = a.element.clone();
                let v = &(&b.element * &u) * &b.element.inverse();
                if let Some(rel) = relation_oracle(&u, &v, config.oracle_depth)? {
                    return Err(McgError::CertificationFailed(format!(
                        "no ping-pong up to p = {} and relation {} at p = 1",
                        config.max_power, rel.word
                    )));
                }
                let cert = FreeCertificate {
                    kind: CertificateKind::OracleOnly,
                    generators: [u, v],
                    parameters: CertificateParameters::Oracle { depth: config.oracle_depth },
                    oracle_cross_check_depth: Some(config.oracle_depth),
                };
                let v_word = b.word.concat(&a.word).concat(&b.word.inverse());
                (1, a.word.clone(), v_word, cert)
            }
            None => {
                return Err(McgError::CertificationFailed(format!(
                    "no projective ping-pong up to p = {}; last: {}",
                    config.max_power,
                    failures.last().map(String::as_str).unwrap_or("none")
                )))
            }
        };
        (DispatchCase::PseudoAnosovConjugate, p, u_word, v_word, cert)
    } else {
        let (Some(ea), Some(eb)) = (twist_power(&ka), twist_power(&kb)) else {
            return Err(McgError::HypothesisViolated(format!(
                "selected pair is neither pseudo-Anosov nor twists: {} and {}",
                ka.name(),
                kb.name()
            )));
        };
        let needed = |e: i64| (TWIST_PINGPONG_MIN_POWER + e.abs() - 1) / e.abs();
        let p = u32::try_from(needed(ea).max(needed(eb))).expect("small power");
        let axis = |k: &ClassificationResult| match k {
            ClassificationResult::DehnTwist { axis, .. } => axis.clone(),
            _ => unreachable!("checked above"),
        };
        let tu = TwistWord::single(axis(&ka), ea * i64::from(p))?;
        let tv = TwistWord::single(axis(&kb), eb * i64::from(p))?;
        let sample = slope_box(config.sample_box);
        let cert = verify_twist_pingpong(&tu, &tv, &sample, &default_sample_powers())?;
        let cert = cross_check(cert, config.oracle_depth)?;
        (DispatchCase::DehnTwistPowers, p, a.word.pow(p), b.word.pow(p), cert)
    };

    let [u, v] = cert.generators.clone();
    debug_assert_eq!(u_word.evaluate(gens), u);
    debug_assert_eq!(v_word.evaluate(gens), v);
    let d = u_word.len().max(v_word.len());
    Ok(IndependenceResult {
        u,
        v,
        u_length: u_word.len(),
        v_length: v_word.len(),
        u_word,
        v_word,
        certificate: cert,
        growth_bound: 3f64.ln() / d as f64,
        growth_bound_symbolic: format!("log(3)/{d}"),
        p_used: p,
        index: purified.index,
        case,
        selected: SelectedPair {
            a,
            b,
            a_kind: ka,
            b_kind: kb,
        },
        note: SUBSURFACE_CASE_NOTE,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: [[i64; 2]; 2]) -> MappingClass {
        MappingClass::from_rows(rows)
    }

    #[test]
    fn theorem1_examples() {
        assert_eq!(theorem1_constants(4, 24).unwrap().w, 564);
        assert_eq!(theorem1_constants(1, 1).unwrap().w, 3);
        assert_eq!(theorem1_constants(14, 24).unwrap().w, 1974);
        assert_eq!(theorem1_constants(4, 24).unwrap().r_symbolic, "log(3)/564");
        assert!(theorem1_constants(0, 24).is_err());
    }

    #[test]
    fn pure_twists_are_squared() {
        let gens = [m([[1, 3], [0, 1]]), m([[1, 0], [3, 1]])];
        let res = find_short_independent(&gens, &FindConfig::default()).unwrap();
        assert_eq!(res.case, DispatchCase::DehnTwistPowers);
        assert_eq!(res.p_used, 2);
        assert_eq!(res.u, m([[1, 6], [0, 1]]));
        assert_eq!(res.v, m([[1, 0], [6, 1]]));
        assert_eq!((res.u_length, res.v_length), (2, 2));
        assert_eq!(res.certificate.kind, CertificateKind::TwistPingpong);
        assert!((res.growth_bound - 3f64.ln() / 2.0).abs() < 1e-15);
    }

    #[test]
    fn abelian_input_is_rejected() {
        let gens = [m([[1, 1], [0, 1]]), m([[1, 2], [0, 1]])];
        assert!(matches!(
            find_short_independent(&gens, &FindConfig::default()),
            Err(McgError::VirtuallyAbelian(_))
        ));
    }

    #[test]
    fn pseudo_anosov_case() {
        let gens = [m([[2, 1], [1, 1]]), m([[1, 1], [1, 2]])];
        let res = find_short_independent(&gens, &FindConfig::default()).unwrap();
        assert_eq!(res.case, DispatchCase::PseudoAnosovConjugate);
        assert_eq!(res.certificate.kind, CertificateKind::ProjectivePingpong);
        assert_eq!(res.certificate.oracle_cross_check_depth, Some(12));
        let w = theorem1_constants(u64::from(res.p_used), res.index as u64).unwrap().w;
        assert!(res.u_length.max(res.v_length) as u64 <= w);
    }
}
