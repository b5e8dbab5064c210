use mcg_core::farey_model::is_pure;
use mcg_core::free_cert::{
    find_short_independent, projective_pingpong_cert, purify, relation_oracle,
    relation_oracle_tree, theorem1_constants, CertificateKind, DispatchCase, FindConfig, Word,
};
use mcg_core::{MappingClass, McgError};
use proptest::prelude::*;

fn standard() -> [MappingClass; 4] {
    [
        MappingClass::from_rows([[1, 1], [0, 1]]),
        MappingClass::from_rows([[1, -1], [0, 1]]),
        MappingClass::from_rows([[1, 0], [1, 1]]),
        MappingClass::from_rows([[1, 0], [-1, 1]]),
    ]
}

fn word_strategy(max_len: usize) -> impl Strategy<Value = MappingClass> {
    prop::collection::vec(0usize..4, 1..=max_len).prop_map(|w| {
        let g = standard();
        w.into_iter().fold(MappingClass::identity(), |acc, i| &acc * &g[i])
    })
}

fn small_matrix_strategy() -> impl Strategy<Value = MappingClass> {
    prop_oneof![
        word_strategy(3),
        Just(MappingClass::from_rows([[0, -1], [1, 0]])),
        Just(MappingClass::from_rows([[0, -1], [1, 1]])),
        Just(MappingClass::from_rows([[1, 1], [-1, 0]])),
    ]
}


proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn meet_in_the_middle_matches_tree(a in small_matrix_strategy(), b in small_matrix_strategy()) {
        prop_assert_eq!(relation_oracle(&a, &b, 6).unwrap(), relation_oracle_tree(&a, &b, 6).unwrap());
    }

    #[test]
    fn relation_length_is_symmetric(a in small_matrix_strategy(), b in small_matrix_strategy()) {
        let len = |x: &MappingClass, y: &MappingClass| {
            relation_oracle(x, y, 7).unwrap().map(|r| r.length)
        };
        let base = len(&a, &b);
        prop_assert_eq!(base, len(&b, &a));
        prop_assert_eq!(base, len(&a.inverse(), &b.inverse()));
    }

    #[test]
    fn found_relations_evaluate_trivially(a in small_matrix_strategy(), b in small_matrix_strategy()) {
        if let Some(rel) = relation_oracle(&a, &b, 7).unwrap() {
            prop_assert!(rel.word.is_reduced());
            prop_assert_eq!(rel.word.len(), rel.length);
            prop_assert!(rel.word.evaluate(&a, &b).is_central());
            prop_assert_eq!(Word::parse(&rel.compact).unwrap(), rel.word);
        }
    }

    #[test]
    fn projective_certificates_are_sound(a in word_strategy(5), c in word_strategy(4)) {
        let b = &(&c * &a) * &c.inverse();
        if let Ok(cert) = projective_pingpong_cert(&a, &b) {
            prop_assert_eq!(cert.kind, CertificateKind::ProjectivePingpong);
            prop_assert!(cert.is_proof());
            prop_assert_eq!(relation_oracle(&a, &b, 10).unwrap(), None);
        }
    }

    #[test]
    fn purify_invariants(gens in prop::collection::vec(word_strategy(4), 1..=3)) {
        let p = purify(&gens).unwrap();
        prop_assert_eq!(24 % p.index, 0);
        for s in &p.schreier {
            prop_assert!(is_pure(&s.element));
            prop_assert!(s.a_length < 2 * p.index);
            prop_assert_eq!(s.word.len(), s.a_length);
            prop_assert_eq!(&s.word.evaluate(&gens), &s.element);
            prop_assert!(!s.element.is_identity());
        }
    }
}

#[test]
fn sanov_pair_has_index_24() {
    let g = standard();
    let p = purify(&[g[0].clone(), g[2].clone()]).unwrap();
    assert_eq!(p.index, 24);
    assert!(p.schreier.iter().all(|s| s.a_length <= 47));
}

#[test]
fn twist_example_gives_sixth_powers() {
    let res = find_short_independent(
        &[
            MappingClass::from_rows([[1, 3], [0, 1]]),
            MappingClass::from_rows([[1, 0], [3, 1]]),
        ],
        &FindConfig::default(),
    )
    .unwrap();
    assert_eq!(res.case, DispatchCase::DehnTwistPowers);
    assert_eq!(res.p_used, 2);
    assert_eq!(res.u, MappingClass::from_rows([[1, 6], [0, 1]]));
    assert_eq!(res.v, MappingClass::from_rows([[1, 0], [6, 1]]));
    assert_eq!((res.u_length, res.v_length), (2, 2));
    assert!((res.growth_bound - 3f64.ln() / 2.0).abs() < 1e-12);
    assert_eq!(res.certificate.kind, CertificateKind::TwistPingpong);
    assert_eq!(res.certificate.oracle_cross_check_depth, Some(12));
}

#[test]
fn pseudo_anosov_example_is_certified_projectively() {
    let res = find_short_independent(
        &[
            MappingClass::from_rows([[2, 1], [1, 1]]),
            MappingClass::from_rows([[1, 1], [0, 1]]),
        ],
        &FindConfig::default(),
    )
    .unwrap();
    assert_eq!(res.case, DispatchCase::PseudoAnosovConjugate);
    assert_eq!(res.certificate.kind, CertificateKind::ProjectivePingpong);
    assert!(res.certificate.is_proof());
    assert_eq!(relation_oracle(&res.u, &res.v, 10).unwrap(), None);
}

#[test]
fn per_instance_bound_beats_uniform_rate() {
    let g = standard();
    let sets = [
        vec![g[0].clone(), g[2].clone()],
        vec![MappingClass::from_rows([[2, 1], [1, 1]]), g[0].clone()],
        vec![g[0].pow(3), g[2].pow(3)],
    ];
    for gens in sets {
        let res = find_short_independent(&gens, &FindConfig::default()).unwrap();
        let c = theorem1_constants(u64::from(res.p_used), res.index as u64).unwrap();
        assert!(res.growth_bound >= c.r, "{} < {}", res.growth_bound, c.r);
        assert!(res.u_length.max(res.v_length) as u64 <= c.w);
    }
}

#[test]
fn virtually_abelian_inputs_are_rejected() {
    let g = standard();
    for gens in [
        vec![g[0].clone()],
        vec![g[0].clone(), g[0].pow(5)],
        vec![MappingClass::from_rows([[0, -1], [1, 0]])],
        vec![MappingClass::from_rows([[0, -1], [1, 1]]), MappingClass::from_rows([[-1, 0], [0, -1]])],
    ] {
        let err = find_short_independent(&gens, &FindConfig::default()).unwrap_err();
        assert!(matches!(err, McgError::VirtuallyAbelian(_)), "{err}");
    }
}
