use mcg_core::constants_engine::{
    behrstock_threshold_check, behrstock_threshold_check_with, chain_verify, fact2_lower,
    fact3_arcs_lower_with, main_lemma_power, p1_constant, relpa_dispatch_table,
    simulate_relpa_pingpong, threshold_search_with, OverlapCase, ProjectionParams,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

#[test]
fn fact2_is_monotone() {
    let values: Vec<BigInt> = (2..40).map(|d| fact2_lower(d).unwrap().value).collect();
    assert!(values.windows(2).all(|w| w[0] <= w[1]));
}

#[test]
fn behrstock_passes_from_ten_on() {
    for d in 2..10 {
        assert!(!behrstock_threshold_check(d).unwrap().implies_d_out_4, "D_in = {d}");
    }
    for d in 10..40 {
        assert!(behrstock_threshold_check(d).unwrap().implies_d_out_4, "D_in = {d}");
    }
}

#[test]
fn threshold_depends_on_the_additive_term() {
    assert_eq!(threshold_search_with(2, 100).unwrap().sum_min, 14);
    assert_eq!(threshold_search_with(5, 100).unwrap().d_in_min, 12);
    assert_eq!(threshold_search_with(-4, 100).unwrap().d_in_min, 8);
    let mut last = 0;
    for additive in -4..=5 {
        let s = threshold_search_with(additive, 200).unwrap();
        assert!(s.d_in_min >= last);
        last = s.d_in_min;
    }
}

#[test]
fn p1_feeds_the_chain() {
    for (n, d) in [(1, 1), (1, 2), (3, 7), (5, 1), (1, 10)] {
        let c = q(n, d);
        let p1 = p1_constant(&[c.clone(), c.clone() * q(3, 1)]).unwrap();
        let p = u64::try_from(p1.ceil().to_integer()).unwrap() + 1;
        let params = ProjectionParams::standard(c.clone());
        assert!(chain_verify(&params, p, 1).unwrap().accepted, "c = {c}");
        let below = p1.floor().to_integer();
        if below >= BigInt::from(1) && BigRational::from_integer(below.clone()) < p1 {
            let p = u64::try_from(below).unwrap();
            assert!(!chain_verify(&params, p, 1).unwrap().accepted, "c = {c}");
        }
    }
    assert!(p1_constant(&[]).is_err());
}

#[test]
fn small_d_in_fails_the_first_step() {
    let params = ProjectionParams::new(q(1, 1), 9, 4).unwrap();
    let chain = chain_verify(&params, 100, 1).unwrap();
    assert_eq!(chain.first_failure, Some(0));
}

#[test]
fn dispatch_covers_every_configuration() {
    let params = ProjectionParams::standard(q(1, 1));
    let table = relpa_dispatch_table(&params, 14).unwrap();
    let cases: Vec<OverlapCase> = table.iter().map(|e| e.case).collect();
    assert!(cases.contains(&OverlapCase::Case1));
    assert!(cases.contains(&OverlapCase::Case2));
    assert!(cases.contains(&OverlapCase::Case3));
    assert!(table.iter().all(|e| e.chain.accepted));
}

#[test]
fn simulation_alternates_with_an_accepted_chain() {
    let params = ProjectionParams::standard(q(1, 1));
    for seed in 0..20 {
        let trace = simulate_relpa_pingpong(&params, 14, 50, seed).unwrap();
        assert!(trace.passed);
        assert_eq!(trace.steps.len(), 50);
        for (i, s) in trace.steps.iter().enumerate() {
            assert_eq!(s.in_x_b, i % 2 == 0);
            assert_eq!(s.in_x_a, i % 2 == 1);
            assert!(s.translation >= q(14, 1));
        }
    }
    assert!(simulate_relpa_pingpong(&params, 13, 10, 0).is_err());
}

#[test]
fn main_lemma_power_exceeds_every_input() {
    assert_eq!(main_lemma_power(&q(14, 1), 3), BigInt::from(15));
    assert_eq!(main_lemma_power(&q(1, 2), 0), BigInt::from(5));
    assert_eq!(main_lemma_power(&q(7, 2), 9), BigInt::from(10));
}

proptest! {
    #[test]
    fn fact3_is_monotone(i in 0i64..10_000, j in 0i64..10_000, additive in -5i64..6) {
        let (lo, hi) = (i.min(j), i.max(j));
        prop_assert!(fact3_arcs_lower_with(&BigInt::from(lo), additive) <= fact3_arcs_lower_with(&BigInt::from(hi), additive));
    }

    #[test]
    fn behrstock_is_monotone_in_d_in(d in 2u64..200, additive in -4i64..6) {
        let here = behrstock_threshold_check_with(d, additive).unwrap().implies_d_out_4;
        let next = behrstock_threshold_check_with(d + 1, additive).unwrap().implies_d_out_4;
        prop_assert!(!here || next);
    }

    #[test]
    fn chain_is_monotone_in_p_and_c(n in 1i64..20, d in 1i64..20, p in 1u64..60) {
        let params = ProjectionParams::standard(q(n, d));
        let here = chain_verify(&params, p, 1).unwrap().accepted;
        prop_assert!(!here || chain_verify(&params, p + 1, 1).unwrap().accepted);
        let bigger = ProjectionParams::standard(q(n + 1, d));
        prop_assert!(!here || chain_verify(&bigger, p, 1).unwrap().accepted);
        prop_assert!(!here || chain_verify(&params, p, -2).unwrap().accepted);
    }
}
