use mcg_core::farey_model::{
    classify, farey_distance, is_pure, twist_matrix, BoundedFareyGraph, ClassificationResult,
    FareyDistance, MappingClass, QuadraticIrrational, Slope,
};
use num_bigint::BigInt;
use num_integer::Integer;
use proptest::prelude::*;

fn slope_strategy(bound: i64) -> impl Strategy<Value = Slope> {
    (-bound..=bound, -bound..=bound)
        .prop_filter("coprime", |(p, q)| p.gcd(q) == 1)
        .prop_map(|(p, q)| Slope::new(p, q).unwrap())
}

/// Random products of the standard generators, so every sample has det 1.
fn matrix_strategy() -> impl Strategy<Value = MappingClass> {
    prop::collection::vec(0usize..4, 0..10).prop_map(|word| {
        let gens = [
            MappingClass::from_rows([[1, 1], [0, 1]]),
            MappingClass::from_rows([[1, -1], [0, 1]]),
            MappingClass::from_rows([[1, 0], [1, 1]]),
            MappingClass::from_rows([[1, 0], [-1, 1]]),
        ];
        word.into_iter()
            .fold(MappingClass::identity(), |acc, i| &acc * &gens[i])
    })
}

proptest! {
    #[test]
    fn action_preserves_intersection(
        m in matrix_strategy(),
        s1 in slope_strategy(40),
        s2 in slope_strategy(40),
    ) {
        prop_assert_eq!(m.apply(&s1).intersection(&m.apply(&s2)), s1.intersection(&s2));
    }

    #[test]
    fn classification_is_a_trichotomy(m in matrix_strategy()) {
        let t = m.trace();
        let two = BigInt::from(2);
        let kind = classify(&m);
        match &kind {
            ClassificationResult::Identity { .. } => prop_assert!(m.is_central()),
            ClassificationResult::FiniteOrder { .. } => prop_assert!(t.magnitude() < two.magnitude()),
            ClassificationResult::DehnTwist { axis, power, negated } => {
                prop_assert_eq!(t.magnitude(), two.magnitude());
                prop_assert_eq!(&m.apply(axis), axis);
                let mut rebuilt = twist_matrix(axis, power.clone()).unwrap();
                if *negated {
                    rebuilt = rebuilt.negated();
                }
                prop_assert_eq!(rebuilt, m.clone());
            }
            ClassificationResult::PseudoAnosov { dilatation } => {
                prop_assert!(t.magnitude() > two.magnitude());
                // λ + 1/λ = |t| exactly.
                let sum = dilatation + &dilatation.recip().unwrap();
                let abs_t = QuadraticIrrational::from_integer(BigInt::from(t.magnitude().clone()));
                prop_assert_eq!(sum, abs_t);
            }
        }
    }

    #[test]
    fn twist_purity_iff_power_divisible_by_three(s in slope_strategy(30), n in -40i64..40) {
        prop_assume!(n != 0);
        let t = twist_matrix(&s, n).unwrap();
        prop_assert_eq!(is_pure(&t), n % 3 == 0);
        prop_assert_eq!(t.trace(), BigInt::from(2));
        prop_assert_eq!(&t.apply(&s), &s);
    }

    #[test]
    fn twist_powers_add(s in slope_strategy(30), n in -20i64..20, m in -20i64..20) {
        prop_assume!(n != 0 && m != 0 && n + m != 0);
        let lhs = &twist_matrix(&s, n).unwrap() * &twist_matrix(&s, m).unwrap();
        prop_assert_eq!(lhs, twist_matrix(&s, n + m).unwrap());
    }

    #[test]
    fn distance_is_a_metric(
        a in slope_strategy(200),
        b in slope_strategy(200),
        c in slope_strategy(200),
    ) {
        let d = |x: &Slope, y: &Slope| farey_distance(x, y, u64::MAX).value().unwrap();
        prop_assert_eq!(d(&a, &b), d(&b, &a));
        prop_assert!(d(&a, &c) <= d(&a, &b) + d(&b, &c));
        prop_assert_eq!(d(&a, &b) == 0, a == b);
        let i = a.intersection(&b);
        prop_assert_eq!(d(&a, &b) == 1, i == BigInt::from(1));
        if i >= BigInt::from(2) {
            prop_assert!(d(&a, &b) >= 2);
        }
    }

    #[test]
    fn distance_is_invariant_under_the_action(
        m in matrix_strategy(),
        a in slope_strategy(50),
        b in slope_strategy(50),
    ) {
        prop_assert_eq!(
            farey_distance(&m.apply(&a), &m.apply(&b), u64::MAX),
            farey_distance(&a, &b, u64::MAX)
        );
    }
}

#[test]
fn continued_fraction_distance_matches_bfs_on_the_30_box() {
    let graph = BoundedFareyGraph::new(30);
    let slopes: Vec<Slope> = graph.slopes().collect();
    let mut checked = 0usize;
    for s in &slopes {
        let bfs = graph.distances_from(s).unwrap();
        for (t, d_bfs) in slopes.iter().zip(bfs) {
            let d_cf = farey_distance(s, t, u64::MAX);
            assert_eq!(d_cf, FareyDistance::Finite(d_bfs.unwrap()), "{s} -> {t}");
            checked += 1;
        }
    }
    assert_eq!(checked, slopes.len() * slopes.len());
}
