mod common;

use common::{binomial, box_scan, downward_closed, random_case, rng};
use proptest::prelude::*;
use sparsequad::index::{
    bound_bd, bound_sg, bound_tp, cardinality_x, check_go_tail, combination_coefficient, enumerate_x, enumerate_y,
    in_y, max_box_volume, weighted_sum,
};
use sparsequad::{MultiIndex, WeightVector, WeightedIndexSet};

#[test]
fn membership_matches_box_scan() {
    let mut rng = rng(11);
    for _ in 0..1000 {
        let (w, q) = random_case(&mut rng, 8, 30.0, 0.7, 6.0, 2e4);
        let members = enumerate_x(&w, q).unwrap();
        assert_eq!(members, box_scan(&w, q), "w={:?} q={q}", w.entries());
        assert!(members.windows(2).all(|p| p[0] < p[1]));
        assert_eq!(cardinality_x(&w, q).unwrap(), members.len() as u128);
        assert!(downward_closed(&members, &w, q));
    }
}

#[test]
fn y_is_the_upper_layer_of_x() {
    let mut rng = rng(12);
    for _ in 0..200 {
        let (w, q) = random_case(&mut rng, 5, 20.0, 0.7, 4.0, 2e4);
        let x = enumerate_x(&w, q).unwrap();
        let y = enumerate_y(&w, q).unwrap();
        let expected: Vec<MultiIndex> = x
            .iter()
            .filter(|a| weighted_sum(a, &w) > q - w.l1() + 1e-9)
            .cloned()
            .collect();
        assert_eq!(y, expected);
    }
}

#[test]
fn bound_chain_holds() {
    let mut rng = rng(13);
    for _ in 0..1000 {
        let (w, q) = random_case(&mut rng, 8, 30.0, 0.7, 6.0, 1e5);
        let card = cardinality_x(&w, q).unwrap() as f64;
        let boxv = max_box_volume(&w, q).unwrap() as f64;
        let sg = bound_sg(&w, q);
        let bd = bound_bd(&w, q);
        let tp = bound_tp(&w, q);
        let slack = 1.0 + 1e-12;
        assert!(boxv <= card && card <= sg * slack && sg <= bd * slack && card <= tp, "w={:?} q={q}", w.entries());
    }
}

#[test]
fn isotropic_closed_forms() {
    for m in 1..=6usize {
        let w = WeightVector::isotropic(m);
        for q in 0..=12u64 {
            assert_eq!(cardinality_x(&w, q as f64).unwrap(), binomial(q + m as u64, m as u64));
        }
    }
    for m in 1..=4usize {
        let w = WeightVector::isotropic(m);
        for q in 0..=8u64 {
            for alpha in enumerate_y(&w, q as f64).unwrap() {
                let gap = q - alpha.l1();
                let expected = binomial(m as u64 - 1, gap) as i64 * if gap % 2 == 0 { 1 } else { -1 };
                let expected = if gap > m as u64 - 1 { 0 } else { expected };
                assert_eq!(combination_coefficient(&alpha, &w, q as f64).unwrap(), expected);
            }
        }
    }
}

/// The unpruned signed sum over all of {0,1}^m.
fn full_beta_sum(alpha: &MultiIndex, w: &WeightVector, q: f64) -> i64 {
    let m = w.dim();
    let dense = alpha.to_dense();
    (0u32..1 << m)
        .filter(|mask| {
            let shifted: Vec<u32> = dense.iter().enumerate().map(|(n, &a)| a + (mask >> n & 1)).collect();
            sparsequad::index::in_x(&MultiIndex::from_dense(&shifted), w, q)
        })
        .map(|mask| if mask.count_ones() % 2 == 0 { 1 } else { -1 })
        .sum()
}

#[test]
fn coefficients_match_unpruned_sum_and_interior_cancels() {
    let mut rng = rng(14);
    for _ in 0..200 {
        let (w, q) = random_case(&mut rng, 6, 15.0, 0.5, 3.0, 5e3);
        let set = WeightedIndexSet::new(w.clone(), q).unwrap();
        let total: i64 = set.coefficients().iter().sum();
        assert_eq!(total, 1);
        for (alpha, c) in set.combination_terms() {
            assert_eq!(c, full_beta_sum(alpha, &w, q));
        }
        for alpha in set.members_x().iter().filter(|a| !in_y(a, &w, q)) {
            assert_eq!(full_beta_sum(alpha, &w, q), 0);
            assert!(combination_coefficient(alpha, &w, q).is_err());
        }
    }
}

#[test]
fn go_tail_bound_holds_for_summable_weights() {
    let mut rng = rng(15);
    use rand::Rng;
    for _ in 0..100 {
        let r = rng.gen_range(1.5..4.0);
        let beta = rng.gen_range(1.05..r);
        let m = rng.gen_range(1..=3usize);
        let raw: Vec<f64> = (1..=m).map(|n| r * (n as f64).ln() + rng.gen_range(0.3..1.5)).collect();
        let w = WeightVector::new(raw).unwrap();
        let q = rng.gen_range(0.0..8.0);
        let bbox: Vec<u32> = w.entries().iter().map(|wn| (40.0 / wn).ceil() as u32).collect();
        let check = check_go_tail(&w, q, beta, &MultiIndex::from_dense(&bbox)).unwrap();
        assert!(check.holds(), "w={:?} q={q} beta={beta} {check:?}", w.entries());
    }
}

proptest! {
    #[test]
    fn enumeration_is_invariant_under_weight_permutation(
        raw in proptest::collection::vec(0.5f64..4.0, 1..5),
        q in 0.0f64..10.0,
        seed in any::<u64>(),
    ) {
        let mut shuffled = raw.clone();
        let mut rng = rng(seed);
        use rand::seq::SliceRandom;
        shuffled.shuffle(&mut rng);
        let a = WeightVector::new(raw).unwrap();
        let b = WeightVector::new(shuffled).unwrap();
        prop_assert_eq!(a.entries(), b.entries());
        prop_assert_eq!(enumerate_x(&a, q).unwrap(), enumerate_x(&b, q).unwrap());
    }

    #[test]
    fn cardinality_is_monotone_in_q(raw in proptest::collection::vec(0.5f64..4.0, 1..6), q in 0.0f64..12.0, dq in 0.0f64..3.0) {
        let w = WeightVector::new(raw).unwrap();
        prop_assert!(cardinality_x(&w, q).unwrap() <= cardinality_x(&w, q + dq).unwrap());
    }
}
