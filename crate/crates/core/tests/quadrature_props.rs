mod common;

use common::{random_case, rng, Polynomial};
use rand::Rng;
use sparsequad::index::{cardinality_x, cost_exact, enumerate_x};
use sparsequad::{
    apply_direct_delta, build_family, count_distinct_points, exactness_certificate, level_to_count, scalar_fn,
    FnIntegrand, IndexSetKind, Integrand, MultiIndex, SparseQuadrature, WeightVector,
};

#[test]
fn combination_equals_telescoping() {
    let mut rng = rng(21);
    let family = build_family(40);
    for _ in 0..50 {
        let (w, q) = random_case(&mut rng, 4, 10.0, 0.5, 3.0, 3e3);
        let poly = Polynomial::random(&mut rng, w.dim(), 6, 7);
        let f = poly.integrand(w.dim());
        let quad = SparseQuadrature::build(&w, q, &family).unwrap();
        let a = quad.apply(&f).unwrap()[0];
        let b = apply_direct_delta(&w, q, &family, &f).unwrap()[0];
        assert!((a - b).abs() <= 1e-12 * (1.0 + a.abs()), "w={:?} q={q} {a} {b}", w.entries());
    }
}

#[test]
fn zero_level_is_the_midpoint_evaluation() {
    let family = build_family(4);
    let w = WeightVector::new(vec![1.0, 2.0, 0.5]).unwrap();
    let f = scalar_fn(3, |y| (1.0 + y[0] + 2.0 * y[1] * y[2]).exp());
    assert_eq!(apply_direct_delta(&w, 0.0, &family, &f).unwrap()[0], 1f64.exp());
    let iso = WeightVector::isotropic(2);
    let odd = apply_direct_delta(&iso, 1.0, &family, &scalar_fn(2, |y| y[0])).unwrap()[0];
    assert_eq!(odd, 0.0);
}

#[test]
fn weights_sum_to_one_and_keys_are_distinct() {
    let mut rng = rng(22);
    let family = build_family(60);
    for _ in 0..200 {
        let (w, q) = random_case(&mut rng, 6, 20.0, 0.5, 4.0, 1e4);
        let quad = SparseQuadrature::build(&w, q, &family).unwrap();
        assert!((quad.weight_sum() - 1.0).abs() <= 1e-12);
        assert!(quad.keys().windows(2).all(|p| p[0] < p[1]));
        assert_eq!(quad.union_len(), count_distinct_points(&w, q, &family, IndexSetKind::Y).unwrap());
    }
}

#[test]
fn randomized_exactness_certificates() {
    let mut rng = rng(23);
    let family = build_family(60);
    for _ in 0..200 {
        let (w, q) = random_case(&mut rng, 4, 12.0, 0.5, 3.0, 3e3);
        let members = enumerate_x(&w, q).unwrap();
        let alpha = &members[rng.gen_range(0..members.len())];
        let p: Vec<u32> = alpha
            .to_dense()
            .iter()
            .map(|&a| rng.gen_range(0..=2 * level_to_count(a as usize) as u32 - 1))
            .collect();
        let dev = exactness_certificate(&w, q, &family, alpha, &MultiIndex::from_dense(&p)).unwrap();
        assert!(dev <= 1e-13, "w={:?} q={q} alpha={alpha} p={p:?} dev={dev:e}", w.entries());
    }
}

#[test]
fn cost_chain_and_x_union_identity() {
    let family = build_family(40);
    for m in 1..=3 {
        let w = WeightVector::isotropic(m);
        for q in 0..=12 {
            let q = q as f64;
            let x_union = count_distinct_points(&w, q, &family, IndexSetKind::X).unwrap();
            assert_eq!(x_union as u128, cost_exact(&w, q, &family).unwrap(), "m={m} q={q}");
        }
    }
    let mut rng = rng(24);
    for _ in 0..100 {
        let (w, q) = random_case(&mut rng, 4, 15.0, 0.5, 4.0, 2e4);
        let x_union = count_distinct_points(&w, q, &family, IndexSetKind::X).unwrap();
        assert_eq!(x_union as u128, cost_exact(&w, q, &family).unwrap());
        let quad = SparseQuadrature::build(&w, q, &family).unwrap();
        let card = cardinality_x(&w, q).unwrap();
        assert!(quad.len() <= quad.union_len());
        assert!(quad.union_len() as u128 <= quad.tensor_point_total());
        assert!(quad.tensor_point_total() <= card * card);
    }
}

#[test]
fn apply_is_bit_reproducible_and_vector_valued() {
    let family = build_family(40);
    let w = WeightVector::new(vec![0.9, 1.7, 2.2, 3.0]).unwrap();
    let quad = SparseQuadrature::build(&w, 9.0, &family).unwrap();
    let f = FnIntegrand::new(4, 3, |y: &[f64], out: &mut [f64]| {
        out[0] = (y[0] * y[1]).sin();
        out[1] = 1.0 / (2.0 + y[2] + 0.5 * y[3]);
        out[2] = y.iter().map(|v| v * v).sum();
    });
    let a = quad.apply(&f).unwrap();
    let b = quad.apply(&f).unwrap();
    assert_eq!(a, b);
    for k in 0..3 {
        let single = scalar_fn(4, |y| {
            let mut out = [0.0; 3];
            f.evaluate(y, &mut out).unwrap();
            out[k]
        });
        assert_eq!(quad.apply(&single).unwrap()[0], a[k]);
    }
    assert!((a[2] - 4.0 / 3.0).abs() < 1e-13);
}
