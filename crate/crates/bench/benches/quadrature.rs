use criterion::{black_box, criterion_group, criterion_main, Criterion};

use sparsequad::index::enumerate_x;
use sparsequad::model::AnalyticProblem;
use sparsequad::{build_family, SparseQuadrature, WeightVector};

fn analytic_weights(r: f64, m: usize) -> WeightVector {
    AnalyticProblem::new(r, m).unwrap().profile().weights().clone()
}

fn enumeration(c: &mut Criterion) {
    let w = analytic_weights(2.0, 10);
    c.bench_function("enumerate_x r=2 m=10 q=18", |b| {
        b.iter(|| enumerate_x(black_box(&w), 18.0).unwrap().len())
    });
    let iso = WeightVector::isotropic(6);
    c.bench_function("enumerate_x isotropic m=6 q=10", |b| {
        b.iter(|| enumerate_x(black_box(&iso), 10.0).unwrap().len())
    });
}

fn build(c: &mut Criterion) {
    let w = analytic_weights(3.0, 10);
    let family = build_family(30);
    c.bench_function("build r=3 m=10 q=20", |b| {
        b.iter(|| SparseQuadrature::build(black_box(&w), 20.0, &family).unwrap().len())
    });
}

fn apply(c: &mut Criterion) {
    let problem = AnalyticProblem::new(3.0, 10).unwrap();
    let w = problem.profile().weights().clone();
    let family = build_family(30);
    let quad = SparseQuadrature::build(&w, 20.0, &family).unwrap();
    c.bench_function("apply analytic r=3 m=10 q=20", |b| {
        b.iter(|| quad.apply(black_box(&problem)).unwrap())
    });
}

criterion_group!(benches, enumeration, build, apply);
criterion_main!(benches);
