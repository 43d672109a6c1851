#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sparsequad::index::{bound_tp, in_x};
use sparsequad::{FnIntegrand, MultiIndex, WeightVector};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random weights in [lo, hi] with a level q <= q_max, shrunk until the
/// tensor bounding box holds at most `max_box` indices.
pub fn random_case(rng: &mut ChaCha8Rng, max_m: usize, q_max: f64, lo: f64, hi: f64, max_box: f64) -> (WeightVector, f64) {
    let m = rng.gen_range(1..=max_m);
    let raw: Vec<f64> = (0..m).map(|_| rng.gen_range(lo..=hi)).collect();
    let w = WeightVector::new(raw).unwrap();
    let mut q = rng.gen_range(0.0..=q_max);
    if rng.gen_bool(0.2) {
        q = q.round();
    }
    while bound_tp(&w, q) > max_box {
        q *= 0.8;
    }
    (w, q)
}

/// Every α in the box α_n <= floor(q / w_n) whose dense weighted sum is <= q.
pub fn box_scan(w: &WeightVector, q: f64) -> Vec<MultiIndex> {
    let limits: Vec<u32> = w.entries().iter().map(|&wn| (q / wn).floor() as u32 + 1).collect();
    let mut out = Vec::new();
    let mut current = vec![0u32; limits.len()];
    loop {
        let s: f64 = current.iter().zip(w.entries()).map(|(&a, &wn)| a as f64 * wn).sum();
        if s <= q + 1e-12 * q.max(1.0) {
            out.push(MultiIndex::from_dense(&current));
        }
        let mut axis = 0;
        loop {
            if axis == current.len() {
                out.sort();
                return out;
            }
            if current[axis] < limits[axis] {
                current[axis] += 1;
                break;
            }
            current[axis] = 0;
            axis += 1;
        }
    }
}

pub fn downward_closed(members: &[MultiIndex], w: &WeightVector, q: f64) -> bool {
    members.iter().all(|alpha| {
        alpha.entries().iter().all(|&(axis, level)| {
            let mut dense = alpha.to_dense();
            dense[axis as usize] = level - 1;
            in_x(&MultiIndex::from_dense(&dense), w, q)
        })
    })
}

pub fn binomial(n: u64, k: u64) -> u128 {
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Σ_k c_k Π_n y_n^{p_kn}.
#[derive(Debug, Clone)]
pub struct Polynomial {
    pub terms: Vec<(f64, Vec<u32>)>,
}

impl Polynomial {
    pub fn random(rng: &mut ChaCha8Rng, m: usize, terms: usize, max_degree: u32) -> Self {
        let terms = (0..terms)
            .map(|_| {
                let mut p = vec![0u32; m];
                let degree = rng.gen_range(0..=max_degree);
                for _ in 0..degree {
                    p[rng.gen_range(0..m)] += 1;
                }
                (rng.gen_range(-1.0..1.0), p)
            })
            .collect();
        Self { terms }
    }

    pub fn eval(&self, y: &[f64]) -> f64 {
        self.terms
            .iter()
            .map(|(c, p)| c * p.iter().zip(y).map(|(&k, &v)| v.powi(k as i32)).product::<f64>())
            .sum()
    }

    pub fn integrand(&self, m: usize) -> FnIntegrand<impl Fn(&[f64], &mut [f64]) + Sync + '_> {
        FnIntegrand::new(m, 1, move |y: &[f64], out: &mut [f64]| out[0] = self.eval(y))
    }
}
