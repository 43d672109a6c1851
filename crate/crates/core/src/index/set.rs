//! Weighted simplex index sets
//!
//! X_w(q, m) = { α : Σ α_n w_n <= q } and its boundary layer
//! Y_w(q, m) = { α ∈ X : Σ α_n w_n > q - ‖w‖_1 }, plus the integer
//! combination coefficients attached to Y.
//!
//! All weighted sums are accumulated in increasing axis order with the same
//! floating-point operations, so membership of α, α + e_n, α + β and α + 1
//! is decided consistently wherever it is evaluated.

use std::collections::HashMap;

use super::{MultiIndex, WeightVector};
use crate::error::{Error, Result};

const BUDGET_SLACK: f64 = 8.0 * f64::EPSILON;

/// Membership predicate `sum <= q`, with ties counted as members and a
/// relative slack of a few ulps.
#[inline]
pub fn fits(sum: f64, q: f64) -> bool {
    sum <= q + BUDGET_SLACK * q.abs().max(sum.abs())
}

pub(crate) fn check_level(q: f64) -> Result<()> {
    if q.is_finite() && q >= 0.0 {
        Ok(())
    } else {
        Err(Error::invalid(format!("level q = {q} must be finite and nonnegative")))
    }
}

fn check_dim(alpha: &MultiIndex, w: &WeightVector) -> Result<()> {
    if alpha.dim() == w.dim() {
        Ok(())
    } else {
        Err(Error::invalid(format!(
            "index {alpha} has dimension {}, weights have dimension {}",
            alpha.dim(),
            w.dim()
        )))
    }
}

/// Σ α_n w_n over sorted weights.
pub fn weighted_sum(alpha: &MultiIndex, w: &WeightVector) -> f64 {
    let w = w.entries();
    alpha
        .entries()
        .iter()
        .fold(0.0, |acc, &(a, l)| acc + l as f64 * w[a as usize])
}

/// Σ (α_n + β_n) w_n where β is the indicator of `shift_axes` (strictly increasing).
fn shifted_sum(alpha: &MultiIndex, shift_axes: &[usize], w: &[f64]) -> f64 {
    let entries = alpha.entries();
    let (mut i, mut j) = (0, 0);
    let mut acc = 0.0;
    while i < entries.len() || j < shift_axes.len() {
        let ea = entries.get(i).map(|e| e.0 as usize);
        let sa = shift_axes.get(j).copied();
        let axis = match (ea, sa) {
            (Some(x), Some(y)) => x.min(y),
            (Some(x), None) => x,
            (None, Some(y)) => y,
            (None, None) => unreachable!(),
        };
        let mut level = 0u32;
        if ea == Some(axis) {
            level += entries[i].1;
            i += 1;
        }
        if sa == Some(axis) {
            level += 1;
            j += 1;
        }
        acc += level as f64 * w[axis];
    }
    acc
}

/// Σ (α_n + 1) w_n over all axes.
fn plus_one_sum(alpha: &MultiIndex, w: &[f64]) -> f64 {
    let mut next = alpha.entries().iter().peekable();
    let mut acc = 0.0;
    for (axis, &wn) in w.iter().enumerate() {
        let level = match next.peek() {
            Some(&&(a, l)) if a as usize == axis => {
                next.next();
                l + 1
            }
            _ => 1,
        };
        acc += level as f64 * wn;
    }
    acc
}

pub fn in_x(alpha: &MultiIndex, w: &WeightVector, q: f64) -> bool {
    fits(weighted_sum(alpha, w), q)
}

pub fn in_y(alpha: &MultiIndex, w: &WeightVector, q: f64) -> bool {
    in_x(alpha, w, q) && !fits(plus_one_sum(alpha, w.entries()), q)
}

/// Lexicographically sorted members of X_w(q, m).
pub fn enumerate_x(w: &WeightVector, q: f64) -> Result<Vec<MultiIndex>> {
    check_level(q)?;
    let mut out = Vec::new();
    let mut current = Vec::new();
    enumerate_rec(w.entries(), q, 0, 0.0, &mut current, &mut out);
    Ok(out)
}

fn enumerate_rec(
    w: &[f64],
    q: f64,
    axis: usize,
    sum: f64,
    current: &mut Vec<(u32, u32)>,
    out: &mut Vec<MultiIndex>,
) {
    // weights ascend, so once the next unit step on `axis` no longer fits,
    // every remaining axis is forced to zero
    if axis == w.len() || !fits(sum + w[axis], q) {
        out.push(MultiIndex::from_entries(w.len(), current.clone()));
        return;
    }
    enumerate_rec(w, q, axis + 1, sum, current, out);
    let mut level = 1u32;
    loop {
        let s = sum + level as f64 * w[axis];
        if !fits(s, q) {
            break;
        }
        current.push((axis as u32, level));
        enumerate_rec(w, q, axis + 1, s, current, out);
        current.pop();
        level += 1;
    }
}

/// Lexicographically sorted members of Y_w(q, m).
pub fn enumerate_y(w: &WeightVector, q: f64) -> Result<Vec<MultiIndex>> {
    let wn = w.entries();
    Ok(enumerate_x(w, q)?
        .into_iter()
        .filter(|a| !fits(plus_one_sum(a, wn), q))
        .collect())
}

/// Combination coefficient c_w(α) = Σ_{β ∈ {0,1}^m, α+β ∈ X} (-1)^{|β|}.
///
/// Only axes with α + e_n ∈ X can carry β_n = 1, and supersets of a
/// non-fitting β are skipped, so the work is bounded by the number of fitting
/// shifts rather than 2^m.
pub fn combination_coefficient(alpha: &MultiIndex, w: &WeightVector, q: f64) -> Result<i64> {
    check_level(q)?;
    check_dim(alpha, w)?;
    if !in_y(alpha, w, q) {
        return Err(Error::invalid(format!(
            "index {alpha} is not in Y_w(q={q}, m={})",
            w.dim()
        )));
    }
    Ok(coefficient_unchecked(alpha, w.entries(), q))
}

pub(crate) fn coefficient_unchecked(alpha: &MultiIndex, w: &[f64], q: f64) -> i64 {
    let active: Vec<usize> = (0..w.len())
        .filter(|&n| fits(shifted_sum(alpha, &[n], w), q))
        .collect();
    let mut beta = Vec::with_capacity(active.len());
    signed_subset_count(alpha, w, q, &active, 0, &mut beta, 1)
}

fn signed_subset_count(
    alpha: &MultiIndex,
    w: &[f64],
    q: f64,
    active: &[usize],
    start: usize,
    beta: &mut Vec<usize>,
    sign: i64,
) -> i64 {
    let mut total = sign;
    for i in start..active.len() {
        beta.push(active[i]);
        if fits(shifted_sum(alpha, beta, w), q) {
            total += signed_subset_count(alpha, w, q, active, i + 1, beta, -sign);
        }
        beta.pop();
    }
    total
}

/// #X_w(q, m) by the dimension recursion
/// #X(q, k) = Σ_j #X(q - j w_k, k - 1), memoized on (budget, k).
pub fn cardinality_x(w: &WeightVector, q: f64) -> Result<u128> {
    check_level(q)?;
    let mut memo = HashMap::new();
    Ok(count_rec(w.entries(), q, w.dim(), &mut memo))
}

fn count_rec(w: &[f64], budget: f64, k: usize, memo: &mut HashMap<(i64, usize), u128>) -> u128 {
    // axes above the last one whose weight fits contribute only level 0
    let k = w[..k].partition_point(|&wn| fits(wn, budget));
    if k == 0 {
        return 1;
    }
    let key = ((budget * 1e12).round() as i64, k);
    if let Some(&c) = memo.get(&key) {
        return c;
    }
    let wk = w[k - 1];
    let mut total = 0u128;
    let mut j = 0u32;
    loop {
        let used = j as f64 * wk;
        if !fits(used, budget) {
            break;
        }
        total += count_rec(w, (budget - used).max(0.0), k - 1, memo);
        j += 1;
    }
    memo.insert(key, total);
    total
}

/// X_w(q, m), Y_w(q, m) and the coefficients on Y for one weight vector and level.
#[derive(Debug, Clone)]
pub struct WeightedIndexSet {
    weights: WeightVector,
    level: f64,
    members_x: Vec<MultiIndex>,
    members_y: Vec<MultiIndex>,
    coefficients: Vec<i64>,
}

impl WeightedIndexSet {
    pub fn new(weights: WeightVector, level: f64) -> Result<Self> {
        let members_x = enumerate_x(&weights, level)?;
        let wn = weights.entries();
        let members_y: Vec<MultiIndex> = members_x
            .iter()
            .filter(|a| !fits(plus_one_sum(a, wn), level))
            .cloned()
            .collect();
        let coefficients = members_y
            .iter()
            .map(|a| coefficient_unchecked(a, wn, level))
            .collect();
        Ok(Self {
            weights,
            level,
            members_x,
            members_y,
            coefficients,
        })
    }

    pub fn weights(&self) -> &WeightVector {
        &self.weights
    }

    pub fn level(&self) -> f64 {
        self.level
    }

    pub fn dim(&self) -> usize {
        self.weights.dim()
    }

    pub fn members_x(&self) -> &[MultiIndex] {
        &self.members_x
    }

    pub fn members_y(&self) -> &[MultiIndex] {
        &self.members_y
    }

    /// Coefficients aligned with [`members_y`](Self::members_y).
    pub fn coefficients(&self) -> &[i64] {
        &self.coefficients
    }

    pub fn combination_terms(&self) -> impl Iterator<Item = (&MultiIndex, i64)> {
        self.members_y.iter().zip(self.coefficients.iter().copied())
    }

    /// Largest 1D level appearing in X.
    pub fn max_level(&self) -> usize {
        self.members_x
            .iter()
            .map(|a| a.max_level() as usize)
            .max()
            .unwrap_or(0)
    }
}
