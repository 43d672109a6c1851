//! Cardinality bounds, cost formulas and the tail estimate for weighted index sets.

use super::set::{cardinality_x, check_level, enumerate_x, fits, weighted_sum};
use super::{MultiIndex, WeightVector};
use crate::error::{Error, Result};
use crate::gauss1d::RuleFamily;

/// Π_{n=1..m} (q / (n w_n) + 1), with w sorted ascending.
pub fn bound_sg(w: &WeightVector, q: f64) -> f64 {
    w.entries()
        .iter()
        .enumerate()
        .map(|(i, &wn)| q / ((i + 1) as f64 * wn) + 1.0)
        .product()
}

/// Beged-Dov bound Π_{n=1..m} (q + ‖w‖_1) / (n w_n).
pub fn bound_bd(w: &WeightVector, q: f64) -> f64 {
    let top = q + w.l1();
    w.entries()
        .iter()
        .enumerate()
        .map(|(i, &wn)| top / ((i + 1) as f64 * wn))
        .product()
}

/// Largest k with k * w <= q under the membership predicate.
fn max_steps(wn: f64, q: f64) -> u64 {
    let mut k = (q / wn).floor().max(0.0) as u64;
    while fits((k + 1) as f64 * wn, q) {
        k += 1;
    }
    while k > 0 && !fits(k as f64 * wn, q) {
        k -= 1;
    }
    k
}

/// Tensor-product bound Π_{n=1..m} (⌊q / w_n⌋ + 1).
///
/// Returned as `f64`: for realistic dimensions the product leaves the range of
/// every integer type long before it stops being useful on a log plot.
pub fn bound_tp(w: &WeightVector, q: f64) -> f64 {
    w.entries()
        .iter()
        .map(|&wn| (max_steps(wn, q) + 1) as f64)
        .product()
}

/// Simplified log-log bound log(m)^{q/r} (constant taken as 1).
pub fn bound_loglog(q: f64, m: usize, r: f64) -> Result<f64> {
    if m < 3 {
        return Err(Error::invalid(format!("log-log bound needs m >= 3, got {m}")));
    }
    if !(r > 1.0) {
        return Err(Error::invalid(format!("log-log bound needs r > 1, got {r}")));
    }
    Ok((m as f64).ln().powf(q / r))
}

/// Exact number of function evaluations Σ_{α ∈ X} Π_n ζ_{α_n}.
pub fn cost_exact(w: &WeightVector, q: f64, family: &RuleFamily) -> Result<u128> {
    let mut total = 0u128;
    for alpha in enumerate_x(w, q)? {
        let mut term = 1u128;
        for &(_, level) in alpha.entries() {
            let level = level as usize;
            if level > family.max_level() {
                return Err(Error::LevelOverflow {
                    alpha: alpha.clone(),
                    level,
                    max_level: family.max_level(),
                });
            }
            term *= family.new_point_count(level) as u128;
            if term == 0 {
                break;
            }
        }
        total += term;
    }
    Ok(total)
}

/// The crude cost bound (#X)^2.
pub fn cost_bound_sq(w: &WeightVector, q: f64) -> Result<u128> {
    let c = cardinality_x(w, q)?;
    Ok(c.saturating_mul(c))
}

/// max_{α ∈ X} Π_n (α_n + 1), the largest box contained in X.
pub fn max_box_volume(w: &WeightVector, q: f64) -> Result<u128> {
    Ok(enumerate_x(w, q)?
        .iter()
        .map(|a| a.entries().iter().map(|e| e.1 as u128 + 1).product::<u128>())
        .max()
        .unwrap_or(1))
}

fn check_beta(beta: f64) -> Result<()> {
    if beta.is_finite() && beta > 1.0 {
        Ok(())
    } else {
        Err(Error::invalid(format!("beta = {beta} must be a finite number > 1")))
    }
}

/// M(w, β) = Σ_n 1 / (exp(w_n / β) - 1).
pub fn go_constant(w: &WeightVector, beta: f64) -> Result<f64> {
    check_beta(beta)?;
    Ok(w.entries().iter().map(|&wn| 1.0 / (wn / beta).exp_m1()).sum())
}

/// Tail of Σ exp(-Σ w_n α_n) outside X, truncated to the box 0 <= α <= `bbox`,
/// together with the bound (1/β) exp(β M) (#X)^{-(β-1)}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailCheck {
    pub tail_sum: f64,
    pub bound: f64,
}

impl TailCheck {
    pub fn holds(&self) -> bool {
        self.tail_sum <= self.bound
    }
}

const MAX_BOX_VOLUME: f64 = 1e8;

pub fn check_go_tail(w: &WeightVector, q: f64, beta: f64, bbox: &MultiIndex) -> Result<TailCheck> {
    check_level(q)?;
    check_beta(beta)?;
    if bbox.dim() != w.dim() {
        return Err(Error::invalid(format!(
            "box {bbox} has dimension {}, weights have dimension {}",
            bbox.dim(),
            w.dim()
        )));
    }
    let limits = bbox.to_dense();
    let volume: f64 = limits.iter().map(|&b| b as f64 + 1.0).product();
    if volume > MAX_BOX_VOLUME {
        return Err(Error::invalid(format!(
            "box {bbox} holds {volume:e} indices, more than {MAX_BOX_VOLUME:e}"
        )));
    }

    let mut tail = crate::summation::KahanSum::new();
    let mut current = vec![0u32; limits.len()];
    loop {
        let alpha = MultiIndex::from_dense(&current);
        let s = weighted_sum(&alpha, w);
        if !fits(s, q) {
            tail.add((-s).exp());
        }
        // odometer increment
        let mut axis = 0;
        loop {
            if axis == current.len() {
                let card = cardinality_x(w, q)? as f64;
                let m_const = go_constant(w, beta)?;
                let bound = (beta * m_const).exp() / beta * card.powf(-(beta - 1.0));
                return Ok(TailCheck {
                    tail_sum: tail.value(),
                    bound,
                });
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
