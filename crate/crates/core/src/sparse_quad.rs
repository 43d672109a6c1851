//! Anisotropic sparse grid quadrature.
//!
//! The operator Σ_{α ∈ X} Δ_{α_1} ⊗ ... ⊗ Δ_{α_m} is assembled through the
//! combination technique Σ_{α ∈ Y} c_w(α) Q_α: every tensor rule Q_α adds
//! c_w(α) Π ω to each of its points, and coinciding points are merged by
//! their tuple of node-registry ids. A direct expansion of the Δ-sum is kept
//! alongside as an independent route to the same number.
//!
//! Multi-indices are in sorted-weight coordinates. Integrands always see points
//! in the original dimension order of the weight vector.

use std::collections::{HashMap, HashSet};

use crate::error::{Error, Result};
use crate::eval::weighted_reduce;
use crate::gauss1d::{level_to_count, NodeId, RuleFamily, MIDPOINT_ID};
use crate::index::{enumerate_x, enumerate_y, in_x, MultiIndex, WeightVector, WeightedIndexSet};
use crate::integrand::Integrand;
use crate::summation::{KahanSum, KahanVec};

/// A sparse grid point: `(axis, node id)` for every axis whose coordinate is
/// not the midpoint, in increasing axis order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PointKey(Vec<(u32, NodeId)>);

impl PointKey {
    pub fn entries(&self) -> &[(u32, NodeId)] {
        &self.0
    }
}

impl std::borrow::Borrow<[(u32, NodeId)]> for PointKey {
    fn borrow(&self) -> &[(u32, NodeId)] {
        &self.0
    }
}

/// Which index set a point union runs over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IndexSetKind {
    X,
    Y,
}

fn check_levels(alpha: &MultiIndex, family: &RuleFamily) -> Result<()> {
    match alpha.entries().iter().find(|e| e.1 as usize > family.max_level()) {
        Some(&(_, level)) => Err(Error::LevelOverflow {
            alpha: alpha.clone(),
            level: level as usize,
            max_level: family.max_level(),
        }),
        None => Ok(()),
    }
}

/// Visits every point of the tensor rule with per-axis levels `levels`
/// (sparse `(axis, level)` pairs; missing axes sit at the midpoint) as
/// `(key entries, product weight)`.
fn for_each_tensor_point<F>(levels: &[(u32, u32)], family: &RuleFamily, mut visit: F)
where
    F: FnMut(&[(u32, NodeId)], f64),
{
    let axes: Vec<(u32, &[NodeId], &[f64])> = levels
        .iter()
        .filter(|e| e.1 > 0)
        .map(|&(a, l)| {
            let l = l as usize;
            (a, family.node_ids(l), family.rule(l).weights())
        })
        .collect();
    let mut pos = vec![0usize; axes.len()];
    let mut key = Vec::with_capacity(axes.len());
    loop {
        key.clear();
        let mut weight = 1.0;
        for (k, (axis, ids, ws)) in axes.iter().enumerate() {
            let id = ids[pos[k]];
            if id != MIDPOINT_ID {
                key.push((*axis, id));
            }
            weight *= ws[pos[k]];
        }
        visit(&key, weight);
        let mut k = 0;
        loop {
            if k == axes.len() {
                return;
            }
            pos[k] += 1;
            if pos[k] < axes[k].1.len() {
                break;
            }
            pos[k] = 0;
            k += 1;
        }
    }
}

/// Deduplicated sparse grid points with accumulated weights.
#[derive(Debug, Clone)]
pub struct SparseQuadrature {
    weights_vector: WeightVector,
    level: f64,
    keys: Vec<PointKey>,
    point_weights: Vec<f64>,
    node_values: Vec<f64>,
    union_len: usize,
    tensor_point_total: u128,
}

impl SparseQuadrature {
    /// Builds the combination-technique quadrature for X_w(q, m).
    pub fn build(w: &WeightVector, q: f64, family: &RuleFamily) -> Result<Self> {
        let set = WeightedIndexSet::new(w.clone(), q)?;
        Self::from_index_set(&set, family)
    }

    pub fn from_index_set(set: &WeightedIndexSet, family: &RuleFamily) -> Result<Self> {
        for alpha in set.members_y() {
            check_levels(alpha, family)?;
        }
        let mut acc: HashMap<PointKey, KahanSum> = HashMap::new();
        let mut tensor_point_total = 0u128;
        for (alpha, c) in set.combination_terms() {
            tensor_point_total += alpha
                .entries()
                .iter()
                .map(|e| level_to_count(e.1 as usize) as u128)
                .product::<u128>();
            let c = c as f64;
            for_each_tensor_point(alpha.entries(), family, |key, weight| {
                // c = 0 terms still register their points in the Y-union
                let slot = match acc.get_mut(key) {
                    Some(slot) => slot,
                    None => acc.entry(PointKey(key.to_vec())).or_default(),
                };
                if c != 0.0 {
                    slot.add(c * weight);
                }
            });
        }
        let union_len = acc.len();
        let mut points: Vec<(PointKey, f64)> = acc
            .into_iter()
            .map(|(k, s)| (k, s.value()))
            .filter(|(_, v)| *v != 0.0)
            .collect();
        points.sort_by(|a, b| a.0.cmp(&b.0));
        let (keys, point_weights) = points.into_iter().unzip();
        Ok(Self {
            weights_vector: set.weights().clone(),
            level: set.level(),
            keys,
            point_weights,
            node_values: (0..family.registry_len())
                .map(|id| family.node_value(id as NodeId))
                .collect(),
            union_len,
            tensor_point_total,
        })
    }

    pub fn dim(&self) -> usize {
        self.weights_vector.dim()
    }

    pub fn weight_vector(&self) -> &WeightVector {
        &self.weights_vector
    }

    pub fn level(&self) -> f64 {
        self.level
    }

    /// Number of points with nonzero weight (function evaluations needed).
    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    /// Size of the union of all tensor grids over Y, before dropping points
    /// whose weights cancelled to zero.
    pub fn union_len(&self) -> usize {
        self.union_len
    }

    /// Σ_{α ∈ Y} Π_n N_{α_n}, the point count without deduplication.
    pub fn tensor_point_total(&self) -> u128 {
        self.tensor_point_total
    }

    pub fn keys(&self) -> &[PointKey] {
        &self.keys
    }

    pub fn weights(&self) -> &[f64] {
        &self.point_weights
    }

    pub fn weight_sum(&self) -> f64 {
        crate::summation::compensated_sum(self.point_weights.iter().copied())
    }

    /// Writes the `i`-th point, in original dimension order, into `y`.
    pub fn fill_point(&self, i: usize, y: &mut [f64]) {
        y.fill(0.0);
        let order = self.weights_vector.order();
        for &(axis, id) in self.keys[i].entries() {
            y[order[axis as usize]] = self.node_values[id as usize];
        }
    }

    pub fn point(&self, i: usize) -> Vec<f64> {
        let mut y = vec![0.0; self.dim()];
        self.fill_point(i, &mut y);
        y
    }

    /// Σ_i weight_i f(y_i), reduced in sorted key order.
    pub fn apply(&self, f: &dyn Integrand) -> Result<Vec<f64>> {
        if f.dim_in() != self.dim() {
            return Err(Error::invalid(format!(
                "integrand expects {} inputs, quadrature has dimension {}",
                f.dim_in(),
                self.dim()
            )));
        }
        weighted_reduce(
            f,
            self.len(),
            |i, y| self.fill_point(i, y),
            |i| self.point_weights[i],
            &[],
            |_, _| {},
        )
    }

    /// Applies the quadrature to the monomial Π_n y_n^{p_n} (`p` in original
    /// dimension order).
    pub fn apply_monomial(&self, p: &[u32]) -> f64 {
        assert_eq!(p.len(), self.dim());
        let mut acc = KahanSum::new();
        let mut y = vec![0.0; self.dim()];
        for i in 0..self.len() {
            self.fill_point(i, &mut y);
            let v: f64 = y.iter().zip(p).map(|(&x, &k)| x.powi(k as i32)).product();
            acc.add(self.point_weights[i] * v);
        }
        acc.value()
    }
}

/// Convenience wrapper for [`SparseQuadrature::build`].
pub fn build_combination_quadrature(
    w: &WeightVector,
    q: f64,
    family: &RuleFamily,
) -> Result<SparseQuadrature> {
    SparseQuadrature::build(w, q, family)
}

/// Σ_{α ∈ X} (Δ_{α_1} ⊗ ... ⊗ Δ_{α_m}) f with every Δ_j = Q_j - Q_{j-1}
/// expanded into signed tensor rules. No point merging; every tensor rule is
/// evaluated on its own.
pub fn apply_direct_delta(
    w: &WeightVector,
    q: f64,
    family: &RuleFamily,
    f: &dyn Integrand,
) -> Result<Vec<f64>> {
    if f.dim_in() != w.dim() {
        return Err(Error::invalid(format!(
            "integrand expects {} inputs, weights have dimension {}",
            f.dim_in(),
            w.dim()
        )));
    }
    let members = enumerate_x(w, q)?;
    for alpha in &members {
        check_levels(alpha, family)?;
    }
    let order = w.order();
    let mut total = KahanVec::zeros(f.dim_out());
    let mut y = vec![0.0; w.dim()];
    let mut out = vec![0.0; f.dim_out()];
    let mut failure = None;
    for alpha in &members {
        let support = alpha.entries();
        for mask in 0u64..(1u64 << support.len()) {
            let sign = if mask.count_ones() % 2 == 0 { 1.0 } else { -1.0 };
            let levels: Vec<(u32, u32)> = support
                .iter()
                .enumerate()
                .map(|(k, &(a, l))| (a, l - ((mask >> k) & 1) as u32))
                .collect();
            for_each_tensor_point(&levels, family, |key, weight| {
                if failure.is_some() {
                    return;
                }
                y.fill(0.0);
                for &(axis, id) in key {
                    y[order[axis as usize]] = family.node_value(id);
                }
                if let Err(e) = f.evaluate(&y, &mut out) {
                    failure = Some(e);
                    return;
                }
                if out.iter().any(|v| !v.is_finite()) {
                    failure = Some(Error::NonFinite { point: y.clone() });
                    return;
                }
                total.add_scaled(sign * weight, &out);
            });
            if let Some(e) = failure.take() {
                return Err(e);
            }
        }
    }
    Ok(total.values())
}

/// Number of distinct points in ∪_{α ∈ set} θ_{α_1} × ... × θ_{α_m}.
pub fn count_distinct_points(
    w: &WeightVector,
    q: f64,
    family: &RuleFamily,
    over: IndexSetKind,
) -> Result<usize> {
    let members = match over {
        IndexSetKind::X => enumerate_x(w, q)?,
        IndexSetKind::Y => enumerate_y(w, q)?,
    };
    let mut seen: HashSet<Vec<(u32, NodeId)>> = HashSet::new();
    for alpha in &members {
        check_levels(alpha, family)?;
        for_each_tensor_point(alpha.entries(), family, |key, _| {
            if !seen.contains(key) {
                seen.insert(key.to_vec());
            }
        });
    }
    Ok(seen.len())
}

/// |A_w(q, m) y^p - ∫ y^p| for α ∈ X and p inside the degree box of α
/// (p_n <= 2 N_{α_n} - 1). Both `alpha` and `p` are in sorted-weight coordinates.
pub fn exactness_certificate(
    w: &WeightVector,
    q: f64,
    family: &RuleFamily,
    alpha: &MultiIndex,
    p: &MultiIndex,
) -> Result<f64> {
    if alpha.dim() != w.dim() || p.dim() != w.dim() {
        return Err(Error::invalid("alpha and p must match the weight dimension"));
    }
    if !in_x(alpha, w, q) {
        return Err(Error::invalid(format!("index {alpha} is not in X_w(q={q})")));
    }
    for n in 0..w.dim() {
        let limit = 2 * level_to_count(alpha.get(n) as usize) as u32 - 1;
        if p.get(n) > limit {
            return Err(Error::invalid(format!(
                "degree {} on axis {} exceeds the certified degree {limit} of {alpha}",
                p.get(n),
                n + 1
            )));
        }
    }
    let quad = SparseQuadrature::build(w, q, family)?;
    let p_orig = w.to_original(&p.to_dense());
    let exact: f64 = p_orig
        .iter()
        .map(|&k| if k % 2 == 0 { 1.0 / (k as f64 + 1.0) } else { 0.0 })
        .product();
    Ok((quad.apply_monomial(&p_orig) - exact).abs())
}
