//! Leveled Gauss-Legendre rules on [-1, 1] against the normalized measure dy/2.
//!
//! Nodes are computed once for the negative half of the interval and mirrored,
//! so symmetric pairs are exact negations and the middle node of an odd rule
//! is exactly `0.0`. That makes node coincidence across levels an exact
//! comparison, which the node registry relies on.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::num::NonZeroUsize;

/// An N-point Gauss-Legendre rule with weights summing to one.
#[derive(Debug, Clone, PartialEq)]
pub struct UnivariateRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl UnivariateRule {
    pub fn count(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Applies the rule to a univariate function.
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        crate::summation::compensated_sum(
            self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)),
        )
    }
}

/// Value and derivative of the degree-n Legendre polynomial at `x`.
fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p_prev = 1.0;
    let mut p = x;
    for k in 2..=n {
        let kf = k as f64;
        let p_next = ((2.0 * kf - 1.0) * x * p - (kf - 1.0) * p_prev) / kf;
        p_prev = p;
        p = p_next;
    }
    let nf = n as f64;
    let dp = nf * (x * p - p_prev) / (x * x - 1.0);
    (p, dp)
}

/// Root of P_n near the standard asymptotic guess for the `i`-th root (1-based,
/// counted from the right end of the interval).
fn newton_root(n: usize, i: usize) -> f64 {
    let nf = n as f64;
    let mut x = (PI * (i as f64 - 0.25) / (nf + 0.5)).cos();
    for _ in 0..100 {
        let (p, dp) = legendre_with_derivative(n, x);
        let dx = p / dp;
        x -= dx;
        if dx.abs() <= 1e-16 * x.abs().max(1.0) {
            break;
        }
    }
    // one polishing step after the increment has reached rounding level
    let (p, dp) = legendre_with_derivative(n, x);
    x - p / dp
}

/// Normalized weight 1 / ((1 - x^2) P_n'(x)^2) of the node `x`.
fn node_weight(n: usize, x: f64) -> f64 {
    if n == 1 {
        return 1.0;
    }
    let (_, dp) = legendre_with_derivative(n, x);
    1.0 / ((1.0 - x * x) * dp * dp)
}

/// The `n`-point Gauss-Legendre rule with weights normalized to sum to one.
pub fn gauss_legendre_rule(n: NonZeroUsize) -> UnivariateRule {
    let n = n.get();
    let half = n / 2;
    // positive roots in decreasing order
    let positive: Vec<f64> = (1..=half).map(|i| newton_root(n, i)).collect();

    let mut nodes = Vec::with_capacity(n);
    nodes.extend(positive.iter().map(|&x| -x));
    if n % 2 == 1 {
        nodes.push(0.0);
    }
    nodes.extend(positive.iter().rev().copied());

    let half_weights: Vec<f64> = positive.iter().map(|&x| node_weight(n, x)).collect();
    let mut weights = Vec::with_capacity(n);
    weights.extend(half_weights.iter().copied());
    if n % 2 == 1 {
        weights.push(node_weight(n, 0.0));
    }
    weights.extend(half_weights.iter().rev().copied());

    let total = crate::summation::compensated_sum(weights.iter().copied());
    for w in &mut weights {
        *w /= total;
    }
    UnivariateRule { nodes, weights }
}

/// Number of points N_j = ceil((j + 2) / 2) of the level-`j` rule.
pub fn level_to_count(level: usize) -> usize {
    (level + 3) / 2
}

/// Identifier of a distinct node value in a [`RuleFamily`].
pub type NodeId = u32;

/// Registry id of the midpoint 0, shared by the level-0 rule and every odd rule.
pub const MIDPOINT_ID: NodeId = 0;

/// Where a registered node value first appears.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NodeOrigin {
    pub level: usize,
    pub position: usize,
}

/// Gauss-Legendre rules for levels `0..=max_level`, together with a registry
/// assigning one id to every distinct node value across levels.
#[derive(Debug, Clone)]
pub struct RuleFamily {
    rules: Vec<UnivariateRule>,
    node_ids: Vec<Vec<NodeId>>,
    new_point_counts: Vec<usize>,
    registry_values: Vec<f64>,
    registry_origins: Vec<NodeOrigin>,
}

impl RuleFamily {
    pub fn new(max_level: usize) -> Self {
        let mut by_count: HashMap<usize, UnivariateRule> = HashMap::new();
        let mut lookup: HashMap<u64, NodeId> = HashMap::new();
        let mut family = RuleFamily {
            rules: Vec::with_capacity(max_level + 1),
            node_ids: Vec::with_capacity(max_level + 1),
            new_point_counts: Vec::with_capacity(max_level + 1),
            registry_values: Vec::new(),
            registry_origins: Vec::new(),
        };
        for level in 0..=max_level {
            let count = level_to_count(level);
            let rule = by_count
                .entry(count)
                .or_insert_with(|| gauss_legendre_rule(NonZeroUsize::new(count).unwrap()))
                .clone();
            let mut fresh = 0;
            let ids = rule
                .nodes()
                .iter()
                .enumerate()
                .map(|(position, &x)| {
                    // +0.0 and -0.0 must share a key
                    let key = if x == 0.0 { 0u64 } else { x.to_bits() };
                    *lookup.entry(key).or_insert_with(|| {
                        fresh += 1;
                        family.registry_values.push(x);
                        family.registry_origins.push(NodeOrigin { level, position });
                        (family.registry_values.len() - 1) as NodeId
                    })
                })
                .collect();
            family.rules.push(rule);
            family.node_ids.push(ids);
            family.new_point_counts.push(fresh);
        }
        debug_assert_eq!(family.registry_values[MIDPOINT_ID as usize], 0.0);
        family
    }

    pub fn max_level(&self) -> usize {
        self.rules.len() - 1
    }

    pub fn rule(&self, level: usize) -> &UnivariateRule {
        &self.rules[level]
    }

    /// Registry ids of the nodes of the level-`level` rule, in node order.
    pub fn node_ids(&self, level: usize) -> &[NodeId] {
        &self.node_ids[level]
    }

    /// The sequence of new-point counts ζ_j, one per level.
    pub fn new_point_counts(&self) -> &[usize] {
        &self.new_point_counts
    }

    pub fn new_point_count(&self, level: usize) -> usize {
        self.new_point_counts[level]
    }

    pub fn node_value(&self, id: NodeId) -> f64 {
        self.registry_values[id as usize]
    }

    pub fn node_origin(&self, id: NodeId) -> NodeOrigin {
        self.registry_origins[id as usize]
    }

    /// Number of distinct node values over all levels.
    pub fn registry_len(&self) -> usize {
        self.registry_values.len()
    }
}

/// Convenience wrapper for [`RuleFamily::new`].
pub fn build_family(max_level: usize) -> RuleFamily {
    RuleFamily::new(max_level)
}

/// ζ_j: number of nodes of the level-`level` rule not present at any lower level.
pub fn new_point_count(level: usize) -> usize {
    RuleFamily::new(level).new_point_count(level)
}
