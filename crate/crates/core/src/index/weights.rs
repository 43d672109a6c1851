use crate::error::{Error, Result};

/// Positive per-dimension weights, stored in ascending order.
///
/// `order()[k]` is the original dimension of the `k`-th sorted weight, so
/// results computed in sorted coordinates can be mapped back.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightVector {
    entries: Vec<f64>,
    order: Vec<usize>,
    l1: f64,
}

impl WeightVector {
    pub fn new(raw: Vec<f64>) -> Result<Self> {
        if let Some((i, w)) = raw.iter().enumerate().find(|(_, w)| !(w.is_finite() && **w > 0.0)) {
            return Err(Error::invalid(format!(
                "weight {i} is {w}; weights must be finite and positive"
            )));
        }
        let mut order: Vec<usize> = (0..raw.len()).collect();
        order.sort_by(|&a, &b| raw[a].total_cmp(&raw[b]));
        let entries: Vec<f64> = order.iter().map(|&i| raw[i]).collect();
        let l1 = entries.iter().fold(0.0, |acc, w| acc + w);
        Ok(Self { entries, order, l1 })
    }

    /// All-ones weights in `dim` dimensions (the classical isotropic simplex).
    pub fn isotropic(dim: usize) -> Self {
        Self::new(vec![1.0; dim]).expect("unit weights are valid")
    }

    /// Sorted weights w_1 <= ... <= w_m.
    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn l1(&self) -> f64 {
        self.l1
    }

    pub fn is_identity_order(&self) -> bool {
        self.order.iter().enumerate().all(|(k, &i)| k == i)
    }

    /// Maps a vector given in sorted coordinates back to original dimension order.
    pub fn to_original<T: Copy + Default>(&self, sorted: &[T]) -> Vec<T> {
        let mut out = vec![T::default(); sorted.len()];
        for (k, &i) in self.order.iter().enumerate() {
            out[i] = sorted[k];
        }
        out
    }
}
