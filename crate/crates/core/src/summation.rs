//! Compensated (Neumaier) summation.

/// Running sum with a separate error term.
#[derive(Debug, Clone, Copy, Default)]
pub struct KahanSum {
    sum: f64,
    comp: f64,
}

impl KahanSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// Componentwise compensated accumulation of a vector.
#[derive(Debug, Clone)]
pub struct KahanVec {
    parts: Vec<KahanSum>,
}

impl KahanVec {
    pub fn zeros(len: usize) -> Self {
        Self {
            parts: vec![KahanSum::new(); len],
        }
    }

    /// Adds `scale * values` componentwise.
    #[inline]
    pub fn add_scaled(&mut self, scale: f64, values: &[f64]) {
        debug_assert_eq!(values.len(), self.parts.len());
        for (acc, v) in self.parts.iter_mut().zip(values) {
            acc.add(scale * v);
        }
    }

    pub fn values(&self) -> Vec<f64> {
        self.parts.iter().map(KahanSum::value).collect()
    }
}

pub fn compensated_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut acc = KahanSum::new();
    for v in values {
        acc.add(v);
    }
    acc.value()
}
