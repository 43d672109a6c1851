use std::cmp::Ordering;
use std::fmt;

/// A multi-index α in N_0^m, stored sparsely as its nonzero `(axis, level)`
/// entries in increasing axis order.
///
/// Ordering is lexicographic on the dense vector (α_1, ..., α_m).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MultiIndex {
    dim: usize,
    entries: Vec<(u32, u32)>,
}

impl MultiIndex {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            entries: Vec::new(),
        }
    }

    pub fn from_dense(levels: &[u32]) -> Self {
        let entries = levels
            .iter()
            .enumerate()
            .filter(|(_, &l)| l > 0)
            .map(|(a, &l)| (a as u32, l))
            .collect();
        Self {
            dim: levels.len(),
            entries,
        }
    }

    /// Builds from sparse entries; zero levels are dropped.
    ///
    /// Panics if axes are not strictly increasing or out of range.
    pub fn from_entries(dim: usize, entries: Vec<(u32, u32)>) -> Self {
        assert!(
            entries.windows(2).all(|p| p[0].0 < p[1].0),
            "axes must be strictly increasing"
        );
        assert!(entries.last().is_none_or(|e| (e.0 as usize) < dim));
        let entries = entries.into_iter().filter(|e| e.1 > 0).collect();
        Self { dim, entries }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Nonzero `(axis, level)` pairs in increasing axis order.
    pub fn entries(&self) -> &[(u32, u32)] {
        &self.entries
    }

    pub fn get(&self, axis: usize) -> u32 {
        self.entries
            .binary_search_by_key(&(axis as u32), |e| e.0)
            .map_or(0, |i| self.entries[i].1)
    }

    pub fn to_dense(&self) -> Vec<u32> {
        let mut out = vec![0; self.dim];
        for &(a, l) in &self.entries {
            out[a as usize] = l;
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn l1(&self) -> u64 {
        self.entries.iter().map(|e| e.1 as u64).sum()
    }

    pub fn max_level(&self) -> u32 {
        self.entries.iter().map(|e| e.1).max().unwrap_or(0)
    }

    /// Number of nonzero components.
    pub fn support_len(&self) -> usize {
        self.entries.len()
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        let (mut i, mut j) = (0, 0);
        loop {
            let a = self.entries.get(i);
            let b = other.entries.get(j);
            let axis = match (a, b) {
                (None, None) => return self.dim.cmp(&other.dim),
                (Some(x), None) => x.0,
                (None, Some(y)) => y.0,
                (Some(x), Some(y)) => x.0.min(y.0),
            };
            let va = a.filter(|x| x.0 == axis).map_or(0, |x| x.1);
            let vb = b.filter(|y| y.0 == axis).map_or(0, |y| y.1);
            match va.cmp(&vb) {
                Ordering::Equal => {}
                ord => return ord,
            }
            if a.is_some_and(|x| x.0 == axis) {
                i += 1;
            }
            if b.is_some_and(|y| y.0 == axis) {
                j += 1;
            }
        }
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.dim <= 16 {
            let dense: Vec<String> = self.to_dense().iter().map(u32::to_string).collect();
            write!(f, "({})", dense.join(","))
        } else {
            let sparse: Vec<String> = self
                .entries
                .iter()
                .map(|(a, l)| format!("{}:{}", a + 1, l))
                .collect();
            write!(f, "[m={}; {}]", self.dim, sparse.join(", "))
        }
    }
}
