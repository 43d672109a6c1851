//! Plain Halton quasi-Monte Carlo integration over [-1, 1]^m.

use crate::error::{Error, Result};
use crate::eval::weighted_reduce;
use crate::integrand::Integrand;

/// The first `count` primes.
pub fn first_primes(count: usize) -> Vec<u64> {
    let mut primes: Vec<u64> = Vec::with_capacity(count);
    let mut candidate = 2u64;
    while primes.len() < count {
        if primes
            .iter()
            .take_while(|&&p| p * p <= candidate)
            .all(|&p| candidate % p != 0)
        {
            primes.push(candidate);
        }
        candidate += 1;
    }
    primes
}

/// Base-`base` radical inverse of `index`, computed as an exact integer
/// fraction and divided once.
pub fn radical_inverse(mut index: u64, base: u64) -> f64 {
    let mut numerator = 0u64;
    let mut denominator = 1u64;
    while index > 0 {
        numerator = numerator * base + index % base;
        denominator *= base;
        index /= base;
    }
    numerator as f64 / denominator as f64
}

/// Halton points with a fixed prime basis; index 0 (the origin) is never produced.
#[derive(Debug, Clone)]
pub struct HaltonStream {
    bases: Vec<u64>,
    next_index: u64,
}

impl HaltonStream {
    pub fn new(dim: usize) -> Self {
        Self {
            bases: first_primes(dim),
            next_index: 1,
        }
    }

    pub fn dim(&self) -> usize {
        self.bases.len()
    }

    pub fn bases(&self) -> &[u64] {
        &self.bases
    }

    /// Writes the point with the given (1-based) index into `u`.
    pub fn fill(&self, index: u64, u: &mut [f64]) {
        debug_assert!(index >= 1);
        for (x, &b) in u.iter_mut().zip(&self.bases) {
            *x = radical_inverse(index, b);
        }
    }
}

impl Iterator for HaltonStream {
    type Item = Vec<f64>;

    fn next(&mut self) -> Option<Vec<f64>> {
        let mut u = vec![0.0; self.dim()];
        self.fill(self.next_index, &mut u);
        self.next_index += 1;
        Some(u)
    }
}

/// The `index`-th Halton point in [0, 1)^dim.
pub fn halton_point(index: u64, dim: usize) -> Result<Vec<f64>> {
    if index == 0 {
        return Err(Error::invalid("Halton indices start at 1"));
    }
    let mut u = vec![0.0; dim];
    HaltonStream::new(dim).fill(index, &mut u);
    Ok(u)
}

/// (1/N) Σ_{i=1..N} f(2 u_i - 1) over the first N Halton points.
pub fn qmc_integrate(f: &dyn Integrand, n_samples: usize) -> Result<Vec<f64>> {
    Ok(qmc_integrate_with_checkpoints(f, n_samples, &[])?.0)
}

/// Like [`qmc_integrate`], additionally returning the running means after
/// each sample count listed in `checkpoints` (in the order visited).
pub fn qmc_integrate_with_checkpoints(
    f: &dyn Integrand,
    n_samples: usize,
    checkpoints: &[usize],
) -> Result<(Vec<f64>, Vec<(usize, Vec<f64>)>)> {
    if n_samples == 0 {
        return Err(Error::invalid("QMC needs at least one sample"));
    }
    let stream = HaltonStream::new(f.dim_in());
    let mut partial = Vec::new();
    let sum = weighted_reduce(
        f,
        n_samples,
        |i, y| {
            stream.fill(i as u64 + 1, y);
            for v in y.iter_mut() {
                *v = 2.0 * *v - 1.0;
            }
        },
        |_| 1.0,
        checkpoints,
        |count, acc| {
            let mean = acc.values().into_iter().map(|v| v / count as f64).collect();
            partial.push((count, mean));
        },
    )?;
    let mean = sum.into_iter().map(|v| v / n_samples as f64).collect();
    Ok((mean, partial))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::integrand::scalar_fn;

    #[test]
    fn first_points_in_two_dimensions() {
        assert_eq!(halton_point(1, 2).unwrap(), vec![0.5, 1.0 / 3.0]);
        assert_eq!(halton_point(2, 2).unwrap(), vec![0.25, 2.0 / 3.0]);
        assert_eq!(halton_point(3, 2).unwrap(), vec![0.75, 1.0 / 9.0]);
        assert!(halton_point(0, 2).is_err());
    }

    #[test]
    fn leading_digits_per_base() {
        let stream = HaltonStream::new(6);
        for (n, &b) in stream.bases().iter().enumerate() {
            for k in 1..b {
                let mut u = vec![0.0; 6];
                stream.fill(k, &mut u);
                assert_eq!(u[n], k as f64 / b as f64);
            }
        }
        assert_eq!(first_primes(6), vec![2, 3, 5, 7, 11, 13]);
    }

    #[test]
    fn constant_and_linear_means() {
        let c = qmc_integrate(&scalar_fn(3, |_| 2.5), 1000).unwrap();
        assert_eq!(c[0], 2.5);
        for k in 4..16 {
            let n = 1usize << k;
            let v = qmc_integrate(&scalar_fn(2, |y| y[0]), n).unwrap();
            assert!(v[0].abs() <= 2f64.powi(1 - k), "k={k} mean={}", v[0]);
        }
    }

    #[test]
    fn checkpoints_match_shorter_runs() {
        let f = scalar_fn(3, |y| (y[0] + y[1] * y[2]).exp());
        let (full, parts) = qmc_integrate_with_checkpoints(&f, 4096, &[1024, 4096]).unwrap();
        let short = qmc_integrate(&f, 1024).unwrap();
        assert_eq!(parts[0].1, short);
        assert_eq!(parts[1].1, full);
        assert_eq!(qmc_integrate(&f, 4096).unwrap(), full);
    }

    #[test]
    fn zero_samples_rejected() {
        assert!(qmc_integrate(&scalar_fn(1, |_| 1.0), 0).is_err());
    }
}
