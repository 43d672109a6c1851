//! Low-rank Karhunen-Loève expansion via pivoted Cholesky.

use crate::error::{Error, Result};

/// Low-rank factor L (n × rank, stored by column) with K ≈ L Lᵀ.
#[derive(Debug, Clone)]
pub struct PivotedCholesky {
    pub columns: Vec<Vec<f64>>,
    pub pivots: Vec<usize>,
    /// Residual trace before the first step and after every step.
    pub trace_history: Vec<f64>,
}

impl PivotedCholesky {
    pub fn rank(&self) -> usize {
        self.columns.len()
    }

    pub fn initial_trace(&self) -> f64 {
        self.trace_history[0]
    }

    pub fn residual_trace(&self) -> f64 {
        *self.trace_history.last().unwrap()
    }

    /// (L Lᵀ)_{ij}.
    pub fn reconstruct(&self, i: usize, j: usize) -> f64 {
        self.columns.iter().map(|c| c[i] * c[j]).sum()
    }
}

/// Greedy pivoted Cholesky of the symmetric positive semidefinite matrix with
/// entries `entry(i, j)`, stopped once the residual trace falls to
/// `trace_tol` times the initial trace.
pub fn pivoted_cholesky<F>(entry: F, n: usize, trace_tol: f64) -> Result<PivotedCholesky>
where
    F: Fn(usize, usize) -> f64,
{
    if !(trace_tol.is_finite() && trace_tol > 0.0) {
        return Err(Error::invalid(format!("trace tolerance {trace_tol} must be positive")));
    }
    let mut diag: Vec<f64> = (0..n).map(|i| entry(i, i)).collect();
    let trace0: f64 = diag.iter().sum();
    let negative_slack = 8.0 * f64::EPSILON * trace0.abs();
    if let Some(&d) = diag.iter().find(|d| **d < -negative_slack) {
        return Err(Error::NotPositiveSemidefinite { pivot: d, step: 0 });
    }
    let mut result = PivotedCholesky {
        columns: Vec::new(),
        pivots: Vec::new(),
        trace_history: vec![trace0],
    };
    let mut residual = trace0;
    while residual > trace_tol * trace0 && result.rank() < n {
        let (p, &dp) = diag
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .unwrap();
        if dp <= 0.0 {
            break;
        }
        let root = dp.sqrt();
        let mut col: Vec<f64> = (0..n).map(|i| entry(i, p)).collect();
        for prev in &result.columns {
            let lp = prev[p];
            for (c, &l) in col.iter_mut().zip(prev) {
                *c -= l * lp;
            }
        }
        for c in &mut col {
            *c /= root;
        }
        col[p] = root;
        for (i, (d, &l)) in diag.iter_mut().zip(&col).enumerate() {
            *d -= l * l;
            if *d < -negative_slack {
                return Err(Error::NotPositiveSemidefinite {
                    pivot: *d,
                    step: result.rank(),
                });
            }
            if *d < 0.0 || i == p {
                *d = 0.0;
            }
        }
        result.columns.push(col);
        result.pivots.push(p);
        residual = diag.iter().sum();
        result.trace_history.push(residual);
    }
    Ok(result)
}

/// Eigen-decomposition of a small symmetric matrix by cyclic Jacobi rotations.
/// Returns eigenvalues in descending order and the matching eigenvectors.
pub fn symmetric_eigen(mut a: Vec<Vec<f64>>) -> (Vec<f64>, Vec<Vec<f64>>) {
    let n = a.len();
    let mut v: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();
    let scale: f64 = a.iter().flatten().map(|x| x * x).sum::<f64>().sqrt();
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum::<f64>()
            .sqrt();
        if off <= 1e-15 * scale || off == 0.0 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q] == 0.0 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                for row in v.iter_mut() {
                    let vkp = row[p];
                    let vkq = row[q];
                    row[p] = c * vkp - s * vkq;
                    row[q] = s * vkp + c * vkq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[j][j].total_cmp(&a[i][i]));
    let values = order.iter().map(|&i| a[i][i]).collect();
    let vectors = order
        .iter()
        .map(|&i| (0..n).map(|k| v[k][i]).collect())
        .collect();
    (values, vectors)
}

/// Discrete KL expansion: eigenpairs of the covariance operator with a
/// lumped mass weight `h` per node, modes normalized so that h Σ φ_k^2 = 1.
#[derive(Debug, Clone)]
pub struct KlExpansion {
    lambdas: Vec<f64>,
    modes: Vec<Vec<f64>>,
    gammas: Vec<f64>,
    residual_trace: f64,
    initial_trace: f64,
}

impl KlExpansion {
    /// Eigenpairs from the low-rank factor: the nonzero spectrum of h L Lᵀ
    /// equals that of h Lᵀ L, and φ_k = L v_k / sqrt(λ_k).
    pub fn from_factors(factors: &PivotedCholesky, h: f64) -> Self {
        let r = factors.rank();
        let cols = &factors.columns;
        let gram: Vec<Vec<f64>> = (0..r)
            .map(|i| {
                (0..r)
                    .map(|j| h * cols[i].iter().zip(&cols[j]).map(|(a, b)| a * b).sum::<f64>())
                    .collect()
            })
            .collect();
        let (values, vectors) = symmetric_eigen(gram);
        let n = cols.first().map_or(0, Vec::len);
        let mut lambdas = Vec::new();
        let mut modes = Vec::new();
        let mut gammas = Vec::new();
        for (lambda, v) in values.into_iter().zip(vectors) {
            if !(lambda > 0.0) {
                continue;
            }
            let scale = 1.0 / lambda.sqrt();
            let mut phi = vec![0.0; n];
            for (col, &vk) in cols.iter().zip(&v) {
                for (p, &c) in phi.iter_mut().zip(col) {
                    *p += c * vk;
                }
            }
            phi.iter_mut().for_each(|p| *p *= scale);
            // fix the sign so the largest entry is positive
            let peak = phi.iter().copied().fold(0.0f64, |m, x| if x.abs() > m.abs() { x } else { m });
            if peak < 0.0 {
                phi.iter_mut().for_each(|p| *p = -*p);
            }
            gammas.push(lambda.sqrt() * peak.abs());
            lambdas.push(lambda);
            modes.push(phi);
        }
        Self {
            lambdas,
            modes,
            gammas,
            residual_trace: factors.residual_trace(),
            initial_trace: factors.initial_trace(),
        }
    }

    pub fn rank(&self) -> usize {
        self.lambdas.len()
    }

    pub fn lambdas(&self) -> &[f64] {
        &self.lambdas
    }

    pub fn modes(&self) -> &[Vec<f64>] {
        &self.modes
    }

    /// γ_k = sqrt(λ_k) max_x |φ_k(x)|.
    pub fn gammas(&self) -> &[f64] {
        &self.gammas
    }

    /// Relative residual trace of the underlying factorization.
    pub fn relative_trace_error(&self) -> f64 {
        self.residual_trace / self.initial_trace
    }
}
