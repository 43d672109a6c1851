//! Piecewise-linear finite elements for -(a u')' = 1 on (0, 1), u(0) = u(1) = 0.

use crate::error::{Error, Result};

/// Nodal values at the interior nodes x_i = i / M, i = 1..M-1, for a
/// coefficient that is constant on each of the M elements.
pub fn solve_diffusion_1d(a_values: &[f64]) -> Result<Vec<f64>> {
    let mut u = vec![0.0; a_values.len().saturating_sub(1)];
    let mut scratch = Vec::new();
    solve_diffusion_1d_into(a_values, &mut u, &mut scratch)?;
    Ok(u)
}

/// Allocation-free variant; `u` must hold M - 1 values.
pub fn solve_diffusion_1d_into(a_values: &[f64], u: &mut [f64], scratch: &mut Vec<f64>) -> Result<()> {
    let elements = a_values.len();
    if elements < 2 {
        return Err(Error::invalid("the mesh needs at least two elements"));
    }
    assert_eq!(u.len(), elements - 1);
    if let Some(&a) = a_values.iter().find(|a| !(**a > 0.0 && a.is_finite())) {
        return Err(Error::Ellipticity {
            value: a,
            threshold: 0.0,
            point: Vec::new(),
        });
    }
    let h = 1.0 / elements as f64;
    // scaled by h: diag_i = a_{i-1} + a_i, off_i = -a_i, rhs = h^2
    let n = elements - 1;
    let rhs = h * h;
    scratch.clear();
    scratch.resize(n, 0.0);
    let c = scratch;
    // Thomas algorithm; the matrix is symmetric with off-diagonal -a_i between nodes i and i+1
    let mut denom = a_values[0] + a_values[1];
    c[0] = -a_values[1] / denom;
    u[0] = rhs / denom;
    for i in 1..n {
        let lower = -a_values[i];
        denom = a_values[i] + a_values[i + 1] - lower * c[i - 1];
        c[i] = -a_values[i + 1] / denom;
        u[i] = (rhs - lower * u[i - 1]) / denom;
    }
    for i in (0..n - 1).rev() {
        u[i] -= c[i] * u[i + 1];
    }
    Ok(())
}

/// Discrete H^1 seminorm with zero boundary values appended.
pub fn h1_seminorm(u: &[f64], h: f64) -> f64 {
    let mut prev = 0.0;
    let mut acc = 0.0;
    for &v in u.iter().chain(std::iter::once(&0.0)) {
        let d = v - prev;
        acc += d * d;
        prev = v;
    }
    (acc / h).sqrt()
}

/// |u - u_ref|_{H^1} / |u_ref|_{H^1}.
pub fn h1_relative_error(u: &[f64], u_ref: &[f64], h: f64) -> Result<f64> {
    if u.len() != u_ref.len() {
        return Err(Error::invalid(format!(
            "vectors differ in length: {} vs {}",
            u.len(),
            u_ref.len()
        )));
    }
    let denom = h1_seminorm(u_ref, h);
    if denom == 0.0 {
        return Err(Error::invalid("reference has zero H1 norm"));
    }
    let diff: Vec<f64> = u.iter().zip(u_ref).map(|(a, b)| a - b).collect();
    Ok(h1_seminorm(&diff, h) / denom)
}
