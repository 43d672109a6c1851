use crate::error::{Error, Result};
use crate::integrand::Integrand;

use super::profile::AnalyticityProfile;

/// f(y) = (0.6 + 0.2 Σ_{n=1..m} n^{-r} y_n)^{-1} on [-1, 1]^m.
#[derive(Debug, Clone)]
pub struct AnalyticProblem {
    r: f64,
    coefficients: Vec<f64>,
}

impl AnalyticProblem {
    pub fn new(r: f64, m: usize) -> Result<Self> {
        if !(r.is_finite() && r > 1.0) || m == 0 {
            return Err(Error::invalid(format!(
                "analytic problem needs r > 1 and m >= 1, got r = {r}, m = {m}"
            )));
        }
        let coefficients: Vec<f64> = (1..=m).map(|n| 0.2 * (n as f64).powf(-r)).collect();
        let problem = Self { r, coefficients };
        if problem.denominator_lower_bound() <= 0.0 {
            return Err(Error::invalid(format!(
                "denominator is not bounded away from zero for r = {r}, m = {m}"
            )));
        }
        Ok(problem)
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn dim(&self) -> usize {
        self.coefficients.len()
    }

    /// 0.6 - 0.2 Σ n^{-r}, the minimum of the denominator over [-1, 1]^m.
    pub fn denominator_lower_bound(&self) -> f64 {
        0.6 - self.coefficients.iter().sum::<f64>()
    }

    pub fn denominator(&self, y: &[f64]) -> f64 {
        0.6 + self
            .coefficients
            .iter()
            .zip(y)
            .map(|(c, y)| c * y)
            .sum::<f64>()
    }

    pub fn value(&self, y: &[f64]) -> f64 {
        1.0 / self.denominator(y)
    }

    /// Weights from γ_n = n^{-r}, i.e. τ_n = n^r and w_n = log(n^r + sqrt(1 + n^{2r})).
    pub fn profile(&self) -> AnalyticityProfile {
        let gammas: Vec<f64> = (1..=self.dim()).map(|n| (n as f64).powf(-self.r)).collect();
        AnalyticityProfile::from_gammas(&gammas).expect("n^-r is positive")
    }
}

impl Integrand for AnalyticProblem {
    fn dim_in(&self) -> usize {
        self.dim()
    }

    fn dim_out(&self) -> usize {
        1
    }

    fn evaluate(&self, y: &[f64], out: &mut [f64]) -> Result<()> {
        out[0] = self.value(y);
        Ok(())
    }
}

/// The analytic test integrand for decay `r` in `m` dimensions.
pub fn analytic_integrand(r: f64, m: usize) -> Result<AnalyticProblem> {
    AnalyticProblem::new(r, m)
}
