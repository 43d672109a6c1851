use crate::error::{Error, Result};
use crate::index::WeightVector;

/// Per-dimension analyticity radii τ_n, the derived κ_n = τ_n + sqrt(1 + τ_n^2)
/// and quadrature weights w_n = log κ_n.
///
/// `taus` and `kappas` keep the original dimension order; the weight vector is
/// sorted and carries the permutation.
#[derive(Debug, Clone)]
pub struct AnalyticityProfile {
    taus: Vec<f64>,
    kappas: Vec<f64>,
    weights: WeightVector,
}

impl AnalyticityProfile {
    pub fn from_taus(taus: Vec<f64>) -> Result<Self> {
        if let Some(t) = taus.iter().find(|t| !(t.is_finite() && **t > 0.0)) {
            return Err(Error::invalid(format!("analyticity radius {t} must be positive")));
        }
        let kappas: Vec<f64> = taus.iter().map(|&t| t + (1.0 + t * t).sqrt()).collect();
        // log(τ + sqrt(1 + τ^2)) = asinh(τ), which stays accurate as τ -> 0
        let weights = WeightVector::new(taus.iter().map(|t| t.asinh()).collect())?;
        Ok(Self {
            taus,
            kappas,
            weights,
        })
    }

    /// τ_n = 1 / γ_n.
    pub fn from_gammas(gammas: &[f64]) -> Result<Self> {
        check_gammas(gammas)?;
        Self::from_taus(gammas.iter().map(|g| 1.0 / g).collect())
    }

    pub fn taus(&self) -> &[f64] {
        &self.taus
    }

    pub fn kappas(&self) -> &[f64] {
        &self.kappas
    }

    pub fn weights(&self) -> &WeightVector {
        &self.weights
    }

    /// Error constant c(κ_n) = 4 / (κ_n - 1) of the 1D Gauss-Legendre estimate.
    pub fn error_constants(&self) -> Vec<f64> {
        self.kappas.iter().map(|k| 4.0 / (k - 1.0)).collect()
    }
}

fn check_gammas(gammas: &[f64]) -> Result<()> {
    match gammas.iter().find(|g| !(g.is_finite() && **g > 0.0)) {
        Some(g) => Err(Error::invalid(format!("gamma {g} must be positive"))),
        None => Ok(()),
    }
}

/// τ_n = 1/γ_n, w_n = log κ_n.
pub fn profile_from_gammas(gammas: &[f64]) -> Result<AnalyticityProfile> {
    AnalyticityProfile::from_gammas(gammas)
}

/// Σ_{k >= 1} k^{-s} for s > 1: direct sum up to K - 1 plus an
/// Euler-Maclaurin tail from K.
pub fn zeta(s: f64) -> f64 {
    const K: usize = 1000;
    let head: f64 = crate::summation::compensated_sum((1..K).rev().map(|k| (k as f64).powf(-s)));
    let kf = K as f64;
    let f = kf.powf(-s);
    let integral = kf.powf(1.0 - s) / (s - 1.0);
    let d1 = -s * kf.powf(-s - 1.0);
    let d3 = -s * (s + 1.0) * (s + 2.0) * kf.powf(-s - 3.0);
    head + integral + f / 2.0 - d1 / 12.0 + d3 / 720.0
}

/// Radii rescaled for analyticity on the full tensor domain:
/// τ_k = a_lower / (C(δ) k^{1+δ} γ_k) with C(δ) = Σ k^{-1-δ}.
pub fn profile_theoretical(gammas: &[f64], a_lower: f64, delta: f64) -> Result<AnalyticityProfile> {
    check_gammas(gammas)?;
    if !(a_lower.is_finite() && a_lower > 0.0) {
        return Err(Error::invalid(format!("a_lower = {a_lower} must be positive")));
    }
    if !(delta.is_finite() && delta > 0.0) {
        return Err(Error::invalid(format!("delta = {delta} must be positive")));
    }
    let c = zeta(1.0 + delta);
    let taus = gammas
        .iter()
        .enumerate()
        .map(|(i, g)| a_lower / (c * ((i + 1) as f64).powf(1.0 + delta) * g))
        .collect();
    AnalyticityProfile::from_taus(taus)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_gamma() {
        let p = profile_from_gammas(&[1.0]).unwrap();
        assert_eq!(p.taus(), &[1.0]);
        assert!((p.kappas()[0] - (1.0 + 2f64.sqrt())).abs() < 1e-15);
        assert!((p.weights().entries()[0] - (1.0 + 2f64.sqrt()).ln()).abs() < 1e-15);
        assert!((p.weights().entries()[0] - 0.88137).abs() < 1e-5);
    }

    #[test]
    fn algebraic_decay_gives_increasing_weights() {
        let gammas: Vec<f64> = (1..=50).map(|n| (n as f64).powi(-3)).collect();
        let p = profile_from_gammas(&gammas).unwrap();
        assert!(p.weights().is_identity_order());
        for (n, (&t, &k)) in p.taus().iter().zip(p.kappas()).enumerate() {
            assert!(k > 1.0 + t && k > 2.0 * t, "n={n}");
        }
        let w50 = p.weights().entries()[49];
        assert!((w50 - (2.0 * 50f64.powi(3)).ln()).abs() < 1e-9);
    }

    #[test]
    fn tiny_radius_gives_tiny_weight() {
        let p = profile_from_gammas(&[1e12]).unwrap();
        assert!(p.weights().entries()[0] > 0.0 && p.weights().entries()[0] < 1.1e-12);
        assert!(profile_from_gammas(&[0.0]).is_err());
    }

    #[test]
    fn zeta_two_is_basel() {
        let c = zeta(2.0);
        assert!((c - std::f64::consts::PI.powi(2) / 6.0).abs() < 1e-10);
        assert!((zeta(1.1) - 10.584448464950809).abs() < 1e-9);
    }

    #[test]
    fn theoretical_profile_homogeneity() {
        let g = [0.5, 0.2, 0.05];
        let base = profile_theoretical(&g, 1.0, 1.0).unwrap();
        let scaled: Vec<f64> = g.iter().map(|x| x * 10.0).collect();
        let p10 = profile_theoretical(&scaled, 1.0, 1.0).unwrap();
        let a2 = profile_theoretical(&g, 2.0, 1.0).unwrap();
        for i in 0..3 {
            assert!((p10.taus()[i] * 10.0 - base.taus()[i]).abs() < 1e-14 * base.taus()[i]);
            assert!((a2.taus()[i] - 2.0 * base.taus()[i]).abs() < 1e-14 * base.taus()[i]);
        }
        let c = std::f64::consts::PI.powi(2) / 6.0;
        assert!((base.taus()[0] - 1.0 / (c * 0.5)).abs() < 1e-9);
        assert!(profile_theoretical(&g, 1.0, 0.0).is_err());
    }
}
