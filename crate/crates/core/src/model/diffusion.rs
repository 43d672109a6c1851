//! The 1D random diffusion problem with a truncated, uniformly parameterized
//! KL coefficient a_m(x, y) = E[a] + Σ_n sqrt(λ_n) φ_n(x) sqrt(3) y_n.

use std::cell::RefCell;

use crate::error::{Error, Result};
use crate::integrand::Integrand;

use super::fem::solve_diffusion_1d_into;
use super::kl::{pivoted_cholesky, KlExpansion};
use super::matern::MaternKernel;
use super::profile::{profile_theoretical, AnalyticityProfile};

/// Minimum admissible coefficient value.
pub const ELLIPTICITY_THRESHOLD: f64 = 0.05;

/// Number of leading modes whose sign vertices enter the construction-time guard.
const GUARD_MODES: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiffusionConfig {
    pub nu: f64,
    pub ell: f64,
    pub mean: f64,
    /// Mesh size h = 2^{-grid_exponent}.
    pub grid_exponent: u32,
    /// Relative trace tolerance of the pivoted Cholesky factorization.
    pub trace_tol: f64,
}

impl Default for DiffusionConfig {
    fn default() -> Self {
        Self {
            nu: 2.5,
            ell: 0.5,
            mean: 2.5,
            grid_exponent: 9,
            trace_tol: 1e-8,
        }
    }
}

#[derive(Debug, Clone)]
pub struct DiffusionModel {
    config: DiffusionConfig,
    kl: KlExpansion,
    elements: usize,
    /// Row n holds sqrt(3 λ_n) φ_n at the element midpoints.
    midpoint_modes: Vec<Vec<f64>>,
}

impl DiffusionModel {
    pub fn new(config: DiffusionConfig) -> Result<Self> {
        let kernel = MaternKernel::new(config.nu, config.ell)?;
        if !(1..=20).contains(&config.grid_exponent) {
            return Err(Error::invalid(format!(
                "grid exponent {} must lie in 1..=20",
                config.grid_exponent
            )));
        }
        if !(config.mean.is_finite() && config.mean > 0.0) {
            return Err(Error::invalid(format!("mean {} must be positive", config.mean)));
        }
        let elements = 1usize << config.grid_exponent;
        let h = 1.0 / elements as f64;
        let nodes = elements + 1;
        let factors = pivoted_cholesky(
            |i, j| kernel.covariance((i as f64 - j as f64).abs() * h),
            nodes,
            config.trace_tol,
        )?;
        let kl = KlExpansion::from_factors(&factors, h);
        let midpoint_modes = kl
            .lambdas()
            .iter()
            .zip(kl.modes())
            .map(|(&lambda, phi)| {
                let scale = (3.0 * lambda).sqrt();
                phi.windows(2).map(|p| scale * 0.5 * (p[0] + p[1])).collect()
            })
            .collect();
        let model = Self {
            config,
            kl,
            elements,
            midpoint_modes,
        };
        model.check_ellipticity()?;
        Ok(model)
    }

    /// Minimum of a_m over element midpoints and the sign vertices of the
    /// leading modes (other parameters at 0), which is mean - Σ |coefficient|
    /// per element.
    fn check_ellipticity(&self) -> Result<()> {
        let modes = &self.midpoint_modes[..self.dim().min(GUARD_MODES)];
        for e in 0..self.elements {
            let worst = self.config.mean - modes.iter().map(|row| row[e].abs()).sum::<f64>();
            if worst < ELLIPTICITY_THRESHOLD {
                let point: Vec<f64> = (0..self.dim())
                    .map(|n| match modes.get(n) {
                        Some(row) if row[e] > 0.0 => -1.0,
                        Some(_) => 1.0,
                        None => 0.0,
                    })
                    .collect();
                return Err(Error::Ellipticity {
                    value: worst,
                    threshold: ELLIPTICITY_THRESHOLD,
                    point,
                });
            }
        }
        Ok(())
    }

    pub fn config(&self) -> &DiffusionConfig {
        &self.config
    }

    pub fn kl(&self) -> &KlExpansion {
        &self.kl
    }

    /// Truncation rank m.
    pub fn dim(&self) -> usize {
        self.kl.rank()
    }

    pub fn elements(&self) -> usize {
        self.elements
    }

    pub fn mesh_size(&self) -> f64 {
        1.0 / self.elements as f64
    }

    /// Number of interior nodes, the length of a solution vector.
    pub fn interior_nodes(&self) -> usize {
        self.elements - 1
    }

    /// Weights w_n = log κ_n with τ_n = 1/γ_n.
    pub fn profile(&self) -> Result<AnalyticityProfile> {
        AnalyticityProfile::from_gammas(self.kl.gammas())
    }

    /// Lower bound of a_m over the element midpoints and all of [-1, 1]^m.
    pub fn coefficient_lower_bound(&self) -> f64 {
        (0..self.elements)
            .map(|e| self.config.mean - self.midpoint_modes.iter().map(|row| row[e].abs()).sum::<f64>())
            .fold(f64::INFINITY, f64::min)
    }

    /// Weights from radii rescaled by [`Self::coefficient_lower_bound`] and
    /// the summable sequence k^{-1-δ}.
    pub fn profile_theoretical(&self, delta: f64) -> Result<AnalyticityProfile> {
        profile_theoretical(self.kl.gammas(), self.coefficient_lower_bound(), delta)
    }

    /// a_m(·, y) at the element midpoints.
    pub fn coefficient_into(&self, y: &[f64], a: &mut [f64]) {
        a.fill(self.config.mean);
        for (row, &yn) in self.midpoint_modes.iter().zip(y) {
            if yn != 0.0 {
                for (ae, &c) in a.iter_mut().zip(row) {
                    *ae += c * yn;
                }
            }
        }
    }

    fn solve_with(&self, y: &[f64], a: &mut Vec<f64>, scratch: &mut Vec<f64>, u: &mut [f64]) -> Result<()> {
        a.resize(self.elements, 0.0);
        self.coefficient_into(y, a);
        if let Some(&value) = a.iter().find(|v| !(**v >= ELLIPTICITY_THRESHOLD)) {
            return Err(Error::Ellipticity {
                value,
                threshold: ELLIPTICITY_THRESHOLD,
                point: y.to_vec(),
            });
        }
        solve_diffusion_1d_into(a, u, scratch)
    }

    /// FEM solution at the interior nodes for parameter `y`.
    pub fn solve(&self, y: &[f64]) -> Result<Vec<f64>> {
        let mut u = vec![0.0; self.interior_nodes()];
        self.solve_with(y, &mut Vec::new(), &mut Vec::new(), &mut u)?;
        Ok(u)
    }
}

thread_local! {
    static WORKSPACE: RefCell<(Vec<f64>, Vec<f64>, Vec<f64>)> = const { RefCell::new((Vec::new(), Vec::new(), Vec::new())) };
}

/// y ↦ (u^{p})_{p = 1..=max_order} stacked, each block holding the
/// componentwise power of the nodal solution.
#[derive(Debug, Clone, Copy)]
pub struct MomentIntegrand<'a> {
    model: &'a DiffusionModel,
    orders: (u32, u32),
}

impl<'a> MomentIntegrand<'a> {
    /// Single moment order `p`.
    pub fn single(model: &'a DiffusionModel, p: u32) -> Result<Self> {
        check_order(p)?;
        Ok(Self { model, orders: (p, p) })
    }

    /// Orders 1..=max_order stacked in one output vector.
    pub fn stacked(model: &'a DiffusionModel, max_order: u32) -> Result<Self> {
        check_order(max_order)?;
        Ok(Self {
            model,
            orders: (1, max_order),
        })
    }

    pub fn orders(&self) -> std::ops::RangeInclusive<u32> {
        self.orders.0..=self.orders.1
    }

    /// Splits a stacked output into one block per order.
    pub fn split<'v>(&self, values: &'v [f64]) -> Vec<&'v [f64]> {
        values.chunks(self.model.interior_nodes()).collect()
    }
}

fn check_order(p: u32) -> Result<()> {
    if (1..=4).contains(&p) {
        Ok(())
    } else {
        Err(Error::invalid(format!("moment order {p} must lie in 1..=4")))
    }
}

impl Integrand for MomentIntegrand<'_> {
    fn dim_in(&self) -> usize {
        self.model.dim()
    }

    fn dim_out(&self) -> usize {
        self.model.interior_nodes() * self.orders().count()
    }

    fn evaluate(&self, y: &[f64], out: &mut [f64]) -> Result<()> {
        WORKSPACE.with(|ws| {
            let (a, scratch, u) = &mut *ws.borrow_mut();
            u.resize(self.model.interior_nodes(), 0.0);
            self.model.solve_with(y, a, scratch, u)?;
            for (block, p) in out.chunks_mut(u.len()).zip(self.orders()) {
                for (o, &v) in block.iter_mut().zip(u.iter()) {
                    *o = v.powi(p as i32);
                }
            }
            Ok(())
        })
    }
}

/// The p-th moment integrand y ↦ u_m(·, y)^p.
pub fn moment_integrand(model: &DiffusionModel, p: u32) -> Result<MomentIntegrand<'_>> {
    MomentIntegrand::single(model, p)
}
