//! Experiment problems: the analytic integrand and the 1D random diffusion
//! problem with its Matérn/KL coefficient, FEM solver and moment integrands.

mod analytic;
mod diffusion;
mod fem;
mod kl;
mod matern;
mod profile;

pub use analytic::{analytic_integrand, AnalyticProblem};
pub use diffusion::{
    moment_integrand, DiffusionConfig, DiffusionModel, MomentIntegrand, ELLIPTICITY_THRESHOLD,
};
pub use fem::{h1_relative_error, h1_seminorm, solve_diffusion_1d, solve_diffusion_1d_into};
pub use kl::{pivoted_cholesky, symmetric_eigen, KlExpansion, PivotedCholesky};
pub use matern::{matern_covariance, MaternKernel, MaternSmoothness, MATERN_VARIANCE};
pub use profile::{profile_from_gammas, profile_theoretical, zeta, AnalyticityProfile};
