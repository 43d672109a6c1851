//! Anisotropic sparse grid quadrature on [-1, 1]^m with Gauss-Legendre rules.
//!
//! The crate builds weighted simplex index sets
//! X_w(q, m) = { α : Σ α_n w_n <= q }, assembles the sparse quadrature
//! through the combination technique, and provides the tooling around it:
//! cardinality bounds and exact cost counts, Halton quasi-Monte Carlo
//! references, the analytic and random diffusion test problems, and
//! convergence study drivers.
//!
//! ```
//! use sparsequad::{build_family, scalar_fn, SparseQuadrature, WeightVector};
//!
//! let family = build_family(20);
//! let w = WeightVector::new(vec![1.0, 2.0]).unwrap();
//! let quad = SparseQuadrature::build(&w, 4.0, &family).unwrap();
//! let v = quad.apply(&scalar_fn(2, |y| y[0] * y[0])).unwrap();
//! assert!((v[0] - 1.0 / 3.0).abs() < 1e-14);
//! ```

pub mod error;
mod eval;
pub mod gauss1d;
pub mod index;
pub mod integrand;
pub mod model;
pub mod qmc;
pub mod sparse_quad;
pub mod study;
pub mod summation;

pub use error::{Error, Result};
pub use gauss1d::{build_family, gauss_legendre_rule, level_to_count, new_point_count, RuleFamily, UnivariateRule};
pub use index::{MultiIndex, WeightVector, WeightedIndexSet};
pub use integrand::{scalar_fn, FnIntegrand, Integrand};
pub use sparse_quad::{apply_direct_delta, count_distinct_points, exactness_certificate, IndexSetKind, SparseQuadrature};
