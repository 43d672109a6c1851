use crate::error::Result;

/// A deterministic map Γ^m → R^d.
///
/// Implementations must be pure: quadrature drivers evaluate distinct points
/// concurrently and rely on identical inputs giving identical outputs.
pub trait Integrand: Sync {
    fn dim_in(&self) -> usize;

    fn dim_out(&self) -> usize;

    /// Writes f(y) into `out`, which has length [`dim_out`](Self::dim_out).
    fn evaluate(&self, y: &[f64], out: &mut [f64]) -> Result<()>;
}

/// Integrand backed by a closure.
pub struct FnIntegrand<F> {
    dim_in: usize,
    dim_out: usize,
    f: F,
}

impl<F> FnIntegrand<F>
where
    F: Fn(&[f64], &mut [f64]) + Sync,
{
    pub fn new(dim_in: usize, dim_out: usize, f: F) -> Self {
        Self { dim_in, dim_out, f }
    }
}

impl<F> Integrand for FnIntegrand<F>
where
    F: Fn(&[f64], &mut [f64]) + Sync,
{
    fn dim_in(&self) -> usize {
        self.dim_in
    }

    fn dim_out(&self) -> usize {
        self.dim_out
    }

    fn evaluate(&self, y: &[f64], out: &mut [f64]) -> Result<()> {
        (self.f)(y, out);
        Ok(())
    }
}

/// Scalar integrand from a closure `y -> f(y)`.
pub fn scalar_fn<G>(dim_in: usize, g: G) -> FnIntegrand<impl Fn(&[f64], &mut [f64]) + Sync>
where
    G: Fn(&[f64]) -> f64 + Sync,
{
    FnIntegrand::new(dim_in, 1, move |y: &[f64], out: &mut [f64]| out[0] = g(y))
}
