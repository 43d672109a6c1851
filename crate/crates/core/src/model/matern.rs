use crate::error::{Error, Result};

/// Half-integer Matérn smoothness.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MaternSmoothness {
    FiveHalves,
    SevenHalves,
}

impl MaternSmoothness {
    pub fn from_nu(nu: f64) -> Result<Self> {
        if nu == 2.5 {
            Ok(Self::FiveHalves)
        } else if nu == 3.5 {
            Ok(Self::SevenHalves)
        } else {
            Err(Error::invalid(format!("Matérn nu must be 2.5 or 3.5, got {nu}")))
        }
    }

    pub fn nu(self) -> f64 {
        match self {
            Self::FiveHalves => 2.5,
            Self::SevenHalves => 3.5,
        }
    }
}

/// Matérn covariance with variance 1/4.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaternKernel {
    pub smoothness: MaternSmoothness,
    pub ell: f64,
}

pub const MATERN_VARIANCE: f64 = 0.25;

impl MaternKernel {
    pub fn new(nu: f64, ell: f64) -> Result<Self> {
        if !(ell.is_finite() && ell > 0.0) {
            return Err(Error::invalid(format!("correlation length {ell} must be positive")));
        }
        Ok(Self {
            smoothness: MaternSmoothness::from_nu(nu)?,
            ell,
        })
    }

    pub fn covariance(&self, rho: f64) -> f64 {
        let t = rho / self.ell;
        match self.smoothness {
            MaternSmoothness::FiveHalves => {
                let s = 5f64.sqrt() * t;
                MATERN_VARIANCE * (1.0 + s + 5.0 * t * t / 3.0) * (-s).exp()
            }
            MaternSmoothness::SevenHalves => {
                let s = 7f64.sqrt() * t;
                MATERN_VARIANCE
                    * (1.0 + s + 14.0 * t * t / 5.0 + 7.0 * 7f64.sqrt() * t * t * t / 15.0)
                    * (-s).exp()
            }
        }
    }
}

pub fn matern_covariance(kernel: &MaternKernel, rho: f64) -> f64 {
    kernel.covariance(rho)
}
