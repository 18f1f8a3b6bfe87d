//! Weighted energies and norms, residual monitors, the canonical stress, inequality-ratio
//! probes and null-component decay probes.
//!
//! Throughout, `q = r − t` is evaluated per grid point and every reduction uses the grid's
//! fixed summation tree, so diagnostics are bitwise reproducible for any thread count.

mod decay;
mod energy;
mod inequalities;
pub mod jet;
mod stress;

pub use decay::*;
pub use energy::*;
pub use inequalities::*;
pub use stress::*;

use thiserror::Error;

use crate::em_model::EmError;
use crate::evolution::EvolutionError;
use crate::tensor_core::TensorError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DiagnosticsError {
    #[error("weight constants violate {0}")]
    BadWeights(&'static str),
    #[error("fit window holds {samples} samples, at least 6 are needed")]
    WindowTooShort { samples: usize },
    #[error("background outside the model domain: {0}")]
    DomainViolation(#[from] EmError),
    #[error(transparent)]
    Evolution(#[from] EvolutionError),
    #[error("metric is not Lorentzian: {0}")]
    Metric(#[from] TensorError),
}

/// Exponents of the weights `w` and `ϖ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightSpec {
    gamma: f64,
    mu: f64,
    gamma_prime: f64,
    mu_prime: f64,
    delta: f64,
}

impl Default for WeightSpec {
    fn default() -> Self {
        WeightSpec {
            gamma: 0.25,
            mu: 0.2,
            gamma_prime: 0.1,
            mu_prime: 0.25,
            delta: 0.05,
        }
    }
}

impl WeightSpec {
    /// Requires `0 < δ < ¼`, `δ < γ < ½`, `0 < γ′ < γ − δ`, `δ < μ′ < ½` and `0 < μ < ½ − μ′`.
    pub fn new(gamma: f64, mu: f64, gamma_prime: f64, mu_prime: f64, delta: f64) -> Result<Self, DiagnosticsError> {
        let checks: [(bool, &'static str); 5] = [
            (0.0 < delta && delta < 0.25, "0 < delta < 1/4"),
            (delta < gamma && gamma < 0.5, "delta < gamma < 1/2"),
            (0.0 < gamma_prime && gamma_prime < gamma - delta, "0 < gamma' < gamma - delta"),
            (delta < mu_prime && mu_prime < 0.5, "delta < mu' < 1/2"),
            (0.0 < mu && mu < 0.5 - mu_prime, "0 < mu < 1/2 - mu'"),
        ];
        for (ok, what) in checks {
            if !ok {
                return Err(DiagnosticsError::BadWeights(what));
            }
        }
        Ok(WeightSpec { gamma, mu, gamma_prime, mu_prime, delta })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn gamma_prime(&self) -> f64 {
        self.gamma_prime
    }

    pub fn mu_prime(&self) -> f64 {
        self.mu_prime
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }
}

/// `w(q) = 1 + (1+|q|)^{1+2γ}` for `q > 0` and `1 + (1+|q|)^{−2μ}` for `q ≤ 0`; `w ≥ 1`.
pub fn weight_w(q: f64, spec: &WeightSpec) -> f64 {
    if q > 0.0 {
        1.0 + (1.0 + q).powf(1.0 + 2.0 * spec.gamma)
    } else {
        1.0 + (1.0 - q).powf(-2.0 * spec.mu)
    }
}

/// `w′(q)`, one-sided at `q = 0` from the outside.
pub fn weight_w_prime(q: f64, spec: &WeightSpec) -> f64 {
    if q > 0.0 {
        (1.0 + 2.0 * spec.gamma) * (1.0 + q).powf(2.0 * spec.gamma)
    } else {
        2.0 * spec.mu * (1.0 - q).powf(-1.0 - 2.0 * spec.mu)
    }
}

/// Decay weight `ϖ(q) = (1+|q|)^{1+γ′}` for `q > 0` and `(1+|q|)^{½−μ′}` for `q ≤ 0`.
pub fn weight_varpi(q: f64, spec: &WeightSpec) -> f64 {
    if q > 0.0 {
        (1.0 + q).powf(1.0 + spec.gamma_prime)
    } else {
        (1.0 - q).powf(0.5 - spec.mu_prime)
    }
}

/// `|x|` of a spatial point.
pub(crate) fn radius(x: &[f64; 3]) -> f64 {
    (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt()
}
