//! Laplace transforms of the aggregate interference and of the noise.

use crate::error::{domain, Result};
use crate::kernels::coeffs::interference_coeff;

/// Poisson shot-noise field `Y = Σ I_i |X_i|^{-α}` with Gamma(`mark_shape`)
/// marks. Caches `I_M` so repeated transform evaluations are cheap.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShotNoise {
    pub lambda: f64,
    pub alpha: f64,
    pub mark_shape: u32,
    coeff: f64,
}

impl ShotNoise {
    pub fn new(lambda: f64, alpha: f64, mark_shape: u32) -> Result<Self> {
        if !(lambda >= 0.0) {
            return Err(domain(format!("density must be nonnegative, got {lambda}")));
        }
        let coeff = interference_coeff(mark_shape, alpha)?;
        Ok(Self { lambda, alpha, mark_shape, coeff })
    }

    /// `I_M` for this field's mark law.
    pub fn coeff(&self) -> f64 {
        self.coeff
    }

    /// `ln L_Y(s) = -λ s^{2/α} I_M`.
    pub fn ln_laplace(&self, s: f64) -> f64 {
        if s <= 0.0 || self.lambda == 0.0 {
            return 0.0;
        }
        -self.lambda * s.powf(2.0 / self.alpha) * self.coeff
    }

    pub fn laplace(&self, s: f64) -> f64 {
        self.ln_laplace(s).exp()
    }
}

/// `L_Y(s) = exp(-λ s^{2/α} I_M)` for the interference of a PPP with
/// Gamma(M, 1) marks.
pub fn laplace_field(s: f64, lambda: f64, alpha: f64, m: u32) -> Result<f64> {
    if !(s >= 0.0) {
        return Err(domain(format!("Laplace argument must be nonnegative, got {s}")));
    }
    Ok(ShotNoise::new(lambda, alpha, m)?.laplace(s))
}

/// Which sign convention a noise factor follows.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NoisePath {
    /// Printed bound convention `L_N(s) = e^{+ηs}`, used by the large-deviation
    /// density bound.
    Bound,
    /// Attenuation `e^{-sη/ρ}` of the exact success probability.
    Exact,
}

/// Noise factor at Laplace argument `s` (already including the `1/ρ` scaling
/// of the normalised SINR).
pub fn noise_laplace(s: f64, eta: f64, rho: f64, path: NoisePath) -> Result<f64> {
    if !(rho > 0.0) {
        return Err(domain(format!("transmit power must be positive, got {rho}")));
    }
    if !(s >= 0.0) || !(eta >= 0.0) {
        return Err(domain("noise Laplace needs s ≥ 0 and η ≥ 0"));
    }
    let x = s * eta / rho;
    Ok(match path {
        NoisePath::Bound => x.exp(),
        NoisePath::Exact => (-x).exp(),
    })
}
