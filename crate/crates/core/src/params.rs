use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};

/// Scalar model parameters of the typical link and its Poisson field.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetworkParams {
    /// Transmitter density per m².
    pub lambda: f64,
    /// Pathloss exponent, strictly above 2.
    pub alpha: f64,
    /// Link distance in meters.
    pub distance: f64,
    /// Transmit power per stream (linear).
    pub rho: f64,
    /// Noise power (linear).
    pub eta: f64,
    /// Target SINR (linear).
    pub beta: f64,
    /// Outage constraint.
    pub epsilon: f64,
    /// Transmit antennas.
    pub m: u32,
    /// Receive antennas per receiver.
    pub n: u32,
    /// Receivers served simultaneously.
    pub k: u32,
}

impl Default for NetworkParams {
    /// D = 10 m, ε = 0.1, α = 4, β = 3, M = N = K = 4, interference limited.
    fn default() -> Self {
        Self { lambda: 1e-4, alpha: 4.0, distance: 10.0, rho: 1.0, eta: 0.0, beta: 3.0, epsilon: 0.1, m: 4, n: 4, k: 4 }
    }
}

impl NetworkParams {
    pub fn with_antennas(mut self, m: u32, n: u32, k: u32) -> Self {
        self.m = m;
        self.n = n;
        self.k = k;
        self
    }

    /// Full check used by the density computations.
    pub fn validate(&self) -> Result<()> {
        self.validate_link()?;
        if !(self.beta > 0.0) {
            return Err(domain(format!("beta must be positive, got {}", self.beta)));
        }
        if !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            return Err(domain(format!("epsilon must lie in (0, 1), got {}", self.epsilon)));
        }
        Ok(())
    }

    /// Check for simulating a single link at a fixed density: the outage
    /// target is not needed and a zero SINR threshold is allowed.
    pub fn validate_link(&self) -> Result<()> {
        let bad = |name: &str, why: &str, v: f64| Err(domain(format!("{name} {why}, got {v}")));
        if !(self.lambda >= 0.0) || !self.lambda.is_finite() {
            return bad("lambda", "must be a finite nonnegative density", self.lambda);
        }
        if !(self.alpha > 2.0) || !self.alpha.is_finite() {
            return bad("alpha", "must exceed 2", self.alpha);
        }
        if !(self.distance > 0.0) || !self.distance.is_finite() {
            return bad("distance", "must be positive", self.distance);
        }
        if !(self.rho > 0.0) || !self.rho.is_finite() {
            return bad("rho", "must be positive", self.rho);
        }
        if !(self.eta >= 0.0) || !self.eta.is_finite() {
            return bad("eta", "must be nonnegative", self.eta);
        }
        if !(self.beta >= 0.0) || !self.beta.is_finite() {
            return bad("beta", "must be finite and nonnegative", self.beta);
        }
        if self.m == 0 || self.n == 0 || self.k == 0 {
            return Err(domain("antenna counts m, n, k must be at least 1"));
        }
        if self.k > self.m {
            return Err(domain(format!("k = {} exceeds m = {}", self.k, self.m)));
        }
        Ok(())
    }

    /// `ζ = βD^α`.
    pub fn zeta(&self) -> f64 {
        self.beta * self.distance.powf(self.alpha)
    }

    pub fn eta_over_rho(&self) -> f64 {
        self.eta / self.rho
    }

    /// `ζη/ρ`, the normalised noise exponent of the exact success probability.
    pub fn noise_exponent(&self) -> f64 {
        self.zeta() * self.eta_over_rho()
    }

    /// `β^{2/α} D²`.
    pub fn zeta_pow(&self) -> f64 {
        self.beta.powf(2.0 / self.alpha) * self.distance * self.distance
    }

    /// Shannon target rate `log₂(1 + β)`.
    pub fn rate(&self) -> f64 {
        (1.0 + self.beta).log2()
    }
}
