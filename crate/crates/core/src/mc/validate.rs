use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::rng::trial_rng;
use super::stats::{ks_test, KsReport};
use crate::channel::{draw_link, explicit_mark, interference_mark, interferer_streams, CMatrix, SimOptions};
use crate::error::{domain, Result};
use crate::kernels::special::ln_gamma;
use crate::params::NetworkParams;
use crate::scheme::{Scheme, SignalLaw};
use rand_distr::{Distribution, Exp1};

/// A random quantity whose law is checked against a reference.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NamedSampler {
    /// Unit exponential, a harness self-check.
    Exponential,
    /// Useful-signal gain of a scheme.
    SignalGain { scheme: Scheme, params: NetworkParams, options: SimOptions },
    /// One interferer's mark seen through a random unit receive filter.
    Mark { scheme: Scheme, params: NetworkParams, options: SimOptions },
}

impl NamedSampler {
    fn draw(&self, seed: u64, index: u64) -> Result<f64> {
        let mut rng = trial_rng(seed, index);
        Ok(match self {
            NamedSampler::Exponential => Exp1.sample(&mut rng),
            NamedSampler::SignalGain { scheme, params, options } => draw_link(*scheme, params, options, &mut rng)?.gain,
            NamedSampler::Mark { scheme, params, options } => {
                interference_mark(*scheme, params, options, None, &mut rng)
            }
        })
    }
}

/// KS test at the 1% level of `samples` draws against `reference`.
pub fn validate_distribution(
    sampler: &NamedSampler,
    reference: SignalLaw,
    samples: usize,
    seed: u64,
) -> Result<KsReport> {
    if samples < 1000 {
        return Err(domain(format!("distribution checks need at least 1000 samples, got {samples}")));
    }
    let xs = (0..samples as u64).into_par_iter().map(|i| sampler.draw(seed, i)).collect::<Result<Vec<f64>>>()?;
    Ok(ks_test(&xs, |x| reference.cdf(x), 0.01))
}

/// Empirical `E[I^{2/α}]` of ZF-MULTI interferer marks under two readings of
/// what an interferer radiates, next to the Gamma-law moments
/// `Γ(d + 2/α)/Γ(d)` for `d = KN` and `d = M`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MarkMoments {
    /// Interferer sends its `KN` zero-forced streams.
    pub kn_streams: f64,
    /// Interferer radiates `M` orthonormal streams over the whole array.
    pub m_streams: f64,
    pub gamma_kn: f64,
    pub gamma_m: f64,
    pub samples: usize,
}

impl MarkMoments {
    /// Relative error of the `KN`-stream construction against the `KN`
    /// Gamma moment used by the ZF-MULTI density.
    pub fn kn_residual(&self) -> f64 {
        (self.kn_streams / self.gamma_kn - 1.0).abs()
    }

    pub fn m_residual(&self) -> f64 {
        (self.m_streams / self.gamma_m - 1.0).abs()
    }
}

pub fn zf_multi_mark_moments(params: &NetworkParams, samples: usize, seed: u64) -> Result<MarkMoments> {
    params.validate()?;
    Scheme::ZfMulti.check_feasible(params)?;
    if samples == 0 {
        return Err(domain("samples must be positive"));
    }
    let a = 2.0 / params.alpha;
    let (m, kn) = (params.m, params.k * params.n);
    let moment = |full_array: bool, offset: u64| -> f64 {
        let total: f64 = (0..samples as u64)
            .into_par_iter()
            .map(|i| {
                let mut rng = trial_rng(seed, offset + i);
                let streams = if full_array {
                    CMatrix::identity(m as usize, m as usize)
                } else {
                    interferer_streams(Scheme::ZfMulti, params, &mut rng)
                };
                explicit_mark(&streams, params, None, &mut rng).powf(a)
            })
            .sum();
        total / samples as f64
    };
    let gamma_moment = |d: u32| (ln_gamma(d as f64 + a) - ln_gamma(d as f64)).exp();
    Ok(MarkMoments {
        kn_streams: moment(false, 0),
        m_streams: moment(true, samples as u64),
        gamma_kn: gamma_moment(kn),
        gamma_m: gamma_moment(m),
        samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::MarkMode;

    #[test]
    fn exponential_self_checks() {
        assert!(validate_distribution(&NamedSampler::Exponential, SignalLaw::Gamma(1), 20_000, 1).unwrap().pass);
        assert!(!validate_distribution(&NamedSampler::Exponential, SignalLaw::Gamma(2), 20_000, 1).unwrap().pass);
        assert!(validate_distribution(&NamedSampler::Exponential, SignalLaw::Gamma(1), 10, 1).is_err());
    }

    #[test]
    fn zf_gain_law() {
        let params = NetworkParams::default().with_antennas(6, 2, 2);
        let s = NamedSampler::SignalGain { scheme: Scheme::ZfMulti, params, options: SimOptions::default() };
        assert!(validate_distribution(&s, SignalLaw::Gamma(3), 20_000, 2).unwrap().pass);
    }

    #[test]
    fn explicit_dpc_mark_law() {
        let params = NetworkParams::default().with_antennas(4, 2, 1);
        let options = SimOptions { marks: MarkMode::Explicit, ..SimOptions::default() };
        let s = NamedSampler::Mark { scheme: Scheme::DpcMimoUb, params, options };
        assert!(validate_distribution(&s, SignalLaw::Gamma(4), 20_000, 3).unwrap().pass);
    }

    #[test]
    fn full_array_marks_match_gamma_m_moment() {
        let params = NetworkParams::default().with_antennas(6, 2, 2);
        let mm = zf_multi_mark_moments(&params, 40_000, 4).unwrap();
        // Var(I^{1/2}) ≤ E[I] = M, so the standard error is below √(6/4e4).
        assert!(mm.m_residual() < 0.01, "{mm:?}");
        assert!(mm.kn_streams > 0.0);
    }
}
