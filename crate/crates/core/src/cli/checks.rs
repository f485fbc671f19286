//! The self-checks run by `validate`.

use crate::analytic::exact_outage;
use crate::channel::{AntselMode, MarkMode, SimOptions};
use crate::error::Result;
use crate::kernels::coeffs::order_stat_coeff_integral;
use crate::kernels::special::ln_gamma;
use crate::kernels::{chi2_cdf_and_bounds, f_coeff, interference_coeff, order_stat_coeff};
use crate::mc::{estimate_outage, validate_distribution, zf_multi_mark_moments, NamedSampler};
use crate::params::NetworkParams;
use crate::scheme::{Scheme, SignalLaw};

use super::output::{CheckRow, CheckStatus};

/// Pathloss exponents covered by the identity checks.
pub const IDENTITY_ALPHAS: [f64; 4] = [2.5, 3.0, 4.0, 6.0];

fn judged(check: &str, residual: f64, tolerance: f64, detail: String) -> CheckRow {
    let status = if residual <= tolerance { CheckStatus::Pass } else { CheckStatus::Fail };
    CheckRow { check: check.into(), status, residual, tolerance, detail }
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

/// Identity checks. `reference_alpha` maps each exponent to the one used on
/// the reference side; the identity map is the honest run, anything else is
/// a deliberately broken fixture.
pub fn identity_checks(reference_alpha: impl Fn(f64) -> f64) -> Result<Vec<CheckRow>> {
    let mut rows = Vec::new();
    let mut worst = 0.0f64;
    for alpha in IDENTITY_ALPHAS {
        let a = 2.0 / reference_alpha(alpha);
        for m in 1..=64u32 {
            let reference =
                std::f64::consts::PI * (ln_gamma(1.0 - a) + ln_gamma(m as f64 + a) - ln_gamma(m as f64)).exp();
            worst = worst.max(rel(interference_coeff(m, alpha)?, reference));
        }
    }
    rows.push(judged("interference-coeff-gamma-moment", worst, 1e-10, "M = 1..64, alpha in {2.5, 3, 4, 6}".into()));
    let mut worst = 0.0f64;
    for alpha in IDENTITY_ALPHAS {
        let a = 2.0 / reference_alpha(alpha);
        for d in 1..=32u32 {
            let reference = (ln_gamma(1.0 - a) + ln_gamma(d as f64) - ln_gamma(d as f64 - a)).exp();
            worst = worst.max(rel(f_coeff(d, alpha, 0.0)?, reference));
        }
    }
    rows.push(judged("f-coeff-noiseless-closed-form", worst, 1e-9, "d = 1..32, alpha in {2.5, 3, 4, 6}".into()));
    let mut worst = 0.0f64;
    for alpha in IDENTITY_ALPHAS {
        for n in 1..=20u32 {
            worst = worst.max(rel(order_stat_coeff(n, alpha)?, order_stat_coeff_integral(n, reference_alpha(alpha))));
        }
    }
    rows.push(judged("order-stat-series-vs-quadrature", worst, 1e-7, "N = 1..20, alpha in {2.5, 3, 4, 6}".into()));
    let mut violation = 0.0f64;
    for d in 1..=16u32 {
        for i in 0..60 {
            let x = 0.05 * 1.15f64.powi(i);
            let b = chi2_cdf_and_bounds(d, x)?;
            violation = violation.max(b.lower - b.exact).max(b.exact - b.upper);
        }
    }
    rows.push(judged("chi2-cdf-sandwich", violation.max(0.0), 1e-12, "d = 1..16, x in [0.05, 190]".into()));
    Ok(rows)
}

/// Kolmogorov–Smirnov checks of the simulated gain and mark laws.
pub fn distribution_checks(samples: usize, seed: u64) -> Result<Vec<CheckRow>> {
    let base = NetworkParams::default();
    let explicit = SimOptions::default();
    let mut cases: Vec<(String, NamedSampler, SignalLaw)> = Vec::new();
    for (m, k, n) in [(4, 2, 1), (6, 2, 2), (8, 4, 1)] {
        let params = base.with_antennas(m, n, k);
        cases.push((
            format!("ks-zf-gain-m{m}-k{k}-n{n}"),
            NamedSampler::SignalGain { scheme: Scheme::ZfMulti, params, options: explicit },
            Scheme::ZfMulti.signal_law(&params),
        ));
    }
    let bd = base.with_antennas(8, 2, 2);
    cases.push((
        "ks-bd-frobenius-m8-k2-n2".into(),
        NamedSampler::SignalGain { scheme: Scheme::BdUb, params: bd, options: explicit },
        Scheme::BdUb.signal_law(&bd),
    ));
    for n in [2, 4] {
        let params = base.with_antennas(n, n, n);
        cases.push((
            format!("ks-antsel-max-exp-n{n}"),
            NamedSampler::SignalGain { scheme: Scheme::ZfAntsel, params, options: explicit },
            SignalLaw::MaxExp(n),
        ));
    }
    let dpc = base.with_antennas(4, 2, 1);
    cases.push((
        "ks-explicit-dpc-mark-m4".into(),
        NamedSampler::Mark {
            scheme: Scheme::DpcMimoUb,
            params: dpc,
            options: SimOptions { marks: MarkMode::Explicit, ..explicit },
        },
        SignalLaw::Gamma(4),
    ));
    let mut rows = Vec::new();
    for (i, (name, sampler, law)) in cases.iter().enumerate() {
        let ks = validate_distribution(sampler, *law, samples, seed.wrapping_add(i as u64))?;
        rows.push(judged(name, ks.statistic, ks.critical, format!("{} samples, p = {:.3}", ks.samples, ks.p_value)));
    }
    Ok(rows)
}

/// Measurements reported without a verdict: the ZF-MULTI mark moment under
/// both stream-count readings, and the gap of physical antenna selection to
/// the max-exponential model.
pub fn informational_checks(samples: usize, seed: u64) -> Result<Vec<CheckRow>> {
    let params = NetworkParams::default().with_antennas(6, 2, 2);
    let mm = zf_multi_mark_moments(&params, samples, seed)?;
    let closer = if mm.kn_residual() <= mm.m_residual() { "KN" } else { "M" };
    let mut rows = vec![CheckRow {
        check: "zf-multi-mark-moment".into(),
        status: CheckStatus::Info,
        residual: mm.kn_residual(),
        tolerance: 0.0,
        detail: format!(
            "E[I^(2/alpha)]: KN-stream construction {:.5} vs Gamma(KN) {:.5}; M-stream construction {:.5} vs Gamma(M) {:.5}; KN-stream marks sit closer to Gamma({closer})",
            mm.kn_streams, mm.gamma_kn, mm.m_streams, mm.gamma_m
        ),
    }];
    let antsel = NetworkParams::default().with_antennas(4, 4, 4);
    let physical = NamedSampler::SignalGain {
        scheme: Scheme::ZfAntsel,
        params: antsel,
        options: SimOptions { antsel: AntselMode::Physical, ..SimOptions::default() },
    };
    let ks = validate_distribution(&physical, SignalLaw::MaxExp(4), samples, seed.wrapping_add(1))?;
    rows.push(CheckRow {
        check: "antsel-physical-vs-model".into(),
        status: CheckStatus::Info,
        residual: ks.statistic,
        tolerance: ks.critical,
        detail: format!("KS of select-then-zero-force gains against max of 4 exponentials, p = {:.3}", ks.p_value),
    });
    Ok(rows)
}

/// Simulated SISO outage against the exact Rayleigh expression, residual in
/// standard errors.
pub fn siso_oracle(params: &NetworkParams, reference_alpha: f64, trials: u64, seed: u64) -> Result<CheckRow> {
    let p = params.with_antennas(1, 1, 1);
    let est = estimate_outage(Scheme::Siso, &p, trials, seed)?;
    let exact = exact_outage(Scheme::Siso, &NetworkParams { alpha: reference_alpha, ..p }, p.lambda)?;
    let se = (exact * (1.0 - exact) / trials as f64).sqrt().max(f64::MIN_POSITIVE);
    Ok(judged(
        "siso-exact-outage",
        (est.p_hat - exact).abs() / se,
        3.0,
        format!("lambda = {}, simulated {:.6} vs exact {:.6}, residual in standard errors", p.lambda, est.p_hat, exact),
    ))
}
