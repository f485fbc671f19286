use serde::{Deserialize, Serialize};

use crate::error::{precondition, Error, Result};
use crate::kernels::coeffs::{f_coeff, interference_coeff, sandwich_series};
use crate::kernels::laplace::{noise_laplace, NoisePath, ShotNoise};
use crate::kernels::special::sandwich_contraction;
use crate::params::NetworkParams;
use crate::scheme::{Scheme, SignalLaw};

/// How a density value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DensityMethod {
    /// First-order expansion of the outage in λ.
    SmallEps,
    /// Large-deviation (Chernoff-type) upper bound.
    UpperBound,
    /// Lower end of the chi-square CDF sandwich.
    LowerBound,
    /// Upper end of the chi-square CDF sandwich.
    SandwichUpper,
    /// Exact inversion in closed form.
    ClosedForm,
    /// Root of an exact outage curve.
    ExactRoot,
    /// Root of a simulated outage curve found by stochastic bisection.
    MonteCarlo,
}

impl DensityMethod {
    pub fn name(&self) -> &'static str {
        match self {
            DensityMethod::SmallEps => "small-eps",
            DensityMethod::UpperBound => "upper-bound",
            DensityMethod::LowerBound => "lower-bound",
            DensityMethod::SandwichUpper => "sandwich-upper",
            DensityMethod::ClosedForm => "closed-form",
            DensityMethod::ExactRoot => "exact-root",
            DensityMethod::MonteCarlo => "mc-root",
        }
    }
}

/// Maximum contention density and its area spectral efficiency.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DensityResult {
    pub scheme: Scheme,
    pub lambda_eps: f64,
    pub ase: f64,
    pub method: DensityMethod,
    /// Set when noise alone already violates the outage constraint; the
    /// density is then reported as zero.
    pub noise_limited: bool,
    /// Interval that brackets `lambda_eps` (a CI or bisection bracket for
    /// simulated roots, the opposite bound for a sandwich).
    pub bracket: Option<(f64, f64)>,
}

impl DensityResult {
    /// Builds a result, clamping a negative density at zero with the
    /// noise-limited flag set.
    pub fn new(scheme: Scheme, params: &NetworkParams, lambda: f64, method: DensityMethod) -> Self {
        let noise_limited = !(lambda > 0.0);
        let lambda_eps = if noise_limited { 0.0 } else { lambda };
        Self {
            scheme,
            lambda_eps,
            ase: area_spectral_efficiency(params, lambda_eps),
            method,
            noise_limited,
            bracket: None,
        }
    }

    pub fn noise_limited(scheme: Scheme, params: &NetworkParams, method: DensityMethod) -> Self {
        Self::new(scheme, params, 0.0, method)
    }

    pub fn with_bracket(mut self, low: f64, high: f64) -> Self {
        self.bracket = Some((low, high));
        self
    }
}

/// `K λ (1 - ε) log₂(1 + β)` in bps/Hz/m².
pub fn area_spectral_efficiency(params: &NetworkParams, lambda_eps: f64) -> f64 {
    params.k as f64 * lambda_eps * (1.0 - params.epsilon) * params.rate()
}

fn prepared(scheme: Scheme, params: &NetworkParams) -> Result<()> {
    params.validate()?;
    scheme.check_feasible(params)
}

/// `F_d ε e^{-ζη/ρ} / (I_mark β^{2/α} D²)`, or zero when noise alone breaks
/// the constraint.
fn small_eps(scheme: Scheme, params: &NetworkParams, dof: u32, mark: u32) -> Result<DensityResult> {
    if 1.0 - scheme.noise_only_success(params) > params.epsilon {
        return Ok(DensityResult::noise_limited(scheme, params, DensityMethod::SmallEps));
    }
    let f = f_coeff(dof, params.alpha, params.eta_over_rho())?;
    let lambda = f * params.epsilon * (-params.noise_exponent()).exp()
        / (interference_coeff(mark, params.alpha)? * params.zeta_pow());
    Ok(DensityResult::new(scheme, params, lambda, DensityMethod::SmallEps))
}

/// Large-deviation upper bound on the success probability of a Gamma(d)
/// signal, `L_Y(s) L_N(s/ρ)` at `s = βD^α/(4d)`, with the noise factor in its
/// printed `e^{+ηs}` convention. Mark shape is `params.m`. Values above one
/// are clipped to one.
pub fn outage_upper_lemma1(params: &NetworkParams, d: u32) -> Result<f64> {
    params.validate()?;
    if d == 0 {
        return Err(precondition("Lemma-1 bound needs d ≥ 1"));
    }
    let s = params.zeta() / (4.0 * d as f64);
    let field = ShotNoise::new(params.lambda, params.alpha, params.m)?;
    let noise = noise_laplace(s, params.eta, params.rho, NoisePath::Bound)?;
    Ok((field.laplace(s) * noise).min(1.0))
}

/// Outage sandwich `A_d(cζ) ≤ P_out ≤ A_d(ζ)` for a Gamma(d) signal with
/// `c = (d!)^{-1/d}` and Gamma(`params.m`) marks.
pub fn outage_sandwich_lemma2(params: &NetworkParams, d: u32) -> Result<(f64, f64)> {
    params.validate()?;
    if d == 0 {
        return Err(precondition("outage sandwich needs d ≥ 1"));
    }
    let field = ShotNoise::new(params.lambda, params.alpha, params.m)?;
    let zeta = params.zeta();
    let c = sandwich_contraction(d);
    let lower = sandwich_series(d, zeta, c, &field, params.eta_over_rho())?.outage;
    let upper = sandwich_series(d, zeta, 1.0, &field, params.eta_over_rho())?.outage;
    Ok((lower, upper))
}

/// Density methods for dirty-paper coding to multi-antenna receivers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DpcMethod {
    UpperBound,
    SmallEps,
    Sandwich,
}

/// Dirty-paper coding to `K` receivers with `N` antennas each; the signal is
/// bounded by `‖H₀‖²_F ~ Gamma(MN)` and marks are Gamma(M).
///
/// `Sandwich` returns the lower bound with the upper one in `bracket`.
pub fn density_dpc_mimo(params: &NetworkParams, method: DpcMethod) -> Result<DensityResult> {
    let scheme = Scheme::DpcMimoUb;
    prepared(scheme, params)?;
    let d = params.m * params.n;
    match method {
        DpcMethod::SmallEps => small_eps(scheme, params, d, params.m),
        DpcMethod::UpperBound => {
            let a = 2.0 / params.alpha;
            let four_d = 4.0 * d as f64;
            let bracket = -(-params.epsilon).ln_1p() + params.noise_exponent() / four_d;
            let lambda = four_d.powf(a) / (interference_coeff(params.m, params.alpha)? * params.zeta_pow()) * bracket;
            Ok(DensityResult::new(scheme, params, lambda, DensityMethod::UpperBound))
        }
        DpcMethod::Sandwich => {
            let (lo, hi) = density_dpc_sandwich(params)?;
            Ok(lo.with_bracket(lo.lambda_eps, hi.lambda_eps))
        }
    }
}

/// Density bracket from the chi-square CDF sandwich, linearised in λ:
/// `(ε - (1-e^{-ϑζη/ρ})^d) / (S_{d,ϑ} ϑ^{2/α} I_M β^{2/α} D²)` with `ϑ = 1`
/// for the lower and `ϑ = Γ(d+1)^{-1/d}` for the upper end, `d = MN`.
pub fn density_dpc_sandwich(params: &NetworkParams) -> Result<(DensityResult, DensityResult)> {
    let scheme = Scheme::DpcMimoUb;
    prepared(scheme, params)?;
    let d = params.m * params.n;
    let field = ShotNoise::new(params.lambda, params.alpha, params.m)?;
    let end = |vartheta: f64, method: DensityMethod| -> Result<DensityResult> {
        let t = sandwich_series(d, params.zeta(), vartheta, &field, params.eta_over_rho())?;
        let lambda = (params.epsilon - t.noise_floor)
            / (t.linear_coeff * vartheta.powf(2.0 / params.alpha) * field.coeff() * params.zeta_pow());
        Ok(DensityResult::new(scheme, params, lambda, method))
    };
    let lower = end(1.0, DensityMethod::LowerBound)?;
    let upper = end(sandwich_contraction(d), DensityMethod::SandwichUpper)?;
    let (lo, hi) = (lower.lambda_eps, upper.lambda_eps);
    Ok((lower.with_bracket(lo, hi), upper.with_bracket(lo, hi)))
}

/// Dirty-paper coding to `M` single-antenna receivers.
pub fn density_dpc_miso(params: &NetworkParams) -> Result<DensityResult> {
    let scheme = Scheme::DpcMiso;
    prepared(scheme, params)?;
    small_eps(scheme, params, params.m, params.m)
}

/// Zero-forcing variants.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZfVariant {
    /// `M ≥ KN`, one stream per receive antenna.
    Multi,
    /// `N > M`, zero-forcing receive filter.
    RxZf,
    /// `N = 1`, `K = M`.
    Miso,
}

impl ZfVariant {
    pub fn scheme(&self) -> Scheme {
        match self {
            ZfVariant::Multi => Scheme::ZfMulti,
            ZfVariant::RxZf => Scheme::ZfRxzf,
            ZfVariant::Miso => Scheme::ZfMiso,
        }
    }
}

/// Zero-forcing densities. The MISO case is the exact inversion of
/// `e^{-ζη/ρ} L_Y(ζ) = 1 - ε`, i.e.
/// `λ = [-ln(1-ε) - ζη/ρ] / (I_M β^{2/α} D²)` clamped at zero.
pub fn density_zf(params: &NetworkParams, variant: ZfVariant) -> Result<DensityResult> {
    let scheme = variant.scheme();
    prepared(scheme, params)?;
    let (m, n, k) = (params.m, params.n, params.k);
    match variant {
        ZfVariant::Multi => small_eps(scheme, params, m + 1 - k * n, k * n),
        ZfVariant::RxZf => small_eps(scheme, params, n + 1 - m, m),
        ZfVariant::Miso => {
            let numer = -(-params.epsilon).ln_1p() - params.noise_exponent();
            let lambda = numer / (interference_coeff(m, params.alpha)? * params.zeta_pow());
            Ok(DensityResult::new(scheme, params, lambda, DensityMethod::ClosedForm))
        }
    }
}

/// Zero-forcing after receive antenna selection: `H₀` is the maximum of `N`
/// unit exponentials and the coefficient is the noise-weighted
/// order-statistic sum `S_{N,1}`.
pub fn density_zf_antsel(params: &NetworkParams) -> Result<DensityResult> {
    let scheme = Scheme::ZfAntsel;
    prepared(scheme, params)?;
    if 1.0 - scheme.noise_only_success(params) > params.epsilon {
        return Ok(DensityResult::noise_limited(scheme, params, DensityMethod::SmallEps));
    }
    let field = ShotNoise::new(params.lambda, params.alpha, params.m)?;
    let s_eff = sandwich_series(params.n, params.zeta(), 1.0, &field, params.eta_over_rho())?.linear_coeff;
    let lambda = params.epsilon * (-params.noise_exponent()).exp() / (s_eff * field.coeff() * params.zeta_pow());
    Ok(DensityResult::new(scheme, params, lambda, DensityMethod::SmallEps))
}

/// Block-diagonalization upper bound with `r = NM - (K-1)N²` signal degrees
/// and Gamma(K) marks.
pub fn density_bd(params: &NetworkParams) -> Result<DensityResult> {
    let scheme = Scheme::BdUb;
    prepared(scheme, params)?;
    let r = params.n * params.m - (params.k - 1) * params.n * params.n;
    let mut res = small_eps(scheme, params, r, params.k)?;
    res.method = DensityMethod::UpperBound;
    Ok(res)
}

/// Theoretical exponent of ASE growth in the scheme's antenna axis
/// (`M = N` unless stated).
pub fn scaling_exponent(scheme: Scheme, alpha: f64) -> Result<f64> {
    if !(alpha > 2.0) {
        return Err(Error::Domain(format!("alpha must exceed 2, got {alpha}")));
    }
    let a = 2.0 / alpha;
    Ok(match scheme {
        Scheme::DpcMimoUb => 1.0 + a,
        Scheme::DpcMiso => 1.0,
        Scheme::ZfMiso => 1.0 - a,
        Scheme::ZfAntsel => 1.0,
        // M = KN, exponent in KN
        Scheme::ZfMulti => a,
        // M = KN at fixed K, exponent in N
        Scheme::BdUb => 2.0 * a,
        // M streams, Gamma(N-M+1) signal at fixed N-M
        Scheme::ZfRxzf => 1.0 - a,
        Scheme::Siso => 0.0,
    })
}

/// First-order small-outage density of any scheme: `F_d` of its Gamma(d)
/// signal law, or the order-statistic coefficient for antenna selection.
pub fn density_small_eps(scheme: Scheme, params: &NetworkParams) -> Result<DensityResult> {
    prepared(scheme, params)?;
    match scheme.signal_law(params) {
        SignalLaw::MaxExp(_) => density_zf_antsel(params),
        SignalLaw::Gamma(d) => small_eps(scheme, params, d, scheme.mark_shape(params)),
    }
}

/// The closed-form densities reported for a scheme, principal method first.
pub fn analytic_densities(scheme: Scheme, params: &NetworkParams) -> Result<Vec<DensityResult>> {
    Ok(match scheme {
        Scheme::DpcMimoUb => {
            let (lo, hi) = density_dpc_sandwich(params)?;
            vec![
                density_dpc_mimo(params, DpcMethod::SmallEps)?,
                density_dpc_mimo(params, DpcMethod::UpperBound)?,
                lo,
                hi,
            ]
        }
        Scheme::DpcMiso => vec![density_dpc_miso(params)?],
        Scheme::ZfMulti => vec![density_zf(params, ZfVariant::Multi)?],
        Scheme::ZfRxzf => vec![density_zf(params, ZfVariant::RxZf)?],
        Scheme::ZfMiso | Scheme::Siso => {
            prepared(scheme, params)?;
            let numer = -(-params.epsilon).ln_1p() - params.noise_exponent();
            let lambda = numer / (interference_coeff(params.m, params.alpha)? * params.zeta_pow());
            vec![
                DensityResult::new(scheme, params, lambda, DensityMethod::ClosedForm),
                density_small_eps(scheme, params)?,
            ]
        }
        Scheme::ZfAntsel => vec![density_zf_antsel(params)?],
        Scheme::BdUb => vec![density_bd(params)?],
    })
}
