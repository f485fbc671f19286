use crate::analytic::density::{DensityMethod, DensityResult};
use crate::error::{Error, Result};
use crate::kernels::coeffs::sandwich_series;
use crate::kernels::laplace::ShotNoise;
use crate::params::NetworkParams;
use crate::scheme::Scheme;

/// Relative bracket width at which [`exact_density_root`] stops.
pub const EXACT_ROOT_TOLERANCE: f64 = 1e-9;

/// Exact outage at density `lambda` for schemes whose signal law has a
/// Laplace-domain outage: a unit exponential (SISO, ZF-MISO) or the maximum
/// of `N` unit exponentials (antenna selection).
pub fn exact_outage(scheme: Scheme, params: &NetworkParams, lambda: f64) -> Result<f64> {
    let mut p = *params;
    p.lambda = lambda;
    p.validate()?;
    scheme.check_feasible(&p)?;
    let field = ShotNoise::new(lambda, p.alpha, scheme.mark_shape(&p))?;
    match scheme {
        Scheme::Siso | Scheme::ZfMiso => Ok(1.0 - (-p.noise_exponent() + field.ln_laplace(p.zeta())).exp()),
        Scheme::ZfAntsel => Ok(sandwich_series(p.n, p.zeta(), 1.0, &field, p.eta_over_rho())?.outage),
        other => Err(Error::Unsupported(format!("no exact outage expression for {other}"))),
    }
}

/// Root of an increasing function: the `x ≥ 0` where `f(x) = target`.
/// The upper end starts at `guess` and doubles until it overshoots.
pub fn bisect_increasing<F: FnMut(f64) -> Result<f64>>(mut f: F, target: f64, guess: f64, rel_tol: f64) -> Result<f64> {
    let mut lo = 0.0;
    let mut hi = guess.max(f64::MIN_POSITIVE);
    let mut doublings = 0;
    while f(hi)? <= target {
        lo = hi;
        hi *= 2.0;
        doublings += 1;
        if doublings > 200 {
            return Err(Error::Numerical("bracket expansion did not reach the target".into()));
        }
    }
    while hi - lo > rel_tol * hi {
        let mid = 0.5 * (lo + hi);
        if f(mid)? <= target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Numerically inverts the exact outage `P_out(λ) = ε`.
pub fn exact_density_root(scheme: Scheme, params: &NetworkParams) -> Result<DensityResult> {
    let floor = exact_outage(scheme, params, 0.0)?;
    if floor > params.epsilon {
        return Ok(DensityResult::noise_limited(scheme, params, DensityMethod::ExactRoot));
    }
    let guess = 1.0 / (params.distance * params.distance * 1e3);
    let lambda = bisect_increasing(|l| exact_outage(scheme, params, l), params.epsilon, guess, EXACT_ROOT_TOLERANCE)?;
    Ok(DensityResult::new(scheme, params, lambda, DensityMethod::ExactRoot))
}
