//! Closed-form coefficient families of the transmission-capacity formulas.
//!
//! Throughout, `a = 2/α` and "Gamma(d)" means the sum of `d` unit-mean
//! exponentials.

use std::f64::consts::PI;

use crate::error::{domain, Error, Result};
use crate::kernels::laplace::ShotNoise;
use crate::kernels::quadrature::half_line_log_trapezoid;
use crate::kernels::special::{binomial, ln_beta, ln_binomial, ln_gamma, one_minus_exp_pow, CompensatedSum};
use crate::kernels::stable::positive_stable_sf;

/// Above this order the alternating binomial sums switch to their integral
/// representations. At order 40 the compensated series is already off by
/// about 1e-3 relative (α = 6); at 20 it still agrees to ~1e-10.
pub const SERIES_MAX_ORDER: u32 = 20;

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 2.0) || !alpha.is_finite() {
        return Err(domain(format!("pathloss exponent must exceed 2 for a finite shot-noise integral, got {alpha}")));
    }
    Ok(())
}

/// Interference coefficient `I_M = (2π/α) Σ_{m<M} C(M,m) B(m+2/α, M-m-2/α)`.
///
/// With Gamma(M) marks the field's Laplace transform is `exp(-λ s^{2/α} I_M)`.
pub fn interference_coeff(m: u32, alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    if m == 0 {
        return Err(domain("mark shape must be at least 1"));
    }
    let a = 2.0 / alpha;
    let mut acc = CompensatedSum::default();
    for i in 0..m {
        let first = i as f64 + a;
        let second = m as f64 - first;
        acc.add((ln_binomial(m, i) + ln_beta(first, second)?).exp());
    }
    Ok(2.0 * PI / alpha * acc.value())
}

/// Gamma-moment form `π Γ(1-2/α) Γ(M+2/α)/Γ(M)` of [`interference_coeff`].
pub fn interference_coeff_moment(m: u32, alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    let a = 2.0 / alpha;
    let m = m as f64;
    Ok(PI * (ln_gamma(1.0 - a) + ln_gamma(m + a) - ln_gamma(m)).exp())
}

/// Small-outage coefficient `F_d` of a Gamma(d) signal, with the noise
/// weighting `(η/ρ)^{k-j}` of the double sum as printed.
pub fn f_coeff(d: u32, alpha: f64, eta_over_rho: f64) -> Result<f64> {
    check_alpha(alpha)?;
    if d == 0 {
        return Err(domain("F coefficient needs d ≥ 1"));
    }
    if !(eta_over_rho >= 0.0) {
        return Err(domain("η/ρ must be nonnegative"));
    }
    let a = 2.0 / alpha;
    // poch[j] = Π_{m<j}(m - a) / j!
    let mut poch = Vec::with_capacity(d as usize);
    let mut p = 1.0;
    for j in 0..d {
        poch.push(p);
        p *= (j as f64 - a) / (j as f64 + 1.0);
    }
    let ln_x = eta_over_rho.ln();
    let mut total = CompensatedSum::default();
    for k in 0..d {
        if eta_over_rho == 0.0 {
            total.add(poch[k as usize]);
            continue;
        }
        for j in 0..=k {
            let mag = (ln_binomial(k, j) + (k - j) as f64 * ln_x).exp();
            total.add(mag * poch[j as usize]);
        }
    }
    let s = total.value();
    if !(s.is_finite() && s > 0.0) {
        return Err(Error::Numerical(format!("F_{d} inner sum is {s}")));
    }
    Ok(1.0 / s)
}

/// Noise-free closed form `Γ(1-2/α) Γ(d)/Γ(d-2/α)` of [`f_coeff`].
pub fn f_coeff_closed(d: u32, alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    let a = 2.0 / alpha;
    let d = d as f64;
    Ok((ln_gamma(1.0 - a) + ln_gamma(d) - ln_gamma(d - a)).exp())
}

fn max_exp_log_density(d: u32, h: f64) -> f64 {
    // d (1 - e^{-h})^{d-1} e^{-h}
    (d as f64).ln() + (d - 1) as f64 * (-(-h).exp_m1()).ln() - h
}

/// `S_N = Σ_{n=1}^N C(N,n)(-1)^{n+1} n^{2/α} = E[H_max^{-2/α}]/Γ(1-2/α)` for
/// the maximum of `N` unit exponentials.
pub fn order_stat_coeff(n: u32, alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    if n == 0 {
        return Err(domain("order statistic needs N ≥ 1"));
    }
    if n <= SERIES_MAX_ORDER {
        Ok(order_stat_series(n, 2.0 / alpha, 0.0))
    } else {
        Ok(order_stat_coeff_integral(n, alpha))
    }
}

/// `Σ_{n=1}^d C(d,n)(-1)^{n+1} n^a e^{-n t}`, compensated.
fn order_stat_series(d: u32, a: f64, t: f64) -> f64 {
    (1..=d)
        .map(|n| {
            let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
            sign * binomial(d, n) * (n as f64).powf(a) * (-(n as f64) * t).exp()
        })
        .collect::<CompensatedSum>()
        .value()
}

// Integrands behave like x^{1-a} near the origin; cut where that is below
// double precision.
fn small_side_cutoff(a: f64) -> f64 {
    -38.0 / (1.0 - a) - 5.0
}

/// Quadrature of `E[H_max^{-2/α}]/Γ(1-2/α)`.
pub fn order_stat_coeff_integral(n: u32, alpha: f64) -> f64 {
    let a = 2.0 / alpha;
    let hi = ((n as f64).ln() + 50.0).ln();
    let moment =
        half_line_log_trapezoid(|h| (max_exp_log_density(n, h) - a * h.ln()).exp(), small_side_cutoff(a), hi, 0.01);
    moment / (ln_gamma(1.0 - a)).exp()
}

/// Outage expansion and its small-density slope for a Gamma(d) signal whose
/// CDF is replaced by `(1 - e^{-ϑx})^d`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SandwichTerms {
    /// `A_d(ϑζ) = E[(1 - e^{-ϑζ(Y + η/ρ)})^d]`.
    pub outage: f64,
    /// `S_{d,ϑ} = Σ_{n=1}^d C(d,n)(-1)^{n+1} n^{2/α} e^{-nϑζη/ρ}`.
    pub linear_coeff: f64,
    /// `(1 - e^{-ϑζη/ρ})^d`, the outage with no interferers.
    pub noise_floor: f64,
}

/// Binomially expanded outage `Σ_k C(d,k)(-1)^k e^{-kϑζη/ρ} L_Y(kϑζ)` and
/// its linear coefficient in λ. Orders above [`SERIES_MAX_ORDER`] use the
/// integral representations, which are free of cancellation.
pub fn sandwich_series(
    d: u32,
    zeta: f64,
    vartheta: f64,
    field: &ShotNoise,
    eta_over_rho: f64,
) -> Result<SandwichTerms> {
    if d == 0 {
        return Err(domain("sandwich order must be at least 1"));
    }
    if !(zeta > 0.0 && vartheta > 0.0) {
        return Err(domain("sandwich needs ζ > 0 and ϑ > 0"));
    }
    if !(eta_over_rho >= 0.0) {
        return Err(domain("η/ρ must be nonnegative"));
    }
    let theta = vartheta * zeta;
    let w = theta * eta_over_rho;
    let a = 2.0 / field.alpha;
    let noise_floor = one_minus_exp_pow(w, d);
    if d <= SERIES_MAX_ORDER {
        let outage = (0..=d)
            .map(|k| {
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                let kf = k as f64;
                sign * binomial(d, k) * (-kf * w + field.ln_laplace(kf * theta)).exp()
            })
            .collect::<CompensatedSum>()
            .value();
        Ok(SandwichTerms { outage, linear_coeff: order_stat_series(d, a, w), noise_floor })
    } else {
        Ok(SandwichTerms {
            outage: sandwich_outage_integral(d, theta, w, field),
            linear_coeff: sandwich_slope_integral(d, a, w),
            noise_floor,
        })
    }
}

/// `A_d = P(H_max ≤ w + θY)` integrated over the law of `H_max`, with the
/// interference tail from the positive-stable representation.
pub fn sandwich_outage_integral(d: u32, theta: f64, w: f64, field: &ShotNoise) -> f64 {
    let floor = one_minus_exp_pow(w, d);
    if field.lambda == 0.0 {
        return floor;
    }
    let a = 2.0 / field.alpha;
    let scale = (field.lambda * field.coeff()).powf(1.0 / a);
    let hi = (w + (d as f64).ln() + 50.0).ln();
    let tail = half_line_log_trapezoid(
        |u| {
            let dens = max_exp_log_density(d, w + u).exp();
            if dens == 0.0 {
                return 0.0;
            }
            dens * positive_stable_sf(a, u / theta / scale)
        },
        -30.0,
        hi,
        0.02,
    );
    floor + tail
}

/// Lévy-measure form of `S_{d,ϑ}`:
/// `a/Γ(1-a) ∫ [(1-e^{-t-x})^d - (1-e^{-t})^d] x^{-1-a} dx`.
pub fn sandwich_slope_integral(d: u32, a: f64, t: f64) -> f64 {
    let df = d as f64;
    let q = if t > 0.0 { df * (-(-t).exp_m1()).ln() } else { f64::NEG_INFINITY };
    // the integrand decays only like x^{-a}; run until that is negligible
    let u_hi = (t + df.ln() + 60.0).ln().max(40.0 / a);
    let body = half_line_log_trapezoid(
        |x| {
            let diff = if q.is_finite() {
                // (1-e^{-t-x})/(1-e^{-t}) = 1 + r
                let r = (-t).exp() * (-(-x).exp_m1()) / (-(-t).exp_m1());
                q.exp() * (df * r.ln_1p()).exp_m1()
            } else {
                (df * (-(-x).exp_m1()).ln()).exp()
            };
            diff * x.powf(-1.0 - a)
        },
        small_side_cutoff(a),
        u_hi,
        0.01,
    );
    a / (ln_gamma(1.0 - a)).exp() * body
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::special::gamma;
    use approx::assert_relative_eq;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Exp1, Gamma as GammaDist};

    const ALPHAS: [f64; 4] = [2.5, 3.0, 4.0, 6.0];

    fn slope(xs: &[f64], ys: &[f64]) -> f64 {
        let n = xs.len() as f64;
        let mx = xs.iter().sum::<f64>() / n;
        let my = ys.iter().sum::<f64>() / n;
        let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
        let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
        sxy / sxx
    }

    #[test]
    fn interference_coeff_examples() {
        assert_relative_eq!(interference_coeff(1, 4.0).unwrap(), PI * PI / 2.0, max_relative = 1e-12);
        assert_relative_eq!(interference_coeff(2, 4.0).unwrap(), 0.75 * PI * PI, max_relative = 1e-12);
        for alpha in ALPHAS {
            let a = 2.0 / alpha;
            let expected = PI * gamma(1.0 + a) * gamma(1.0 - a);
            assert_relative_eq!(interference_coeff(1, alpha).unwrap(), expected, max_relative = 1e-12);
        }
    }

    #[test]
    fn interference_coeff_gamma_moment_identity() {
        for alpha in ALPHAS {
            for m in 1..=64 {
                let sum = interference_coeff(m, alpha).unwrap();
                let moment = interference_coeff_moment(m, alpha).unwrap();
                assert_relative_eq!(sum, moment, max_relative = 1e-10);
            }
        }
    }

    #[test]
    fn interference_coeff_increasing_and_slope() {
        for alpha in ALPHAS {
            let mut prev = 0.0;
            for m in 1..=64 {
                let v = interference_coeff(m, alpha).unwrap();
                assert!(v > prev);
                prev = v;
            }
            let ms = [64u32, 128, 256, 512, 1024];
            let xs: Vec<f64> = ms.iter().map(|&m| (m as f64).ln()).collect();
            let ys: Vec<f64> = ms.iter().map(|&m| interference_coeff(m, alpha).unwrap().ln()).collect();
            assert!((slope(&xs, &ys) - 2.0 / alpha).abs() <= 0.01, "alpha={alpha}");
        }
    }

    #[test]
    fn interference_coeff_rejects_small_alpha() {
        assert!(matches!(interference_coeff(2, 2.0), Err(Error::Domain(_))));
        assert!(interference_coeff(2, 1.5).is_err());
    }

    #[test]
    fn f_coeff_examples() {
        for &x in &[0.0, 1e-6, 0.3, 2.0] {
            assert_relative_eq!(f_coeff(1, 3.3, x).unwrap(), 1.0, max_relative = 1e-15);
        }
        assert_relative_eq!(f_coeff(2, 4.0, 0.0).unwrap(), 2.0, max_relative = 1e-14);
        let expected = gamma(0.5) * gamma(16.0) / gamma(15.5);
        assert_relative_eq!(f_coeff(16, 4.0, 0.0).unwrap(), expected, max_relative = 1e-10);
    }

    #[test]
    fn f_coeff_identity_and_growth() {
        for alpha in ALPHAS {
            for d in 1..=32 {
                assert_relative_eq!(
                    f_coeff(d, alpha, 0.0).unwrap(),
                    f_coeff_closed(d, alpha).unwrap(),
                    max_relative = 1e-9
                );
            }
            let ds = [64u32, 128, 256, 512, 1024];
            let xs: Vec<f64> = ds.iter().map(|&d| (d as f64).ln()).collect();
            let ys: Vec<f64> = ds.iter().map(|&d| f_coeff(d, alpha, 0.0).unwrap().ln()).collect();
            assert!((slope(&xs, &ys) - 2.0 / alpha).abs() <= 0.02, "alpha={alpha}");
        }
    }

    #[test]
    fn f_coeff_noise_terms() {
        // d = 2: inner sum = 1 + (x - a) with a = 2/α
        let x = 0.25;
        let expected = 1.0 / (1.0 + x - 0.5);
        assert_relative_eq!(f_coeff(2, 4.0, x).unwrap(), expected, max_relative = 1e-14);
    }

    #[test]
    fn order_stat_examples() {
        assert_relative_eq!(order_stat_coeff(1, 4.0).unwrap(), 1.0, max_relative = 1e-15);
        assert_relative_eq!(order_stat_coeff(2, 4.0).unwrap(), 2.0 - 2f64.sqrt(), max_relative = 1e-14);
        let mut prev = f64::INFINITY;
        for n in 1..=64 {
            let s = order_stat_coeff(n, 4.0).unwrap();
            assert!(s < prev, "N={n}");
            prev = s;
        }
    }

    #[test]
    fn order_stat_series_agrees_with_integral() {
        for alpha in ALPHAS {
            for n in [1u32, 2, 5, 12] {
                let series = order_stat_series(n, 2.0 / alpha, 0.0);
                let integral = order_stat_coeff_integral(n, alpha);
                assert_relative_eq!(series, integral, max_relative = 1e-9);
            }
            let crossover = SERIES_MAX_ORDER;
            let series = order_stat_series(crossover, 2.0 / alpha, 0.0);
            let integral = order_stat_coeff_integral(crossover, alpha);
            assert_relative_eq!(series, integral, max_relative = 1e-8);
        }
    }

    #[test]
    fn order_stat_moment_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let n = 1_000_000;
        let mut sum = 0.0;
        let mut sq = 0.0;
        for _ in 0..n {
            let a: f64 = rng.sample(Exp1);
            let b: f64 = rng.sample(Exp1);
            let v = a.max(b).powf(-0.5);
            sum += v;
            sq += v * v;
        }
        let mean = sum / n as f64;
        let se = ((sq / n as f64 - mean * mean) / n as f64).sqrt();
        let target = order_stat_coeff(2, 4.0).unwrap() * gamma(0.5);
        assert!((mean - target).abs() <= 3.0 * se, "mean={mean} target={target} se={se}");
    }

    fn shot_noise(rng: &mut ChaCha8Rng, lambda: f64, alpha: f64, shape: u32, radius: f64) -> f64 {
        let count = rand_distr::Poisson::new(lambda * PI * radius * radius).unwrap().sample(rng) as u64;
        let marks = GammaDist::new(shape as f64, 1.0).unwrap();
        (0..count)
            .map(|_| {
                let r2 = radius * radius * rng.gen::<f64>();
                marks.sample(rng) * r2.powf(-alpha / 2.0)
            })
            .sum()
    }

    fn mean_and_se(xs: &[f64]) -> (f64, f64) {
        let n = xs.len() as f64;
        let m = xs.iter().sum::<f64>() / n;
        let v = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1.0);
        (m, (v / n).sqrt())
    }

    #[test]
    fn laplace_matches_shot_noise_monte_carlo() {
        let (s, lambda, alpha) = (3e4, 1e-4, 4.0);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let draws: Vec<f64> =
            (0..100_000).map(|_| (-s * shot_noise(&mut rng, lambda, alpha, 1, 1000.0)).exp()).collect();
        let (m, se) = mean_and_se(&draws);
        let exact = crate::kernels::laplace::laplace_field(s, lambda, alpha, 1).unwrap();
        assert!((m - exact).abs() <= 3.0 * se, "mc={m} exact={exact} se={se}");
    }

    #[test]
    fn sandwich_reductions() {
        let field = ShotNoise::new(2e-4, 4.0, 1).unwrap();
        let zeta = 3e4;
        let t = sandwich_series(1, zeta, 1.0, &field, 0.0).unwrap();
        assert_relative_eq!(t.outage, 1.0 - field.laplace(zeta), max_relative = 1e-12);
        assert_relative_eq!(t.linear_coeff, 1.0, max_relative = 1e-15);
        for d in [2u32, 5, 9] {
            let t = sandwich_series(d, zeta, 0.7, &field, 0.0).unwrap();
            assert_relative_eq!(t.linear_coeff, order_stat_coeff(d, 4.0).unwrap(), max_relative = 1e-14);
            assert_eq!(t.noise_floor, 0.0);
        }
    }

    #[test]
    fn sandwich_matches_direct_expectation() {
        let (d, zeta, eta_over_rho, alpha, lambda) = (4u32, 3e4, 1e-6, 4.0, 1e-4);
        let vartheta = 24f64.powf(-0.25);
        let field = ShotNoise::new(lambda, alpha, 2).unwrap();
        let terms = sandwich_series(d, zeta, vartheta, &field, eta_over_rho).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let draws: Vec<f64> = (0..100_000)
            .map(|_| {
                let y = shot_noise(&mut rng, lambda, alpha, 2, 1000.0);
                one_minus_exp_pow(vartheta * zeta * (y + eta_over_rho), d)
            })
            .collect();
        let (m, se) = mean_and_se(&draws);
        assert!((m - terms.outage).abs() <= 3.0 * se, "mc={m} series={} se={se}", terms.outage);
    }

    #[test]
    fn sandwich_series_agrees_with_integral_routes() {
        let zeta = 3e4;
        for alpha in [3.0, 4.0] {
            for &(lambda, eta_over_rho) in &[(5e-5, 0.0), (1e-4, 1e-6), (3e-4, 5e-6)] {
                let field = ShotNoise::new(lambda, alpha, 3).unwrap();
                for d in [1u32, 4, 9, 16, 20] {
                    for vartheta in [1.0, 0.5] {
                        let theta = vartheta * zeta;
                        let w = theta * eta_over_rho;
                        let s = sandwich_series(d, zeta, vartheta, &field, eta_over_rho).unwrap();
                        let outage = sandwich_outage_integral(d, theta, w, &field);
                        let slope = sandwich_slope_integral(d, 2.0 / alpha, w);
                        assert_relative_eq!(s.outage, outage, max_relative = 1e-7);
                        assert_relative_eq!(s.linear_coeff, slope, max_relative = 1e-8);
                    }
                }
            }
        }
    }

    #[test]
    fn large_order_uses_integrals() {
        let field = ShotNoise::new(1e-5, 4.0, 8).unwrap();
        let t = sandwich_series(64, 3e4, 1.0, &field, 0.0).unwrap();
        assert!(t.outage > 0.0 && t.outage < 1.0);
        assert_relative_eq!(t.linear_coeff, order_stat_coeff(64, 4.0).unwrap(), max_relative = 1e-8);
    }
}
