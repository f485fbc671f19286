//! Small statistics toolbox: binomial intervals, goodness of fit, regression.

use serde::{Deserialize, Serialize};

/// Two-sided 95% normal quantile.
pub const Z_95: f64 = 1.959_963_984_540_054;

/// Wilson score interval for `successes` out of `trials`.
pub fn wilson_interval(successes: u64, trials: u64, z: f64) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = z * z;
    let denom = 1.0 + z2 / n;
    let centre = (p + z2 / (2.0 * n)) / denom;
    let half = z * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    let lo = if successes == 0 { 0.0 } else { (centre - half).max(0.0) };
    let hi = if successes == trials { 1.0 } else { (centre + half).min(1.0) };
    (lo.min(p), hi.max(p))
}

/// One-sample Kolmogorov–Smirnov result.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KsReport {
    pub statistic: f64,
    pub critical: f64,
    pub p_value: f64,
    pub samples: usize,
    pub pass: bool,
}

/// Kolmogorov survival function `Q(t) = 2 Σ (-1)^{k-1} e^{-2k²t²}`.
pub fn kolmogorov_sf(t: f64) -> f64 {
    if t <= 0.0 {
        return 1.0;
    }
    if t < 0.2 {
        return 1.0;
    }
    let mut acc = 0.0;
    for k in 1..=100 {
        let kf = k as f64;
        let term = (-2.0 * kf * kf * t * t).exp();
        acc += if k % 2 == 1 { term } else { -term };
        if term < 1e-17 {
            break;
        }
    }
    (2.0 * acc).clamp(0.0, 1.0)
}

/// KS test of `samples` against `cdf` at significance `level`, using
/// Stephens' finite-sample scaling `(√n + 0.12 + 0.11/√n) D`.
pub fn ks_test<F: Fn(f64) -> f64>(samples: &[f64], cdf: F, level: f64) -> KsReport {
    let mut xs = samples.to_vec();
    xs.sort_by(|a, b| a.total_cmp(b));
    let n = xs.len() as f64;
    let statistic = xs.iter().enumerate().fold(0.0f64, |acc, (i, &x)| {
        let f = cdf(x);
        let above = (i as f64 + 1.0) / n - f;
        let below = f - i as f64 / n;
        acc.max(above).max(below)
    });
    let scale = n.sqrt() + 0.12 + 0.11 / n.sqrt();
    let c_alpha = (-(level / 2.0).ln() / 2.0).sqrt();
    let p_value = kolmogorov_sf(scale * statistic);
    KsReport { statistic, critical: c_alpha / scale, p_value, samples: xs.len(), pass: statistic <= c_alpha / scale }
}

/// Cramér–von Mises statistic of `u` against Uniform(0, 1).
pub fn cramer_von_mises_uniform(u: &[f64]) -> f64 {
    let mut xs = u.to_vec();
    xs.sort_by(|a, b| a.total_cmp(b));
    let n = xs.len() as f64;
    1.0 / (12.0 * n)
        + xs.iter().enumerate().map(|(i, &x)| (x - (2.0 * i as f64 + 1.0) / (2.0 * n)).powi(2)).sum::<f64>()
}

/// Asymptotic 1% critical value of the Cramér–von Mises statistic.
pub const CVM_CRITICAL_1PCT: f64 = 0.743;

/// Ordinary least-squares slope and intercept.
pub fn ols(xs: &[f64], ys: &[f64]) -> Option<(f64, f64)> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return None;
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    Some((slope, my - slope * mx))
}

/// Log-log slope; needs at least `min_points` positive points.
pub fn log_log_slope(xs: &[f64], ys: &[f64], min_points: usize) -> Option<f64> {
    let (lx, ly): (Vec<f64>, Vec<f64>) =
        xs.iter().zip(ys).filter(|(x, y)| **x > 0.0 && **y > 0.0).map(|(x, y)| (x.ln(), y.ln())).unzip();
    if lx.len() < min_points {
        return None;
    }
    ols(&lx, &ly).map(|(s, _)| s)
}
