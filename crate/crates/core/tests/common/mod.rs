//! Test-side oracles written from elementary identities, independent of the
//! crate's special functions.

#![allow(dead_code)]

use std::f64::consts::PI;

/// `πΓ(1-a)Γ(M+a)/Γ(M)` via the reflection formula and the rising product
/// `Γ(M+a)/Γ(1+a) = Π_{j=1}^{M-1} (j+a)`.
pub fn interference_coeff(m: u32, alpha: f64) -> f64 {
    let a = 2.0 / alpha;
    let reflect = PI * a / (PI * a).sin();
    let rising: f64 = (1..m).map(|j| (j as f64 + a) / j as f64).product();
    PI * reflect * rising
}

/// `Γ(1-a)Γ(d)/Γ(d-a) = Π_{j=1}^{d-1} j/(j-a)`.
pub fn f_coeff(d: u32, alpha: f64) -> f64 {
    let a = 2.0 / alpha;
    (1..d).map(|j| j as f64 / (j as f64 - a)).product()
}

/// Rayleigh link success probability with Rayleigh interferers and no noise.
pub fn siso_success(lambda: f64, alpha: f64, beta: f64, distance: f64) -> f64 {
    (-lambda * beta.powf(2.0 / alpha) * distance * distance * interference_coeff(1, alpha)).exp()
}

/// Exact ZF-MISO density `-ln(1-ε) / (I_M β^{2/α} D²)` with no noise.
pub fn zf_miso_density(m: u32, alpha: f64, beta: f64, distance: f64, epsilon: f64) -> f64 {
    -(-epsilon).ln_1p() / (interference_coeff(m, alpha) * beta.powf(2.0 / alpha) * distance * distance)
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn log_log_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}

pub fn relative_error(value: f64, reference: f64) -> f64 {
    (value / reference - 1.0).abs()
}
