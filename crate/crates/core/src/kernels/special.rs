//! Gamma-family special functions.
//!
//! Log-gamma and the regularized incomplete gamma come from `statrs`; the
//! Beta function, binomials and the chi-square CDF sandwich are built on top
//! so that arguments up to a few thousand never overflow.

use statrs::function::gamma as sg;

use crate::error::{domain, Result};

/// Natural log of the gamma function for `x > 0`.
#[inline]
pub fn ln_gamma(x: f64) -> f64 {
    sg::ln_gamma(x)
}

#[inline]
pub fn gamma(x: f64) -> f64 {
    sg::gamma(x)
}

/// Regularized lower incomplete gamma `P(a, x)`.
pub fn regularized_lower_gamma(a: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x.is_infinite() {
        return 1.0;
    }
    sg::gamma_lr(a, x)
}

/// `ln B(a, b)`.
pub fn ln_beta(a: f64, b: f64) -> Result<f64> {
    if !(a > 0.0 && b > 0.0) {
        return Err(domain(format!("Beta arguments must be positive, got ({a}, {b})")));
    }
    Ok(ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b))
}

/// Beta function `B(a, b) = Γ(a)Γ(b)/Γ(a+b)`, evaluated through log-gamma.
pub fn beta_fn(a: f64, b: f64) -> Result<f64> {
    ln_beta(a, b).map(f64::exp)
}

/// `ln C(n, k)`.
pub fn ln_binomial(n: u32, k: u32) -> f64 {
    debug_assert!(k <= n);
    ln_gamma(n as f64 + 1.0) - ln_gamma(k as f64 + 1.0) - ln_gamma((n - k) as f64 + 1.0)
}

/// Exact binomial coefficient for small arguments, log-gamma otherwise.
pub fn binomial(n: u32, k: u32) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    if n <= 60 {
        let mut c: u128 = 1;
        for i in 0..k as u128 {
            c = c * (n as u128 - i) / (i + 1);
        }
        c as f64
    } else {
        ln_binomial(n, k).exp()
    }
}

/// The exact chi-square CDF together with its product-form sandwich.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Chi2Bounds {
    pub exact: f64,
    pub lower: f64,
    pub upper: f64,
}

/// Contraction factor `(d!)^{-1/d}` of the lower CDF bound.
pub fn sandwich_contraction(d: u32) -> f64 {
    (-ln_gamma(d as f64 + 1.0) / d as f64).exp()
}

/// `(1 - e^{-x})^d` without cancellation for small `x`.
pub(crate) fn one_minus_exp_pow(x: f64, d: u32) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    (d as f64 * (-(-x).exp_m1()).ln()).exp()
}

/// CDF of a Gamma(d, 1) variate at `x` (the `χ²_(2d)` law with mean `d`) and
/// the bounds `(1 - e^{-cx})^d ≤ P(d, x) ≤ (1 - e^{-x})^d`, `c = (d!)^{-1/d}`.
pub fn chi2_cdf_and_bounds(d: u32, x: f64) -> Result<Chi2Bounds> {
    if d == 0 {
        return Err(domain("chi-square degrees must be at least 1"));
    }
    if !(x >= 0.0) {
        return Err(domain(format!("chi-square argument must be nonnegative, got {x}")));
    }
    let c = sandwich_contraction(d);
    Ok(Chi2Bounds {
        exact: regularized_lower_gamma(d as f64, x),
        lower: one_minus_exp_pow(c * x, d),
        upper: one_minus_exp_pow(x, d),
    })
}

/// Neumaier-compensated summation.
#[derive(Debug, Default, Clone, Copy)]
pub(crate) struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    pub(crate) fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub(crate) fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = CompensatedSum::default();
        for x in iter {
            acc.add(x);
        }
        acc
    }
}
