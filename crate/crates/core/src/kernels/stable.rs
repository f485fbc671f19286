//! One-sided stable law with Laplace transform `exp(-s^a)`, `0 < a < 1`.
//!
//! The interference of a PPP with i.i.d. marks is `Y = (λ I_M)^{1/a} S` with
//! `a = 2/α`, so its distribution function follows from the Kanter integral
//! `P(S ≤ x) = (1/π) ∫_0^π exp(-x^{-a/(1-a)} K(φ)) dφ`.

use std::f64::consts::PI;

use crate::kernels::quadrature::tanh_sinh;

fn kanter(a: f64, phi: f64) -> f64 {
    let s_a = (a * phi).sin();
    (s_a / phi.sin()).powf(1.0 / (1.0 - a)) * ((1.0 - a) * phi).sin() / s_a
}

/// Survival function `P(S > x)` of the standard positive stable law.
pub fn positive_stable_sf(a: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 1.0;
    }
    let t = x.powf(-a / (1.0 - a));
    tanh_sinh(|phi| -(-t * kanter(a, phi)).exp_m1(), 0.0, PI, 0.02) / PI
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn erfc(x: f64) -> f64 {
        statrs::function::erf::erfc(x)
    }

    #[test]
    fn levy_case_matches_erfc() {
        // a = 1/2: S is Lévy with P(S ≤ x) = erfc(1/(2√x)).
        for &x in &[0.01, 0.1, 0.5, 1.0, 10.0, 1e3, 1e6] {
            let sf = positive_stable_sf(0.5, x);
            let expected = 1.0 - erfc(1.0 / (2.0 * x.sqrt()));
            assert_relative_eq!(sf, expected, max_relative = 1e-9, epsilon = 1e-300);
        }
    }

    #[test]
    fn tail_is_power_law() {
        // P(S > x) ~ x^{-a}/Γ(1-a)
        let a = 2.0 / 3.0;
        let x = 1e8;
        let sf = positive_stable_sf(a, x);
        let asym = x.powf(-a) / statrs::function::gamma::gamma(1.0 - a);
        assert_relative_eq!(sf, asym, max_relative = 1e-3);
    }
}
