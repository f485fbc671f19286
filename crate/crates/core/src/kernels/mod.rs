//! Special functions and the closed-form coefficient families.

pub mod coeffs;
pub mod fading;
pub mod laplace;
pub mod quadrature;
pub mod special;
pub mod stable;

pub use coeffs::{
    f_coeff, f_coeff_closed, interference_coeff, interference_coeff_moment, order_stat_coeff, sandwich_series,
    SandwichTerms, SERIES_MAX_ORDER,
};
pub use fading::GammaFadingLaw;
pub use laplace::{laplace_field, noise_laplace, NoisePath, ShotNoise};
pub use special::{beta_fn, chi2_cdf_and_bounds, Chi2Bounds};
