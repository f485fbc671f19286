//! Realizations of the network: Poisson interferer fields, Rayleigh channel
//! matrices, explicit precoders and receive filters, and per-trial SINR.

mod field;
mod link;
mod precoder;

pub use field::{default_window_radius, sample_field, FieldRealization, RadialSweep};
pub(crate) use link::{draw_link, explicit_mark, interferer_streams};
pub use link::{
    interference_mark, outage_sample, signal_gain, sinr_from_parts, sinr_sample, AntselMode, BdGain, ChannelSet,
    LinkRealization, MarkMode, PowerConvention, SignalMode, SimOptions,
};
pub use precoder::{bd_precoder, zf_precoder, BdPrecoder, PrecoderKind, PrecoderSet};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

/// Matrix of independent CN(0, 1) entries.
pub fn complex_gaussian<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| cn01(rng))
}

pub(crate) fn cn01<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Uniformly distributed unit vector in `C^n`.
pub fn random_unit_vector<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CVector {
    loop {
        let v = CVector::from_fn(n, |_, _| cn01(rng));
        let norm = v.norm();
        if norm > 0.0 {
            return v / Complex64::from(norm);
        }
    }
}
