//! Closed-form outage probabilities, maximum contention densities, area
//! spectral efficiency and scaling exponents.

mod density;
mod exact;

pub use crate::params::NetworkParams;
pub use crate::scheme::{Scheme, SignalLaw};
pub use density::{
    analytic_densities, area_spectral_efficiency, density_bd, density_dpc_mimo, density_dpc_miso, density_dpc_sandwich,
    density_small_eps, density_zf, density_zf_antsel, outage_sandwich_lemma2, outage_upper_lemma1, scaling_exponent,
    DensityMethod, DensityResult, DpcMethod, ZfVariant,
};
pub use exact::{bisect_increasing, exact_density_root, exact_outage, EXACT_ROOT_TOLERANCE};
