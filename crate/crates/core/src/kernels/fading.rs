use rand::Rng;
use rand_distr::{Distribution, Exp1, Gamma};

use crate::error::{domain, Result};
use crate::kernels::special::regularized_lower_gamma;

/// The `χ²_(2d)` fading law: a sum of `d` independent unit-mean exponentials,
/// i.e. Gamma(shape `d`, scale 1), with mean `d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GammaFadingLaw {
    dof_pairs: u32,
}

impl GammaFadingLaw {
    pub fn new(dof_pairs: u32) -> Result<Self> {
        if dof_pairs == 0 {
            return Err(domain("Gamma fading law needs d ≥ 1"));
        }
        Ok(Self { dof_pairs })
    }

    pub fn dof_pairs(&self) -> u32 {
        self.dof_pairs
    }

    pub fn mean(&self) -> f64 {
        self.dof_pairs as f64
    }

    pub fn cdf(&self, x: f64) -> f64 {
        regularized_lower_gamma(self.dof_pairs as f64, x)
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self.dof_pairs {
            1 => Exp1.sample(rng),
            d if d <= 4 => (0..d).map(|_| -> f64 { Exp1.sample(rng) }).sum(),
            d => Gamma::new(d as f64, 1.0).expect("valid shape").sample(rng),
        }
    }
}
