use std::f64::consts::PI;

use rand::Rng;
use rand_distr::{Distribution, Exp1, Poisson};

/// Interferer positions around the typical receiver at the origin. The
/// typical transmitter is not part of the field.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldRealization {
    pub positions: Vec<[f64; 2]>,
    pub window_radius: f64,
    pub density: f64,
}

impl FieldRealization {
    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    /// Squared distances to the origin.
    pub fn distances_sq(&self) -> impl Iterator<Item = f64> + '_ {
        self.positions.iter().map(|[x, y]| x * x + y * y)
    }
}

/// `max(10/√λ, 100 D)`: wide enough that the truncated tail of the shot
/// noise is far below Monte Carlo resolution.
pub fn default_window_radius(lambda: f64, distance: f64) -> f64 {
    let by_density = if lambda > 0.0 { 10.0 / lambda.sqrt() } else { 0.0 };
    by_density.max(100.0 * distance)
}

/// Homogeneous Poisson field of intensity `lambda` on the disc of radius
/// `window_radius`.
pub fn sample_field<R: Rng + ?Sized>(lambda: f64, window_radius: f64, rng: &mut R) -> FieldRealization {
    let mean = lambda * PI * window_radius * window_radius;
    let count = if mean > 0.0 { Poisson::new(mean).expect("positive mean").sample(rng) as usize } else { 0 };
    let positions = (0..count)
        .map(|_| {
            let r = window_radius * rng.gen::<f64>().sqrt();
            let theta = 2.0 * PI * rng.gen::<f64>();
            [r * theta.cos(), r * theta.sin()]
        })
        .collect();
    FieldRealization { positions, window_radius, density: lambda }
}

/// The same Poisson field generated outward: squared radii are the arrival
/// times of a rate-`λπ` process, stopped at the window edge. Nearest
/// interferers come first, which lets an outage test stop early. Under a
/// common random stream the squared radii scale exactly as `1/λ`.
#[derive(Debug)]
pub struct RadialSweep<'a, R: Rng + ?Sized> {
    rng: &'a mut R,
    scale: f64,
    r2_max: f64,
    r2: f64,
}

impl<'a, R: Rng + ?Sized> RadialSweep<'a, R> {
    pub fn new(lambda: f64, window_radius: f64, rng: &'a mut R) -> Self {
        let scale = if lambda > 0.0 { 1.0 / (lambda * PI) } else { f64::INFINITY };
        Self { rng, scale, r2_max: window_radius * window_radius, r2: 0.0 }
    }

    /// Gives back the stream for mark sampling between points.
    pub fn rng(&mut self) -> &mut R {
        self.rng
    }
}

impl<R: Rng + ?Sized> Iterator for RadialSweep<'_, R> {
    type Item = f64;

    fn next(&mut self) -> Option<f64> {
        if !self.scale.is_finite() {
            return None;
        }
        let step: f64 = Exp1.sample(self.rng);
        self.r2 += step * self.scale;
        (self.r2 <= self.r2_max).then_some(self.r2)
    }
}
