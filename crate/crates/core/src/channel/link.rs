use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, Exp1, Gamma};
use serde::{Deserialize, Serialize};

use super::field::{default_window_radius, RadialSweep};
use super::precoder::{bd_precoder, zf_precoder};
use super::{complex_gaussian, random_unit_vector, CMatrix, CVector};
use crate::error::{Error, Result};
use crate::params::NetworkParams;
use crate::scheme::{Scheme, SignalLaw};

/// How the useful-signal gain is produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SignalMode {
    /// Draw directly from the scheme's stated law.
    Surrogate,
    /// Build channels, precoders and receive filters.
    #[default]
    Explicit,
}

/// How interferer marks are produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MarkMode {
    /// Gamma(mark shape, 1) draws.
    #[default]
    Surrogate,
    /// Post-filter power of each interferer's own precoded streams.
    Explicit,
}

/// Receive antenna selection semantics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AntselMode {
    /// The typical receiver picks the antenna with the best post-zero-forcing
    /// gain against the other receivers' rows. With `K = M` each candidate
    /// gain is the projection onto the same one-dimensional null space, so
    /// the result is the maximum of `N` independent unit exponentials.
    #[default]
    Model,
    /// Every receiver picks its strongest antenna by channel norm, then the
    /// transmitter zero-forces across the selected rows.
    Physical,
}

/// Which block-diagonalization gain stands in for the signal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BdGain {
    /// `‖G_k‖²_F`, the upper-bound surrogate.
    #[default]
    Frobenius,
    /// Largest squared singular value of `G_k`.
    MaxSingular,
}

/// Power bookkeeping between streams.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PowerConvention {
    /// Every stream carries power `ρ`; `ρ` cancels when there is no noise.
    #[default]
    PerStream,
    /// Total power `ρ` split evenly over the transmitter's streams.
    TotalSplit,
}

/// Simulation switches. The defaults build the signal explicitly and draw
/// marks from their Gamma law.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimOptions {
    pub signal: SignalMode,
    pub marks: MarkMode,
    pub antsel: AntselMode,
    pub bd_gain: BdGain,
    pub power: PowerConvention,
    /// Field window radius; `None` picks [`default_window_radius`].
    pub window_radius: Option<f64>,
}

impl SimOptions {
    pub fn surrogate() -> Self {
        Self { signal: SignalMode::Surrogate, ..Self::default() }
    }

    pub fn window(&self, params: &NetworkParams) -> f64 {
        self.window_radius.unwrap_or_else(|| default_window_radius(params.lambda, params.distance))
    }

    /// Power per stream under the chosen convention.
    pub fn stream_power(&self, scheme: Scheme, params: &NetworkParams) -> f64 {
        match self.power {
            PowerConvention::PerStream => params.rho,
            PowerConvention::TotalSplit => params.rho / scheme.streams(params) as f64,
        }
    }
}

/// Direct channels `H_{0k}` (one `N × M` matrix per served receiver) and the
/// channels `H_{i}` from interferers to the typical receiver.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelSet {
    pub direct: Vec<CMatrix>,
    pub interferers: Vec<CMatrix>,
}

impl ChannelSet {
    /// Direct channels needed by `scheme`; interferer channels are drawn on
    /// demand by [`ChannelSet::add_interferers`] or [`interference_mark`].
    pub fn sample<R: Rng + ?Sized>(scheme: Scheme, params: &NetworkParams, rng: &mut R) -> Self {
        let (m, n) = (params.m as usize, params.n as usize);
        let users = match scheme {
            Scheme::DpcMimoUb | Scheme::DpcMiso | Scheme::ZfRxzf | Scheme::Siso => 1,
            _ => params.k as usize,
        };
        let direct = (0..users).map(|_| complex_gaussian(n, m, rng)).collect();
        Self { direct, interferers: Vec::new() }
    }

    pub fn add_interferers<R: Rng + ?Sized>(&mut self, count: usize, params: &NetworkParams, rng: &mut R) {
        let (m, n) = (params.m as usize, params.n as usize);
        self.interferers.extend((0..count).map(|_| complex_gaussian(n, m, rng)));
    }

    /// Every direct channel row on top of each other.
    fn stacked_rows(&self) -> CMatrix {
        let m = self.direct[0].ncols();
        let rows: usize = self.direct.iter().map(|h| h.nrows()).sum();
        let mut out = CMatrix::zeros(rows, m);
        let mut at = 0;
        for h in &self.direct {
            out.rows_mut(at, h.nrows()).copy_from(h);
            at += h.nrows();
        }
        out
    }
}

/// Signal gain of the typical stream and, if requested, the unit receive
/// filter that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct LinkRealization {
    pub gain: f64,
    pub filter: Option<CVector>,
}

fn basis_vector(n: usize, i: usize) -> CVector {
    let mut v = CVector::zeros(n);
    v[i] = Complex64::from(1.0);
    v
}

fn dominant_left(h: &CMatrix) -> CVector {
    h.clone().svd(true, false).u.expect("requested U").column(0).into_owned()
}

fn sample_law<R: Rng + ?Sized>(law: SignalLaw, rng: &mut R) -> f64 {
    match law {
        SignalLaw::Gamma(d) => MarkSampler::new(d).sample(rng),
        SignalLaw::MaxExp(n) => (0..n).map(|_| -> f64 { Exp1.sample(rng) }).fold(0.0, f64::max),
    }
}

/// Useful-signal gain `H₀` of the typical stream.
///
/// Returns a numerical error on a rank-deficient draw (a probability-zero
/// event); [`sinr_sample`] redraws in that case.
pub fn signal_gain<R: Rng + ?Sized>(
    scheme: Scheme,
    params: &NetworkParams,
    opts: &SimOptions,
    channels: &ChannelSet,
    rng: &mut R,
    want_filter: bool,
) -> Result<LinkRealization> {
    let n = params.n as usize;
    if opts.signal == SignalMode::Surrogate {
        return Ok(LinkRealization { gain: sample_law(scheme.signal_law(params), rng), filter: None });
    }
    let h0 = &channels.direct[0];
    let link = match scheme {
        Scheme::DpcMimoUb | Scheme::DpcMiso | Scheme::Siso => {
            LinkRealization { gain: h0.norm_squared(), filter: want_filter.then(|| dominant_left(h0)) }
        }
        Scheme::ZfMulti | Scheme::ZfMiso => {
            let stacked = channels.stacked_rows();
            let w = zf_precoder(&stacked)?;
            let gain = (stacked.row(0) * &w.blocks[0])[(0, 0)].norm_sqr();
            LinkRealization { gain, filter: want_filter.then(|| basis_vector(n, 0)) }
        }
        Scheme::ZfRxzf => {
            // Identity precoding: stream j rides column j of H₀.
            let h = h0.column(0).into_owned();
            let others = h0.columns(1, h0.ncols() - 1).into_owned();
            let residual = project_out(&h, &others)?;
            let gain = residual.norm_squared();
            let filter = want_filter.then(|| &residual / Complex64::from(gain.sqrt()));
            LinkRealization { gain, filter }
        }
        Scheme::ZfAntsel if opts.antsel == AntselMode::Model => {
            let m = params.m as usize;
            let others = channels.direct.len() - 1;
            // Rows of the other receivers, each on its strongest antenna,
            // as columns of Aᴴ.
            let mut a_adj = CMatrix::zeros(m, others);
            for (j, h) in channels.direct[1..].iter().enumerate() {
                let best = strongest_row(h);
                a_adj.column_mut(j).copy_from(&h.row(best).adjoint());
            }
            let h0 = &channels.direct[0];
            let mut best = (0, -1.0);
            for row in 0..h0.nrows() {
                let g = project_out(&h0.row(row).adjoint(), &a_adj)?.norm_squared();
                if g > best.1 {
                    best = (row, g);
                }
            }
            LinkRealization { gain: best.1, filter: want_filter.then(|| basis_vector(n, best.0)) }
        }
        Scheme::ZfAntsel => {
            let m = params.m as usize;
            let mut stacked = CMatrix::zeros(channels.direct.len(), m);
            let mut chosen = 0;
            for (k, h) in channels.direct.iter().enumerate() {
                let best = strongest_row(h);
                if k == 0 {
                    chosen = best;
                }
                stacked.row_mut(k).copy_from(&h.row(best));
            }
            let w = zf_precoder(&stacked)?;
            let gain = (stacked.row(0) * &w.blocks[0])[(0, 0)].norm_sqr();
            LinkRealization { gain, filter: want_filter.then(|| basis_vector(n, chosen)) }
        }
        Scheme::BdUb => {
            let bd = bd_precoder(&channels.direct)?;
            let gain = match opts.bd_gain {
                BdGain::Frobenius => bd.frobenius[0],
                BdGain::MaxSingular => bd.mu2_max[0],
            };
            LinkRealization { gain, filter: want_filter.then(|| dominant_left(&bd.effective[0])) }
        }
    };
    Ok(link)
}

fn strongest_row(h: &CMatrix) -> usize {
    (0..h.nrows())
        .max_by(|&a, &b| h.row(a).norm_squared().total_cmp(&h.row(b).norm_squared()))
        .expect("at least one antenna")
}

/// `h − A(AᴴA)⁻¹Aᴴh`.
fn project_out(h: &CVector, a: &CMatrix) -> Result<CVector> {
    if a.ncols() == 0 {
        return Ok(h.clone());
    }
    let a_adj = a.adjoint();
    let gram_inv =
        (&a_adj * a).try_inverse().ok_or_else(|| Error::Numerical("rank-deficient stream channels".into()))?;
    Ok(h - a * (gram_inv * (a_adj * h)))
}

/// Gamma(d, 1) sampler prepared once per shape.
#[derive(Debug, Clone, Copy)]
pub(crate) enum MarkSampler {
    SumExp(u32),
    Gamma(Gamma<f64>),
}

impl MarkSampler {
    pub(crate) fn new(shape: u32) -> Self {
        if shape <= 4 {
            Self::SumExp(shape)
        } else {
            Self::Gamma(Gamma::new(shape as f64, 1.0).expect("positive shape"))
        }
    }

    pub(crate) fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self {
            Self::SumExp(d) => (0..*d).map(|_| -> f64 { Exp1.sample(rng) }).sum(),
            Self::Gamma(g) => g.sample(rng),
        }
    }
}

/// Transmit directions of one interferer's streams, as columns.
pub(crate) fn interferer_streams<R: Rng + ?Sized>(scheme: Scheme, params: &NetworkParams, rng: &mut R) -> CMatrix {
    let (m, n, k) = (params.m as usize, params.n as usize, params.k as usize);
    loop {
        let built = match scheme {
            Scheme::DpcMimoUb | Scheme::DpcMiso | Scheme::ZfRxzf | Scheme::Siso => return CMatrix::identity(m, m),
            Scheme::ZfMiso | Scheme::ZfAntsel => zf_precoder(&complex_gaussian(k, m, rng)).map(|p| p.stacked()),
            Scheme::ZfMulti => zf_precoder(&complex_gaussian(k * n, m, rng)).map(|p| p.stacked()),
            Scheme::BdUb => {
                let hs: Vec<CMatrix> = (0..k).map(|_| complex_gaussian(n, m, rng)).collect();
                bd_precoder(&hs).map(|bd| {
                    let mut t = CMatrix::zeros(m, k);
                    for (j, (w, g)) in bd.precoders.blocks.iter().zip(&bd.effective).enumerate() {
                        let x = g.clone().svd(false, true).v_t.expect("requested V").row(0).adjoint();
                        t.column_mut(j).copy_from(&(w * x));
                    }
                    t
                })
            }
        };
        if let Ok(w) = built {
            return w;
        }
    }
}

/// Mark `I_i` of one interferer seen through the unit receive filter `v`.
///
/// Surrogate mode draws Gamma(mark shape, 1). Explicit mode draws the
/// interferer's channel `H_i` and its own precoder and returns
/// `‖vᴴ H_i W_i‖²`, the summed power of its independent streams. Without a
/// filter a uniformly random unit vector is used, which has the same law by
/// isotropy.
pub fn interference_mark<R: Rng + ?Sized>(
    scheme: Scheme,
    params: &NetworkParams,
    opts: &SimOptions,
    filter: Option<&CVector>,
    rng: &mut R,
) -> f64 {
    match opts.marks {
        MarkMode::Surrogate => MarkSampler::new(scheme.mark_shape(params)).sample(rng),
        MarkMode::Explicit => {
            let w = interferer_streams(scheme, params, rng);
            explicit_mark(&w, params, filter, rng)
        }
    }
}

pub(crate) fn explicit_mark<R: Rng + ?Sized>(
    streams: &CMatrix,
    params: &NetworkParams,
    filter: Option<&CVector>,
    rng: &mut R,
) -> f64 {
    let n = params.n as usize;
    let h = complex_gaussian(n, params.m as usize, rng);
    let q = match filter {
        Some(v) => v.adjoint() * h,
        None => random_unit_vector(n, rng).adjoint() * h,
    };
    (q * streams).norm_squared()
}

/// Eq.-1 SINR `ρ'H₀D^{−α} / (ρ'Y + η)` with `ρ'` the per-stream power.
pub fn sinr_from_parts(scheme: Scheme, params: &NetworkParams, opts: &SimOptions, gain: f64, interference: f64) -> f64 {
    let rho = opts.stream_power(scheme, params);
    rho * gain * params.distance.powf(-params.alpha) / (rho * interference + params.eta)
}

#[inline]
fn pathloss_sq(r2: f64, alpha: f64) -> f64 {
    if alpha == 4.0 {
        1.0 / (r2 * r2)
    } else {
        r2.powf(-0.5 * alpha)
    }
}

pub(crate) fn draw_link<R: Rng + ?Sized>(
    scheme: Scheme,
    params: &NetworkParams,
    opts: &SimOptions,
    rng: &mut R,
) -> Result<LinkRealization> {
    scheme.check_feasible(params)?;
    let want_filter = opts.marks == MarkMode::Explicit;
    for _ in 0..1000 {
        let channels = ChannelSet::sample(scheme, params, rng);
        match signal_gain(scheme, params, opts, &channels, rng, want_filter) {
            Err(Error::Numerical(_)) => continue,
            other => return other,
        }
    }
    Err(Error::Numerical("repeated rank-deficient channel draws".into()))
}

struct MarkSource<'a> {
    scheme: Scheme,
    params: &'a NetworkParams,
    opts: &'a SimOptions,
    filter: Option<CVector>,
    sampler: MarkSampler,
}

impl<'a> MarkSource<'a> {
    fn new(scheme: Scheme, params: &'a NetworkParams, opts: &'a SimOptions, filter: Option<CVector>) -> Self {
        Self { scheme, params, opts, filter, sampler: MarkSampler::new(scheme.mark_shape(params)) }
    }

    fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self.opts.marks {
            MarkMode::Surrogate => self.sampler.sample(rng),
            MarkMode::Explicit => interference_mark(self.scheme, self.params, self.opts, self.filter.as_ref(), rng),
        }
    }
}

/// One SINR realization: a fresh field, channels and marks.
pub fn sinr_sample<R: Rng + ?Sized>(
    scheme: Scheme,
    params: &NetworkParams,
    opts: &SimOptions,
    rng: &mut R,
) -> Result<f64> {
    params.validate_link()?;
    let link = draw_link(scheme, params, opts, rng)?;
    let marks = MarkSource::new(scheme, params, opts, link.filter);
    let mut sweep = RadialSweep::new(params.lambda, opts.window(params), rng);
    let mut y = 0.0;
    while let Some(r2) = sweep.next() {
        y += marks.draw(sweep.rng()) * pathloss_sq(r2, params.alpha);
    }
    Ok(sinr_from_parts(scheme, params, opts, link.gain, y))
}

/// Whether one realization is in outage (`SINR < β`). Draws the same field
/// as [`sinr_sample`] but stops as soon as the interference, accumulated from
/// the nearest interferer outward, already exceeds the tolerable level.
pub fn outage_sample<R: Rng + ?Sized>(
    scheme: Scheme,
    params: &NetworkParams,
    opts: &SimOptions,
    rng: &mut R,
) -> Result<bool> {
    let link = draw_link(scheme, params, opts, rng)?;
    let rho = opts.stream_power(scheme, params);
    let signal = rho * link.gain * params.distance.powf(-params.alpha);
    let beta = params.beta;
    if beta == 0.0 {
        return Ok(false);
    }
    let tolerable = signal / (beta * rho) - params.eta / rho;
    if tolerable < 0.0 {
        return Ok(true);
    }
    let marks = MarkSource::new(scheme, params, opts, link.filter);
    let mut sweep = RadialSweep::new(params.lambda, opts.window(params), rng);
    let mut y = 0.0;
    while let Some(r2) = sweep.next() {
        y += marks.draw(sweep.rng()) * pathloss_sq(r2, params.alpha);
        if y > tolerable {
            return Ok(true);
        }
    }
    Ok(signal < beta * (rho * y + params.eta))
}
