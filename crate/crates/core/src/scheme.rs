use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{precondition, Error, Result};
use crate::kernels::special::{one_minus_exp_pow, regularized_lower_gamma};
use crate::params::NetworkParams;

/// Transmission/reception strategy of every node in the network.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    /// Dirty-paper coding to multi-antenna receivers, Frobenius-norm signal
    /// bound.
    DpcMimoUb,
    /// Dirty-paper coding to single-antenna receivers.
    DpcMiso,
    /// Zero-forcing to `K` receivers with one stream per receive antenna.
    ZfMulti,
    /// Zero-forcing receive filter when `N > M`.
    ZfRxzf,
    /// Zero-forcing after best-receive-antenna selection.
    ZfAntsel,
    /// Zero-forcing to `M` single-antenna receivers.
    ZfMiso,
    /// Block diagonalization, Frobenius-norm signal bound.
    BdUb,
    /// Single-antenna Rayleigh link.
    Siso,
}

/// Distribution of the useful-signal fading `H₀`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SignalLaw {
    /// Sum of `d` unit exponentials.
    Gamma(u32),
    /// Maximum of `n` unit exponentials.
    MaxExp(u32),
}

impl SignalLaw {
    pub fn cdf(&self, x: f64) -> f64 {
        match *self {
            SignalLaw::Gamma(d) => regularized_lower_gamma(d as f64, x),
            SignalLaw::MaxExp(n) => one_minus_exp_pow(x, n),
        }
    }

    pub fn mean(&self) -> f64 {
        match *self {
            SignalLaw::Gamma(d) => d as f64,
            SignalLaw::MaxExp(n) => (1..=n).map(|i| 1.0 / i as f64).sum(),
        }
    }
}

impl Scheme {
    pub const ALL: [Scheme; 8] = [
        Scheme::DpcMimoUb,
        Scheme::DpcMiso,
        Scheme::ZfMulti,
        Scheme::ZfRxzf,
        Scheme::ZfAntsel,
        Scheme::ZfMiso,
        Scheme::BdUb,
        Scheme::Siso,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Scheme::DpcMimoUb => "dpc-mimo-ub",
            Scheme::DpcMiso => "dpc-miso",
            Scheme::ZfMulti => "zf-multi",
            Scheme::ZfRxzf => "zf-rxzf",
            Scheme::ZfAntsel => "zf-antsel",
            Scheme::ZfMiso => "zf-miso",
            Scheme::BdUb => "bd-ub",
            Scheme::Siso => "siso",
        }
    }

    /// Checks the antenna configuration against the scheme's requirements.
    pub fn check_feasible(&self, p: &NetworkParams) -> Result<()> {
        let (m, n, k) = (p.m, p.n, p.k);
        let fail = |msg: String| Err(precondition(format!("{}: {msg}", self.name())));
        match self {
            Scheme::DpcMimoUb => Ok(()),
            Scheme::DpcMiso if n != 1 => fail(format!("needs n = 1, got {n}")),
            Scheme::DpcMiso => Ok(()),
            Scheme::ZfMulti | Scheme::BdUb if m < k * n => fail(format!("needs m ≥ k·n, got m = {m}, k·n = {}", k * n)),
            Scheme::ZfMulti | Scheme::BdUb => Ok(()),
            Scheme::ZfRxzf if n <= m => fail(format!("needs n > m, got n = {n}, m = {m}")),
            Scheme::ZfRxzf if k != m => {
                fail(format!("serves one stream per transmit antenna, needs k = m, got k = {k}"))
            }
            Scheme::ZfRxzf => Ok(()),
            Scheme::ZfAntsel if k != m => fail(format!("needs k = m, got k = {k}, m = {m}")),
            Scheme::ZfAntsel => Ok(()),
            Scheme::ZfMiso if n != 1 || k != m => fail(format!("needs n = 1 and k = m, got n = {n}, k = {k}, m = {m}")),
            Scheme::ZfMiso => Ok(()),
            Scheme::Siso if (m, n, k) != (1, 1, 1) => fail(format!("needs m = n = k = 1, got ({m}, {n}, {k})")),
            Scheme::Siso => Ok(()),
        }
    }

    /// Law of the useful-signal gain `H₀`.
    pub fn signal_law(&self, p: &NetworkParams) -> SignalLaw {
        let (m, n, k) = (p.m, p.n, p.k);
        match self {
            Scheme::DpcMimoUb => SignalLaw::Gamma(m * n),
            Scheme::DpcMiso => SignalLaw::Gamma(m),
            Scheme::ZfMulti => SignalLaw::Gamma(m + 1 - k * n),
            Scheme::ZfRxzf => SignalLaw::Gamma(n + 1 - m),
            Scheme::ZfAntsel => SignalLaw::MaxExp(n),
            Scheme::ZfMiso | Scheme::Siso => SignalLaw::Gamma(1),
            Scheme::BdUb => SignalLaw::Gamma(n * m - (k - 1) * n * n),
        }
    }

    /// Shape of the Gamma law of each interferer's mark.
    pub fn mark_shape(&self, p: &NetworkParams) -> u32 {
        match self {
            Scheme::DpcMimoUb | Scheme::DpcMiso | Scheme::ZfAntsel | Scheme::ZfMiso | Scheme::ZfRxzf => p.m,
            Scheme::ZfMulti => p.k * p.n,
            Scheme::BdUb => p.k,
            Scheme::Siso => 1,
        }
    }

    /// Streams each transmitter sends, i.e. the number of independent
    /// messages that make up an interferer's mark.
    pub fn streams(&self, p: &NetworkParams) -> u32 {
        self.mark_shape(p)
    }

    /// Antenna count used as the abscissa of scaling plots: `N` for block
    /// diagonalization (swept at fixed `K` with `M = KN`), `M` otherwise.
    pub fn antenna_axis(&self, p: &NetworkParams) -> u32 {
        match self {
            Scheme::BdUb => p.n,
            _ => p.m,
        }
    }

    /// Moves an antenna configuration onto the scheme's native shape:
    /// single receive antennas for the MISO schemes, one receiver per
    /// transmit antenna where the scheme serves `K = M`, `M = KN` for block
    /// diagonalization when `M` is too small, and a 1×1 link for SISO. A grid
    /// written as `M = N` therefore sweeps every scheme sensibly.
    pub fn native_config(&self, p: &NetworkParams) -> NetworkParams {
        let (m, n, k) = (p.m, p.n, p.k);
        match self {
            Scheme::DpcMimoUb | Scheme::ZfMulti => *p,
            Scheme::DpcMiso => p.with_antennas(m, 1, k),
            Scheme::ZfMiso => p.with_antennas(m, 1, m),
            Scheme::ZfAntsel => p.with_antennas(m, n, m),
            Scheme::ZfRxzf => p.with_antennas(m, n.max(m + 1), m),
            Scheme::BdUb => p.with_antennas(m.max(k * n), n, k),
            Scheme::Siso => p.with_antennas(1, 1, 1),
        }
    }

    /// Success probability with no interferers, `1 - F_{H₀}(ζη/ρ)`.
    pub fn noise_only_success(&self, p: &NetworkParams) -> f64 {
        1.0 - self.signal_law(p).cdf(p.noise_exponent())
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase().replace('_', "-");
        Scheme::ALL
            .into_iter()
            .find(|sch| sch.name() == key)
            .or(match key.as_str() {
                "dpc-mimo" => Some(Scheme::DpcMimoUb),
                "bd" => Some(Scheme::BdUb),
                "siso-baseline" => Some(Scheme::Siso),
                _ => None,
            })
            .ok_or_else(|| Error::Config(format!("unknown scheme '{s}'")))
    }
}
