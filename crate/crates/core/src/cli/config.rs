use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::channel::SimOptions;
use crate::error::{Error, Result};
use crate::mc::{BisectionConfig, GridPoint, SweepMode};
use crate::params::NetworkParams;
use crate::scheme::Scheme;

/// Output encoding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// Which dirty-paper density rows the analytic command reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum DpcRows {
    #[default]
    All,
    SmallEps,
    UpperBound,
    Sandwich,
}

/// Network-parameter overrides for one scheme.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SchemeOverride {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub distance: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rho: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<u32>,
}

/// Everything an experiment needs. Stored as flat TOML keys, with optional
/// `[options]` simulation switches and `[scheme.<name>]` override tables.
///
/// The defaults are the single-antenna reference link at D = 10 m,
/// ε = 0.1, α = 4, β = 3, no noise.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub alpha: f64,
    pub distance: f64,
    pub rho: f64,
    pub eta: f64,
    pub beta: f64,
    pub epsilon: f64,
    pub m: u32,
    pub n: u32,
    pub k: u32,
    /// Fixed density for `simulate`; when absent `simulate` searches for the
    /// maximum density instead.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    pub schemes: Vec<Scheme>,
    /// Sweep sizes on the diagonal `M = N = K`.
    pub grid: Vec<u32>,
    /// Explicit sweep points `[M, N, K]`, used in addition to `grid`.
    pub grid_points: Vec<[u32; 3]>,
    pub mode: SweepMode,
    pub dpc_method: DpcRows,
    /// Trials for a fixed-density outage estimate, and samples per
    /// distribution check in `validate`.
    pub trials: u64,
    /// TOML integers are signed, so seeds above `i64::MAX` are written as
    /// decimal strings.
    #[serde(with = "seed_repr")]
    pub seed: u64,
    /// Relative bracket width at which density bisection stops.
    pub tolerance: f64,
    pub initial_trials: u64,
    pub max_trials: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<String>,
    pub format: Format,
    pub options: SimOptions,
    pub scheme: BTreeMap<String, SchemeOverride>,
}

mod seed_repr {
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(seed: &u64, s: S) -> Result<S::Ok, S::Error> {
        match i64::try_from(*seed) {
            Ok(v) => s.serialize_i64(v),
            Err(_) => s.serialize_str(&seed.to_string()),
        }
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Int(u64),
        Text(String),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<u64, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Int(v) => Ok(v),
            Repr::Text(t) => t.parse().map_err(|_| de::Error::custom(format!("seed must be a u64, got {t:?}"))),
        }
    }
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        let b = BisectionConfig::default();
        Self {
            alpha: 4.0,
            distance: 10.0,
            rho: 1.0,
            eta: 0.0,
            beta: 3.0,
            epsilon: 0.1,
            m: 1,
            n: 1,
            k: 1,
            lambda: None,
            schemes: vec![Scheme::ZfMiso],
            grid: Vec::new(),
            grid_points: Vec::new(),
            mode: SweepMode::Analytic,
            dpc_method: DpcRows::All,
            trials: 100_000,
            seed: 1,
            tolerance: b.tolerance,
            initial_trials: b.initial_trials,
            max_trials: b.max_trials,
            out: None,
            format: Format::Csv,
            options: SimOptions::default(),
            scheme: BTreeMap::new(),
        }
    }
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| Error::Config(e.message().to_string()))?;
        for name in cfg.scheme.keys() {
            name.parse::<Scheme>().map_err(|_| Error::Config(format!("unknown scheme section [scheme.{name}]")))?;
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text =
            std::fs::read_to_string(path).map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml(&text).map_err(|e| match e {
            Error::Config(msg) => Error::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    /// Base parameters; `lambda` is the fixed density when one is set.
    pub fn network(&self) -> NetworkParams {
        NetworkParams {
            lambda: self.lambda.unwrap_or(0.0),
            alpha: self.alpha,
            distance: self.distance,
            rho: self.rho,
            eta: self.eta,
            beta: self.beta,
            epsilon: self.epsilon,
            m: self.m,
            n: self.n,
            k: self.k,
        }
    }

    /// Parameters for `scheme` after its override section.
    pub fn network_for(&self, scheme: Scheme) -> NetworkParams {
        let mut p = self.network();
        if let Some(o) =
            self.scheme.iter().find(|(name, _)| name.parse::<Scheme>().ok() == Some(scheme)).map(|(_, o)| o)
        {
            p.alpha = o.alpha.unwrap_or(p.alpha);
            p.distance = o.distance.unwrap_or(p.distance);
            p.rho = o.rho.unwrap_or(p.rho);
            p.eta = o.eta.unwrap_or(p.eta);
            p.beta = o.beta.unwrap_or(p.beta);
            p.epsilon = o.epsilon.unwrap_or(p.epsilon);
            p.m = o.m.unwrap_or(p.m);
            p.n = o.n.unwrap_or(p.n);
            p.k = o.k.unwrap_or(p.k);
        }
        p
    }

    pub fn grid_points(&self) -> Vec<GridPoint> {
        let mut pts: Vec<GridPoint> = self.grid.iter().map(|&s| GridPoint::diagonal(s)).collect();
        pts.extend(self.grid_points.iter().map(|&[m, n, k]| GridPoint { m, n, k }));
        pts
    }

    pub fn bisection(&self) -> BisectionConfig {
        BisectionConfig {
            tolerance: self.tolerance,
            initial_trials: self.initial_trials,
            max_trials: self.max_trials,
            options: self.options,
        }
    }

    /// Checks that do not depend on the command.
    pub fn validate(&self) -> Result<()> {
        let cfg = |msg: String| Err(Error::Config(msg));
        if self.schemes.is_empty() {
            return cfg("schemes must name at least one scheme".into());
        }
        for &s in &self.schemes {
            let p = NetworkParams { lambda: self.lambda.unwrap_or(1e-4), ..self.network_for(s) };
            p.validate().map_err(|e| match e {
                Error::Domain(msg) => Error::Config(msg),
                other => other,
            })?;
        }
        if let Some(l) = self.lambda {
            if !(l >= 0.0 && l.is_finite()) {
                return cfg(format!("lambda must be a finite nonnegative density, got {l}"));
            }
        }
        if self.trials == 0 {
            return cfg("trials must be at least 1".into());
        }
        if !(self.tolerance > 0.0 && self.tolerance < 1.0) {
            return cfg(format!("tolerance must lie in (0, 1), got {}", self.tolerance));
        }
        if self.initial_trials == 0 || self.max_trials < self.initial_trials {
            return cfg(format!(
                "need 1 ≤ initial_trials ≤ max_trials, got {} and {}",
                self.initial_trials, self.max_trials
            ));
        }
        if let Some(r) = self.options.window_radius {
            if !(r > 0.0 && r.is_finite()) {
                return cfg(format!("options.window_radius must be positive, got {r}"));
            }
        }
        if self.grid.iter().chain(self.grid_points.iter().flatten()).any(|&v| v == 0) {
            return cfg("grid sizes must be at least 1".into());
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::MarkMode;

    #[test]
    fn default_round_trips() {
        let cfg = ExperimentConfig::default();
        assert_eq!(ExperimentConfig::from_toml(&cfg.to_toml().unwrap()).unwrap(), cfg);
    }

    #[test]
    fn seeds_beyond_signed_range_survive() {
        let cfg = ExperimentConfig { seed: u64::MAX, ..ExperimentConfig::default() };
        let text = cfg.to_toml().unwrap();
        assert!(text.contains("seed = \"18446744073709551615\""));
        assert_eq!(ExperimentConfig::from_toml(&text).unwrap().seed, u64::MAX);
        assert_eq!(ExperimentConfig::from_toml("seed = 7").unwrap().seed, 7);
        assert!(ExperimentConfig::from_toml("seed = \"x\"").is_err());
    }

    #[test]
    fn full_config_round_trips() {
        let mut cfg = ExperimentConfig {
            lambda: Some(3.5e-5),
            schemes: vec![Scheme::DpcMimoUb, Scheme::BdUb],
            grid: vec![2, 4],
            grid_points: vec![[8, 2, 2]],
            mode: SweepMode::Both,
            out: Some("x.json".into()),
            format: Format::Json,
            options: SimOptions { marks: MarkMode::Explicit, window_radius: Some(500.0), ..SimOptions::default() },
            ..ExperimentConfig::default()
        };
        cfg.scheme.insert("bd-ub".into(), SchemeOverride { k: Some(2), eta: Some(1e-7), ..SchemeOverride::default() });
        let back = ExperimentConfig::from_toml(&cfg.to_toml().unwrap()).unwrap();
        assert_eq!(back, cfg);
        assert_eq!(back.network_for(Scheme::BdUb).k, 2);
        assert_eq!(back.network_for(Scheme::DpcMimoUb).k, 1);
    }

    #[test]
    fn unknown_keys_are_named() {
        let err = ExperimentConfig::from_toml("alpha = 4.0\nbogus_key = 1\n").unwrap_err();
        assert!(err.to_string().contains("bogus_key"), "{err}");
        let err = ExperimentConfig::from_toml("[scheme.zf-miso]\nmm = 3\n").unwrap_err();
        assert!(err.to_string().contains("mm"), "{err}");
        let err = ExperimentConfig::from_toml("[scheme.nope]\nm = 3\n").unwrap_err();
        assert!(err.to_string().contains("nope"), "{err}");
    }

    #[test]
    fn epsilon_zero_names_the_field() {
        let cfg = ExperimentConfig::from_toml("epsilon = 0.0\n").unwrap();
        let err = cfg.validate().unwrap_err();
        assert!(matches!(err, Error::Config(_)) && err.to_string().contains("epsilon"), "{err}");
    }

    #[test]
    fn empty_scheme_list_rejected() {
        let cfg = ExperimentConfig::from_toml("schemes = []\n").unwrap();
        assert!(cfg.validate().is_err());
    }
}
