use serde::Serialize;

use crate::error::{Error, Result};
use crate::params::NetworkParams;
use crate::scheme::Scheme;

/// Column order of density results.
pub const DENSITY_COLUMNS: [&str; 17] = [
    "scheme",
    "M",
    "N",
    "K",
    "alpha",
    "beta",
    "epsilon",
    "D",
    "rho",
    "eta",
    "lambda_eps",
    "ase",
    "method",
    "ci_low",
    "ci_high",
    "trials",
    "seed",
];

/// Column order of fixed-density outage estimates.
pub const OUTAGE_COLUMNS: [&str; 16] = [
    "scheme", "M", "N", "K", "alpha", "beta", "epsilon", "D", "rho", "eta", "lambda", "p_out", "ci_low", "ci_high",
    "trials", "seed",
];

/// Column order of validation reports.
pub const CHECK_COLUMNS: [&str; 5] = ["check", "status", "residual", "tolerance", "detail"];

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LinkColumns {
    pub scheme: Scheme,
    #[serde(rename = "M")]
    pub m: u32,
    #[serde(rename = "N")]
    pub n: u32,
    #[serde(rename = "K")]
    pub k: u32,
    pub alpha: f64,
    pub beta: f64,
    pub epsilon: f64,
    #[serde(rename = "D")]
    pub distance: f64,
    pub rho: f64,
    pub eta: f64,
}

impl LinkColumns {
    pub fn new(scheme: Scheme, p: &NetworkParams) -> Self {
        Self {
            scheme,
            m: p.m,
            n: p.n,
            k: p.k,
            alpha: p.alpha,
            beta: p.beta,
            epsilon: p.epsilon,
            distance: p.distance,
            rho: p.rho,
            eta: p.eta,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DensityRow {
    #[serde(flatten)]
    pub link: LinkColumns,
    pub lambda_eps: f64,
    pub ase: f64,
    pub method: String,
    pub ci_low: Option<f64>,
    pub ci_high: Option<f64>,
    pub trials: Option<u64>,
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OutageRow {
    #[serde(flatten)]
    pub link: LinkColumns,
    pub lambda: f64,
    pub p_out: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub trials: u64,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
    /// Measured and reported without a pass criterion.
    Info,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckRow {
    pub check: String,
    pub status: CheckStatus,
    pub residual: f64,
    pub tolerance: f64,
    pub detail: String,
}

/// CSV text of rows already serialized as JSON objects, in `columns` order.
/// Numbers use the JSON spelling so both encodings carry the same digits;
/// nulls become empty cells.
pub fn to_csv<T: Serialize>(columns: &[&str], rows: &[T]) -> Result<String> {
    let mut out = columns.join(",");
    out.push('\n');
    for row in rows {
        let value = serde_json::to_value(row).map_err(|e| Error::Numerical(e.to_string()))?;
        let cells: Vec<String> = columns
            .iter()
            .map(|c| match &value[*c] {
                serde_json::Value::Null => String::new(),
                serde_json::Value::String(s) if s.contains([',', '"', '\n']) => {
                    format!("\"{}\"", s.replace('"', "\"\""))
                }
                serde_json::Value::String(s) => s.clone(),
                other => other.to_string(),
            })
            .collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_matches_json_digits() {
        let p = NetworkParams { eta: 1.2345e-20, ..NetworkParams::default() };
        let row = DensityRow {
            link: LinkColumns::new(Scheme::ZfMiso, &p),
            lambda_eps: 1.0 / 3.0,
            ase: 0.1,
            method: "closed-form".into(),
            ci_low: None,
            ci_high: None,
            trials: None,
            seed: Some(7),
        };
        let csv = to_csv(&DENSITY_COLUMNS, std::slice::from_ref(&row)).unwrap();
        let line = csv.lines().nth(1).unwrap();
        let json = serde_json::to_value(&row).unwrap();
        assert!(line.contains(&json["eta"].to_string()));
        assert!(line.contains(&json["lambda_eps"].to_string()));
        assert!(line.starts_with("zf-miso,4,4,4,"));
        assert!(line.ends_with("closed-form,,,,7"));
        let cells: Vec<&str> = line.split(',').collect();
        assert_eq!(cells.len(), DENSITY_COLUMNS.len());
    }
}
