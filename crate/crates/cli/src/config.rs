use std::fmt;
use std::path::{Path, PathBuf};

use hypercalc::quad::{ContourSpec, Radius};
use serde::{Deserialize, Serialize};

/// A usage or configuration problem, located by its field path.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub path: String,
    pub message: String,
}

impl ConfigError {
    pub fn new(path: impl Into<String>, message: impl Into<String>) -> Self {
        ConfigError {
            path: path.into(),
            message: message.into(),
        }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.path.is_empty() {
            f.write_str(&self.message)
        } else {
            write!(f, "{}: {}", self.path, self.message)
        }
    }
}

/// Contour defaults shared by every pairing.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ContourDefaults {
    /// Fixed offset `η`; by default half the narrowest strip.
    pub eta: Option<f64>,
    /// Fixed half-length `R`; by default chosen from the tail bound.
    pub radius: Option<f64>,
    pub abs_tol: Option<f64>,
}

/// Per-command parameters; each command reads the ones it needs.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Params {
    pub label: Option<String>,
    pub expr: Option<String>,
    pub strip: Option<f64>,
    pub growth: Option<String>,
    pub constant: Option<f64>,
    pub delta: Option<usize>,
    pub test: Option<String>,
    pub standardize: Option<bool>,
    pub order: Option<usize>,
    pub lambdas: Option<Vec<f64>>,
    pub k_cap: Option<usize>,
    pub q_max: Option<usize>,
    pub eps: Option<Vec<f64>>,
    pub directions: Option<usize>,
    pub direction: Option<Vec<f64>>,
    pub xi: Option<Vec<f64>>,
    pub t_grid: Option<Vec<f64>>,
    pub field: Option<String>,
    pub moments: Option<Vec<f64>>,
    pub bound: Option<[f64; 2]>,
    pub half_width: Option<f64>,
    pub complete: Option<bool>,
    pub weight_power: Option<f64>,
    pub weight_table: Option<Vec<f64>>,
    pub terms: Option<usize>,
    pub op: Option<String>,
    pub basis: Option<String>,
    pub init: Option<String>,
    pub tau: Option<[f64; 2]>,
    pub route: Option<String>,
    pub only: Option<Vec<u32>>,
}

/// A job: one command with its inputs, contour defaults, seed and output
/// location.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobConfig {
    pub command: Option<String>,
    /// `corpus` for the built-in corpus, otherwise a corpus file.
    pub input: Option<String>,
    #[serde(default)]
    pub contour: ContourDefaults,
    /// Directory receiving `<command>.json` and `<command>.csv`.
    pub output: Option<PathBuf>,
    pub seed: Option<u64>,
    #[serde(default)]
    pub params: Params,
}

pub const DEFAULT_SEED: u64 = 7;

/// Reads a config file; parse errors carry the offending field path.
pub fn load(path: &Path) -> Result<JobConfig, ConfigError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| ConfigError::new("", format!("cannot read config {}: {e}", path.display())))?;
    parse(&text)
}

pub fn parse(text: &str) -> Result<JobConfig, ConfigError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let path = if path == "." { String::new() } else { path };
        ConfigError::new(path, e.into_inner().to_string())
    })
}

/// Fields set in `over` replace those in `base`.
macro_rules! overlay {
    ($base:expr, $over:expr, $($f:ident),* $(,)?) => {
        $( if $over.$f.is_some() { $base.$f = $over.$f.clone(); } )*
    };
}

impl JobConfig {
    pub fn overlay(mut self, over: &JobConfig) -> JobConfig {
        overlay!(self, over, command, input, output, seed);
        overlay!(self.contour, over.contour, eta, radius, abs_tol);
        overlay!(
            self.params,
            over.params,
            label,
            expr,
            strip,
            growth,
            constant,
            delta,
            test,
            standardize,
            order,
            lambdas,
            k_cap,
            q_max,
            eps,
            directions,
            direction,
            xi,
            t_grid,
            field,
            moments,
            bound,
            half_width,
            complete,
            weight_power,
            weight_table,
            terms,
            op,
            basis,
            init,
            tau,
            route,
            only,
        );
        self
    }

    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(DEFAULT_SEED)
    }

    /// The contour spec with the configured defaults applied.
    pub fn spec(&self) -> ContourSpec {
        let mut s = ContourSpec::default();
        if let Some(t) = self.contour.abs_tol {
            s = s.with_tol(t);
        }
        if let Some(r) = self.contour.radius {
            s = s.with_radius(Radius::Fixed(r));
        }
        if let Some(e) = self.contour.eta {
            s = s.with_offset(e);
        }
        s
    }

    /// Range checks, reported with the path of the first offending field.
    pub fn validate(&self) -> Result<(), ConfigError> {
        fn positive(path: &str, v: Option<f64>) -> Result<(), ConfigError> {
            match v {
                Some(x) if !(x.is_finite() && x > 0.0) => Err(ConfigError::new(path, format!("must be positive, got {x}"))),
                _ => Ok(()),
            }
        }
        fn all_positive(path: &str, v: &Option<Vec<f64>>) -> Result<(), ConfigError> {
            if let Some(list) = v {
                if list.is_empty() {
                    return Err(ConfigError::new(path, "must not be empty"));
                }
                for (i, x) in list.iter().enumerate() {
                    positive(&format!("{path}[{i}]"), Some(*x))?;
                }
            }
            Ok(())
        }
        fn finite(path: &str, v: &Option<Vec<f64>>) -> Result<(), ConfigError> {
            if let Some(list) = v {
                for (i, x) in list.iter().enumerate() {
                    if !x.is_finite() {
                        return Err(ConfigError::new(format!("{path}[{i}]"), format!("must be finite, got {x}")));
                    }
                }
            }
            Ok(())
        }
        positive("contour.eta", self.contour.eta)?;
        positive("contour.radius", self.contour.radius)?;
        positive("contour.abs_tol", self.contour.abs_tol)?;
        let p = &self.params;
        positive("params.strip", p.strip)?;
        positive("params.half_width", p.half_width)?;
        if let Some(c) = p.constant {
            if !(c.is_finite() && c >= 0.0) {
                return Err(ConfigError::new("params.constant", format!("must be nonnegative, got {c}")));
            }
        }
        all_positive("params.lambdas", &p.lambdas)?;
        all_positive("params.eps", &p.eps)?;
        all_positive("params.weight_table", &p.weight_table)?;
        positive("params.weight_power", p.weight_power)?;
        finite("params.direction", &p.direction)?;
        finite("params.xi", &p.xi)?;
        finite("params.t_grid", &p.t_grid)?;
        finite("params.moments", &p.moments)?;
        if let Some([m, r]) = p.bound {
            positive("params.bound[0]", Some(m))?;
            positive("params.bound[1]", Some(r))?;
        }
        for (path, v) in [("params.directions", p.directions), ("params.q_max", p.q_max), ("params.terms", p.terms)] {
            if v == Some(0) {
                return Err(ConfigError::new(path, "must be at least 1"));
            }
        }
        if let Some(ids) = &p.only {
            for (i, id) in ids.iter().enumerate() {
                if !(1..=hypercalc::acceptance::CRITERIA).contains(id) {
                    return Err(ConfigError::new(
                        format!("params.only[{i}]"),
                        format!("no criterion {id}; criteria run from 1 to {}", hypercalc::acceptance::CRITERIA),
                    ));
                }
            }
        }
        if let Some(basis) = &p.basis {
            if basis != "delta" && basis != "fp" {
                return Err(ConfigError::new("params.basis", format!("expected delta or fp, got `{basis}`")));
            }
        }
        if let Some(route) = &p.route {
            if !matches!(route.as_str(), "direct" | "fourier" | "both") {
                return Err(ConfigError::new("params.route", format!("expected direct, fourier or both, got `{route}`")));
            }
        }
        if p.weight_power.is_some() && p.weight_table.is_some() {
            return Err(ConfigError::new("params.weight_table", "give either weight_power or weight_table"));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_errors_name_the_field() {
        let e = parse(r#"{"contour": {"abs_tol": "small"}}"#).unwrap_err();
        assert_eq!(e.path, "contour.abs_tol");
        let e = parse(r#"{"params": {"lambdas": [1, "x"]}}"#).unwrap_err();
        assert_eq!(e.path, "params.lambdas[1]");
        let e = parse(r#"{"params": {"nonsense": 1}}"#).unwrap_err();
        assert_eq!(e.path, "params.nonsense");
    }

    #[test]
    fn validation_names_the_field() {
        let c = parse(r#"{"contour": {"abs_tol": -1e-9}}"#).unwrap();
        assert_eq!(c.validate().unwrap_err().path, "contour.abs_tol");
        let c = parse(r#"{"params": {"eps": [0.1, 0.0]}}"#).unwrap();
        assert_eq!(c.validate().unwrap_err().path, "params.eps[1]");
        let c = parse(r#"{"params": {"only": [3, 15]}}"#).unwrap();
        assert_eq!(c.validate().unwrap_err().path, "params.only[1]");
        assert!(parse(r#"{"command": "pair", "seed": 3}"#).unwrap().validate().is_ok());
    }

    #[test]
    fn overlay_prefers_the_override() {
        let base = parse(r#"{"seed": 1, "params": {"order": 2, "label": "sech"}}"#).unwrap();
        let over = parse(r#"{"params": {"order": 5}}"#).unwrap();
        let m = base.overlay(&over);
        assert_eq!(m.params.order, Some(5));
        assert_eq!(m.params.label.as_deref(), Some("sech"));
        assert_eq!(m.seed(), 1);
    }
}
