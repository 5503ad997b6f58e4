use serde::{Deserialize, Serialize};

use super::object::{Hyperfunction1D, DEFAULT_ENVELOPE_CONSTANT, GROWTH_SAMPLE_RADII};
use crate::expr::{parse_expr, GrowthClass};
use crate::quad::verify_growth;
use crate::{Error, Result};

/// One declarative corpus entry.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorpusRecord {
    pub label: String,
    pub f_plus: String,
    pub f_minus: String,
    pub strip_plus: f64,
    pub strip_minus: f64,
    pub growth: GrowthClass,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub constant: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub support_radius: Option<f64>,
}

const BUILTIN: &str = include_str!("../../data/corpus.json");

impl CorpusRecord {
    /// Parses the defining functions and checks the declarations: both
    /// branches must evaluate on a grid inside their strips, and an embedded
    /// function (`F₋ = 0`) must pass the growth spot check.
    pub fn build(&self) -> Result<Hyperfunction1D> {
        let ctx = |e: Error| Error::Corpus(format!("`{}`: {e}", self.label));
        let plus = parse_expr(&self.f_plus).map_err(|e| ctx(e.into()))?;
        let minus = parse_expr(&self.f_minus).map_err(|e| ctx(e.into()))?;
        if !(self.strip_plus > 0.0 && self.strip_minus > 0.0) {
            return Err(Error::Corpus(format!("`{}`: strip half-widths must be positive", self.label)));
        }
        for k in 1..=3 {
            let y = k as f64 / 4.0;
            for i in -8..=8 {
                let x = i as f64 / 2.0;
                plus.eval_z(num_complex::Complex64::new(x, y * self.strip_plus))
                    .map_err(|e| ctx(e.into()))?;
                minus
                    .eval_z(num_complex::Complex64::new(x, -y * self.strip_minus))
                    .map_err(|e| ctx(e.into()))?;
            }
        }
        if minus.is_zero() && self.support_radius.is_none() {
            let report = verify_growth(&plus, self.growth, &GROWTH_SAMPLE_RADII);
            if !report.pass {
                return Err(Error::Corpus(format!(
                    "`{}`: declared class {} fails the growth check at x = {}",
                    self.label,
                    self.growth,
                    report.first_violation.unwrap_or(f64::NAN)
                )));
            }
        }
        let mut f = Hyperfunction1D::new(
            self.label.clone(),
            plus,
            minus,
            (self.strip_plus, self.strip_minus),
            self.growth,
        )
        .with_constant(self.constant.unwrap_or(DEFAULT_ENVELOPE_CONSTANT));
        f.support_radius = self.support_radius;
        Ok(f)
    }
}

/// Parses a JSON array of corpus records.
pub fn parse_corpus(text: &str) -> Result<Vec<CorpusRecord>> {
    serde_json::from_str(text).map_err(|e| Error::Corpus(e.to_string()))
}

pub fn load_corpus(text: &str) -> Result<Vec<Hyperfunction1D>> {
    parse_corpus(text)?.iter().map(CorpusRecord::build).collect()
}

pub fn builtin_records() -> Vec<CorpusRecord> {
    parse_corpus(BUILTIN).expect("builtin corpus is valid JSON")
}

/// The bundled corpus: δ, δ′, δ″, Gaussians, sech and the compactly
/// supported `(1/2πi)e^{−1/z}`.
pub fn builtin_corpus() -> Vec<Hyperfunction1D> {
    load_corpus(BUILTIN).expect("builtin corpus is valid")
}

/// Looks up an entry by label.
pub fn find<'a>(corpus: &'a [Hyperfunction1D], label: &str) -> Result<&'a Hyperfunction1D> {
    corpus
        .iter()
        .find(|f| f.label == label)
        .ok_or_else(|| Error::Corpus(format!("no entry labelled `{label}`")))
}
