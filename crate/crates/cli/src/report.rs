use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::Serialize;

/// Outcome of a command that checks something.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
    /// Nothing was checked; the command only computed.
    None,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

/// A command's output: a table (also written as CSV) plus structured data
/// for the JSON file.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub seed: u64,
    pub verdict: Verdict,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
    pub notes: Vec<String>,
    pub data: serde_json::Value,
}

impl Report {
    pub fn new(command: &str, seed: u64, columns: &[&str]) -> Self {
        Report {
            command: command.to_string(),
            seed,
            verdict: Verdict::None,
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            notes: Vec::new(),
            data: serde_json::Value::Null,
        }
    }

    pub fn row(&mut self, cells: Vec<String>) {
        debug_assert_eq!(cells.len(), self.columns.len());
        self.rows.push(cells);
    }

    pub fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }

    pub fn with_data<T: Serialize>(mut self, data: &T) -> Self {
        self.data = serde_json::to_value(data).expect("report data serializes");
        self
    }

    /// Aligned plain-text table.
    pub fn table(&self) -> String {
        let mut width: Vec<usize> = self.columns.iter().map(|c| c.chars().count()).collect();
        for r in &self.rows {
            for (w, c) in width.iter_mut().zip(r) {
                *w = (*w).max(c.chars().count());
            }
        }
        let line = |cells: &[String]| -> String {
            let parts: Vec<String> = cells
                .iter()
                .zip(&width)
                .map(|(c, w)| format!("{c}{}", " ".repeat(w - c.chars().count())))
                .collect();
            parts.join("  ").trim_end().to_string()
        };
        let mut out = String::new();
        out.push_str(&line(&self.columns));
        out.push('\n');
        let rule: Vec<String> = width.iter().map(|w| "-".repeat(*w)).collect();
        out.push_str(&rule.join("  "));
        out.push('\n');
        for r in &self.rows {
            out.push_str(&line(r));
            out.push('\n');
        }
        for n in &self.notes {
            out.push_str(n);
            out.push('\n');
        }
        match self.verdict {
            Verdict::Pass => out.push_str("verdict: pass\n"),
            Verdict::Fail => out.push_str("verdict: FAIL\n"),
            Verdict::None => {}
        }
        out
    }

    pub fn json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn csv(&self) -> std::io::Result<Vec<u8>> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.columns)?;
        for r in &self.rows {
            w.write_record(r)?;
        }
        w.into_inner().map_err(|e| e.into_error())
    }

    /// Writes `<command>.json` and `<command>.csv` into `dir`.
    pub fn write(&self, dir: &Path) -> std::io::Result<(PathBuf, PathBuf)> {
        fs::create_dir_all(dir)?;
        let json = dir.join(format!("{}.json", self.command));
        let csv = dir.join(format!("{}.csv", self.command));
        fs::File::create(&json)?.write_all(self.json().as_bytes())?;
        fs::File::create(&csv)?.write_all(&self.csv()?)?;
        Ok((json, csv))
    }
}

/// Shortest round-trip decimal, switching to exponent form for very small
/// or very large magnitudes.
pub fn num(x: f64) -> String {
    let a = x.abs();
    if x == 0.0 || !x.is_finite() || (1e-4..1e12).contains(&a) {
        format!("{x}")
    } else {
        format!("{x:e}")
    }
}

pub fn re(z: Complex64) -> String {
    num(z.re)
}

pub fn im(z: Complex64) -> String {
    num(z.im)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn number_format() {
        assert_eq!(num(0.0), "0");
        assert_eq!(num(1.5), "1.5");
        assert_eq!(num(3e-12), "3e-12");
        assert_eq!(num(-2.5e13), "-2.5e13");
    }

    #[test]
    fn table_and_csv() {
        let mut r = Report::new("demo", 7, &["name", "value"]);
        r.row(vec!["a, b".into(), num(1.0)]);
        r.row(vec!["long name".into(), num(2.0)]);
        r.verdict = Verdict::Pass;
        let t = r.table();
        assert!(t.starts_with("name       value\n---------  -----\n"));
        assert!(t.ends_with("verdict: pass\n"));
        let csv = String::from_utf8(r.csv().unwrap()).unwrap();
        assert_eq!(csv, "name,value\n\"a, b\",1\nlong name,2\n");
        assert!(r.json().contains("\"verdict\": \"pass\""));
    }
}
