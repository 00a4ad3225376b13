use serde::{Deserialize, Serialize};

use super::config::ExperimentConfig;
use crate::error::{Error, Result};
use crate::series::fmt_f64;

/// Per-sample values; `input_hash` identifies the sampled inputs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Record {
    pub sample_index: u64,
    pub input_hash: String,
    pub values: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ColumnSummary {
    pub column: String,
    pub min: f64,
    pub median: f64,
    pub p90: f64,
    pub max: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub name: String,
    pub value: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub std_error: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    /// `value <= threshold`
    Le,
    /// `value >= threshold`
    Ge,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub threshold: f64,
    pub relation: Relation,
    pub passed: bool,
}

impl Check {
    pub fn new(name: impl Into<String>, value: f64, relation: Relation, threshold: f64) -> Self {
        let passed = match relation {
            Relation::Le => value <= threshold,
            Relation::Ge => value >= threshold,
        };
        Check { name: name.into(), value, threshold, relation, passed }
    }
}

/// Outcome of one experiment. The JSON summary omits the per-sample
/// records, which go to CSV.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentResult {
    pub kind: String,
    pub seed: u64,
    pub samples: usize,
    pub columns: Vec<String>,
    #[serde(skip)]
    pub records: Vec<Record>,
    pub quantiles: Vec<ColumnSummary>,
    pub estimates: Vec<Estimate>,
    pub checks: Vec<Check>,
    pub passed: bool,
    pub config: ExperimentConfig,
}

impl ExperimentResult {
    pub(crate) fn new(config: &ExperimentConfig, columns: Vec<String>, records: Vec<Record>) -> Self {
        let quantiles = columns
            .iter()
            .enumerate()
            .filter_map(|(i, name)| {
                let mut v: Vec<f64> = records.iter().map(|r| r.values[i]).collect();
                summarize(name, &mut v)
            })
            .collect();
        ExperimentResult {
            kind: config.experiment.name().to_string(),
            seed: config.seed,
            samples: config.samples,
            columns,
            records,
            quantiles,
            estimates: Vec::new(),
            checks: Vec::new(),
            passed: true,
            config: config.clone(),
        }
    }

    pub(crate) fn estimate(&mut self, name: impl Into<String>, value: f64, std_error: Option<f64>) {
        self.estimates.push(Estimate { name: name.into(), value, std_error });
    }

    pub(crate) fn check(&mut self, check: Check) {
        self.passed &= check.passed;
        self.checks.push(check);
    }

    /// Values of one column in sample order.
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.columns.iter().position(|c| c == name)?;
        Some(self.records.iter().map(|r| r.values[i]).collect())
    }

    pub fn find_check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn find_estimate(&self, name: &str) -> Option<&Estimate> {
        self.estimates.iter().find(|e| e.name == name)
    }

    /// `sample_index,input_hash,<columns>` followed by one row per sample.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let header = ["sample_index", "input_hash"]
            .into_iter()
            .map(String::from)
            .chain(self.columns.iter().cloned());
        w.write_record(header).map_err(csv_error)?;
        for r in &self.records {
            let row = [r.sample_index.to_string(), r.input_hash.clone()]
                .into_iter()
                .chain(r.values.iter().map(|&v| fmt_f64(v)));
            w.write_record(row).map_err(csv_error)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
        String::from_utf8(bytes).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self).map_err(|e| Error::Parse(e.to_string()))?;
        s.push('\n');
        Ok(s)
    }
}

fn csv_error(e: csv::Error) -> Error {
    Error::Io(std::io::Error::other(e))
}

/// Nearest-rank quantiles; `None` for an empty column.
fn summarize(name: &str, v: &mut [f64]) -> Option<ColumnSummary> {
    if v.is_empty() {
        return None;
    }
    v.sort_by(f64::total_cmp);
    let rank = |q: f64| v[((q * v.len() as f64).ceil() as usize).clamp(1, v.len()) - 1];
    Some(ColumnSummary {
        column: name.to_string(),
        min: v[0],
        median: rank(0.5),
        p90: rank(0.9),
        max: v[v.len() - 1],
    })
}

/// FNV-1a over the bit patterns of the sampled inputs.
pub(crate) fn input_hash(inputs: &[f64]) -> String {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for x in inputs {
        for b in x.to_bits().to_le_bytes() {
            h ^= b as u64;
            h = h.wrapping_mul(0x0000_0100_0000_01b3);
        }
    }
    format!("{h:016x}")
}
