//! The serialized run report.
//!
//! Reports are JSON objects with a fixed field order. Floats use the
//! shortest text that parses back to the same `f64`; non-finite values are
//! written as the strings `"inf"`, `"-inf"` and `"nan"`.

use std::fmt;

use serde::{Deserialize, Serialize};

pub const FORMAT_VERSION: u32 = 1;

/// An `f64` that survives serialization even when non-finite.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(into = "NumRepr", try_from = "NumRepr")]
pub struct Num(pub f64);

impl PartialEq for Num {
    fn eq(&self, other: &Self) -> bool {
        self.0.to_bits() == other.0.to_bits() || self.0 == other.0
    }
}

impl From<f64> for Num {
    fn from(v: f64) -> Self {
        Num(v)
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum NumRepr {
    Number(f64),
    Text(String),
}

impl From<Num> for NumRepr {
    fn from(n: Num) -> Self {
        if n.0.is_finite() {
            NumRepr::Number(n.0)
        } else {
            NumRepr::Text(non_finite_text(n.0).to_string())
        }
    }
}

impl TryFrom<NumRepr> for Num {
    type Error = String;

    fn try_from(r: NumRepr) -> Result<Self, String> {
        match r {
            NumRepr::Number(v) => Ok(Num(v)),
            NumRepr::Text(s) => match s.as_str() {
                "inf" => Ok(Num(f64::INFINITY)),
                "-inf" => Ok(Num(f64::NEG_INFINITY)),
                "nan" => Ok(Num(f64::NAN)),
                other => Err(format!("expected a number, got {other:?}")),
            },
        }
    }
}

fn non_finite_text(v: f64) -> &'static str {
    if v.is_nan() {
        "nan"
    } else if v > 0.0 {
        "inf"
    } else {
        "-inf"
    }
}

impl fmt::Display for Num {
    /// Same text as the JSON form, without quotes.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_finite() {
            let text = serde_json::to_string(&self.0).map_err(|_| fmt::Error)?;
            f.write_str(&text)
        } else {
            f.write_str(non_finite_text(self.0))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub format_version: u32,
    /// Arguments after the program name.
    pub command: Vec<String>,
    pub inputs: Inputs,
    pub defaults: Defaults,
    pub results: Results,
    pub diagnostics: Diagnostics,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Inputs {
    pub counts: Vec<Num>,
    pub bins: usize,
    pub prior: Option<String>,
    pub spec: Option<SpecReport>,
    pub tol: Option<Num>,
    /// Requested moment multi-indices, 1-based as given.
    pub moments: Vec<Vec<usize>>,
    pub evaluation_budget: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "scheme", rename_all = "snake_case")]
pub enum SpecReport {
    Gauss { nodes: usize },
    Mc { samples: u64, seed: u64 },
    Oracle { rel_tol: Num },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Defaults {
    pub compare_tol: Num,
    pub gauss_nodes: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Results {
    Moments(MomentsResult),
    Integrate(IntegrateResult),
    Compare(CompareResult),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentsResult {
    pub bins: Vec<BinReport>,
    /// Σ mean; 1 up to rounding.
    pub mean_sum: Num,
    /// `ln I(m)`.
    pub log_normalization: Num,
    pub moments: Vec<MomentReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BinReport {
    /// 1-based.
    pub bin: usize,
    pub mean: Num,
    pub variance: Num,
    pub std_dev: Num,
    pub skewness: Num,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentReport {
    pub index: Vec<usize>,
    pub value: Num,
    pub log_value: Num,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntegrateResult {
    pub log_value: Num,
    /// `None` when `exp(log_value)` under- or overflows.
    pub value: Option<Num>,
    pub std_error: Num,
    pub moments: Vec<MomentReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompareResult {
    pub paths: Vec<PathReport>,
    pub deviations: Vec<Deviation>,
    pub max_deviation: Num,
    pub within_tol: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathReport {
    pub name: String,
    pub log_value: Option<Num>,
    pub value: Option<Num>,
    pub evaluations: u64,
    /// Why the path did not run, if it did not.
    pub skipped: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Deviation {
    pub a: String,
    pub b: String,
    pub relative: Num,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub evaluations: u64,
    pub notes: Vec<String>,
    /// The only field that differs between identical runs.
    pub wall_time_seconds: Num,
}

impl RunReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }

    /// One number per line.
    pub fn to_plain(&self) -> String {
        let mut out = Vec::new();
        match &self.results {
            Results::Moments(r) => {
                out.extend(r.bins.iter().map(|b| b.mean));
                out.extend(r.bins.iter().map(|b| b.variance));
                out.extend(r.bins.iter().map(|b| b.std_dev));
                out.extend(r.bins.iter().map(|b| b.skewness));
                out.push(r.mean_sum);
                out.extend(r.moments.iter().map(|m| m.value));
            }
            Results::Integrate(r) => {
                out.push(r.value.unwrap_or(Num(r.log_value.0.exp())));
                out.push(r.log_value);
                out.push(r.std_error);
                out.extend(r.moments.iter().map(|m| m.value));
            }
            Results::Compare(r) => {
                out.extend(r.paths.iter().filter_map(|p| p.value));
                out.push(r.max_deviation);
            }
        }
        out.iter().map(|n| format!("{n}\n")).collect()
    }
}
