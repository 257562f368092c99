//! Tabular reports and their CSV/JSON encodings.

use std::fmt::Display;

use clap::ValueEnum;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Number, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Meta {
    pub alpha: String,
    pub command: String,
    pub version: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ErrorInfo {
    pub code: String,
    pub message: String,
}

pub type Row = Map<String, Value>;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub meta: Meta,
    pub rows: Vec<Row>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<ErrorInfo>,
}

pub const T_COLUMNS: &[&str] = &["alpha", "n", "a_n", "q_n", "re_T", "im_T", "abs_T", "bound", "ratio", "verdict"];

/// Column order for each command's CSV output.
pub fn columns(command: &str) -> &'static [&'static str] {
    match command {
        "scan" | "verify theorem" | "verify sinai" => T_COLUMNS,
        "expand" => &["alpha", "n", "a_n"],
        "convergents" => &["alpha", "n", "a_n", "p_n", "q_n", "xi"],
        "ostrowski" => &["alpha", "m", "k", "q_k", "digit"],
        "sum naive" | "sum closed" | "sum s2cot" => &[
            "alpha", "M", "method", "re_T", "im_T", "abs_T", "re_S1", "im_S1", "re_S2", "im_S2", "split_residual",
        ],
        "sum recip" => &["alpha", "m", "value", "max_term"],
        "discrepancy" => &["alpha", "N", "D_lo", "D_hi", "harman_bound", "cap", "verdict"],
        "verify hl" => &["alpha", "M", "max_abs_S2", "argmax", "cap", "verdict"],
        "verify lemma-new" => &[
            "alpha", "n", "q_n", "argmin", "min_dist", "min_dist_ok", "sum", "variation", "bound", "ratio", "cap",
            "verdict",
        ],
        "verify lemma-ost" => &["alpha", "n", "q_n", "log_factor", "checked", "argmax", "max_ratio", "cap", "verdict"],
        "verify telescope" => &["alpha", "M", "re_lhs", "im_lhs", "re_rhs", "im_rhs", "residual", "cap", "verdict"],
        "verify outer" => &["alpha", "n", "chord", "arc", "limit", "exact_links", "verdict"],
        "verify ck" => &[
            "alpha", "i", "q_i", "segments", "terms", "recon_err", "max_abs_c", "c_min", "c_max", "closed_err",
            "shift_law", "one_multiple", "cap", "verdict",
        ],
        _ => &[],
    }
}

/// Builds one row. Exact integers become decimal strings, non-finite floats null.
pub struct RowBuilder(Row);

impl RowBuilder {
    pub fn new(alpha: &str) -> Self {
        let mut m = Map::new();
        m.insert("alpha".into(), Value::String(alpha.into()));
        RowBuilder(m)
    }

    pub fn int(mut self, key: &str, v: impl Display) -> Self {
        self.0.insert(key.into(), Value::String(v.to_string()));
        self
    }

    pub fn count(mut self, key: &str, v: u64) -> Self {
        self.0.insert(key.into(), Value::Number(v.into()));
        self
    }

    pub fn float(mut self, key: &str, v: f64) -> Self {
        self.0.insert(key.into(), Number::from_f64(v).map_or(Value::Null, Value::Number));
        self
    }

    pub fn opt_float(self, key: &str, v: Option<f64>) -> Self {
        self.float(key, v.unwrap_or(f64::NAN))
    }

    pub fn text(mut self, key: &str, v: &str) -> Self {
        self.0.insert(key.into(), Value::String(v.into()));
        self
    }

    pub fn flag(mut self, key: &str, v: bool) -> Self {
        self.0.insert(key.into(), Value::Bool(v));
        self
    }

    pub fn null(mut self, key: &str) -> Self {
        self.0.insert(key.into(), Value::Null);
        self
    }

    pub fn build(self) -> Row {
        self.0
    }
}

/// 17 significant digits, enough to recover every double.
pub fn format_float(x: f64) -> String {
    format!("{x:.16e}")
}

fn cell(v: Option<&Value>) -> String {
    match v {
        None | Some(Value::Null) => String::new(),
        Some(Value::Bool(b)) => b.to_string(),
        Some(Value::String(s)) => s.clone(),
        Some(Value::Number(n)) if n.is_f64() => format_float(n.as_f64().expect("f64 number")),
        Some(Value::Number(n)) => n.to_string(),
        Some(other) => other.to_string(),
    }
}

pub fn emit(report: &Report, format: Format) -> std::io::Result<Vec<u8>> {
    match format {
        Format::Json => {
            let mut out = serde_json::to_vec_pretty(report)?;
            out.push(b'\n');
            Ok(out)
        }
        Format::Csv => {
            let cols = columns(&report.meta.command);
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(cols)?;
            for row in &report.rows {
                w.write_record(cols.iter().map(|c| cell(row.get(*c))))?;
            }
            w.into_inner().map_err(|e| e.into_error())
        }
    }
}
