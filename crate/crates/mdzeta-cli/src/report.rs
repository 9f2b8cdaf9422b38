//! Machine-readable result records.
//!
//! The JSON form round-trips field-for-field; the CSV form is a flat table
//! with one row per method, for spreadsheet consumption.

use serde::{Deserialize, Serialize};

/// Echo of the inputs a report was produced from.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InputsEcho {
    pub field_min_poly: Vec<i64>,
    /// Exact basis entries as strings; empty when the power basis was used.
    pub integral_basis: Vec<Vec<String>>,
    pub cone_generators: Vec<Vec<i64>>,
    pub s: Vec<u64>,
    pub method: String,
    pub coeff_bound: u64,
    pub term_budget: String,
    pub scheme: String,
    pub points_per_axis: u32,
    pub sample_count: u64,
    pub upper_cutoff: f64,
}

/// One evaluation route's outcome. `work_units` counts series terms or
/// quadrature leaf evaluations (a decimal string, since the counts exceed
/// what JSON numbers carry exactly).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MethodResult {
    pub method: String,
    pub value: f64,
    pub error_bound: f64,
    pub work_units: String,
    pub seconds: f64,
}

/// Two-route agreement summary; present iff both methods ran.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub abs_diff: f64,
    pub rel_diff: f64,
    /// Series tail bound plus integral error estimate.
    pub combined_bound: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub tool_version: String,
    pub precision_bits: u32,
    pub inputs: InputsEcho,
    pub results: Vec<MethodResult>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub comparison: Option<Comparison>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.comparison.as_ref().map_or(true, |c| c.pass)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// Columns: field, cone, s, method, value, error, seconds.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("field,cone,s,method,value,error,seconds\n");
        let field = format!("{:?}", self.inputs.field_min_poly);
        let cone = format!("{:?}", self.inputs.cone_generators);
        let s = format!("{:?}", self.inputs.s);
        for r in &self.results {
            let row = [
                csv_escape(&field),
                csv_escape(&cone),
                csv_escape(&s),
                csv_escape(&r.method),
                format!("{:e}", r.value),
                format!("{:e}", r.error_bound),
                format!("{:.6}", r.seconds),
            ];
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}

/// Quotes a CSV field when it contains a delimiter, quote, or newline.
fn csv_escape(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}
