//! Job configuration: TOML file plus command-line overrides.
//!
//! The file is optional; without it the job defaults to the rational demo
//! (K = Q, cone N{1}, s = (2), both methods). Flags win over file values.

use mdzeta::membrane::{QuadratureSpec, Scheme};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Deserialize;
use std::path::PathBuf;
use std::str::FromStr;

/// Which evaluation route(s) to run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Series,
    Integral,
    Both,
}

impl Method {
    pub fn label(self) -> &'static str {
        match self {
            Method::Series => "series",
            Method::Integral => "integral",
            Method::Both => "both",
        }
    }

    pub fn parse(s: &str) -> Option<Method> {
        match s {
            "series" => Some(Method::Series),
            "integral" => Some(Method::Integral),
            "both" => Some(Method::Both),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    Json,
    Csv,
}

/// Fully resolved job parameters.
#[derive(Clone, Debug)]
pub struct JobConfig {
    pub precision_bits: u32,
    /// Minimal polynomial coefficients, ascending, as echoed in reports.
    pub min_poly: Vec<i64>,
    /// Integral basis rows; None means the power basis.
    pub integral_basis: Option<Vec<Vec<BigRational>>>,
    /// Echo strings for the basis (exact rationals like "1/2").
    pub basis_echo: Vec<Vec<String>>,
    pub generators: Vec<Vec<i64>>,
    pub s: Vec<u64>,
    pub method: Method,
    /// None picks a degree-dependent default at run time.
    pub coeff_bound: Option<u64>,
    pub term_budget: u128,
    pub scheme: Scheme,
    pub points_per_axis: u32,
    pub sample_count: u64,
    pub upper_cutoff: f64,
    pub error_model: Option<String>,
    pub output: OutputFormat,
    pub out_path: Option<PathBuf>,
    pub workers: Option<usize>,
}

impl Default for JobConfig {
    fn default() -> Self {
        JobConfig {
            precision_bits: 96,
            min_poly: vec![0, 1],
            integral_basis: None,
            basis_echo: Vec::new(),
            generators: vec![vec![1]],
            s: vec![2],
            method: Method::Both,
            coeff_bound: None,
            term_budget: mdzeta::series::DEFAULT_TERM_BUDGET,
            scheme: Scheme::NestedOrdered,
            points_per_axis: 64,
            sample_count: 1 << 16,
            upper_cutoff: 40.0,
            error_model: None,
            output: OutputFormat::Json,
            out_path: None,
            workers: None,
        }
    }
}

impl JobConfig {
    /// Series truncation default when the file sets none: generous for the
    /// rationals, moderate for quadratic fields, small for higher degrees
    /// where the term count grows like the bound to the n-th power.
    pub fn resolved_coeff_bound(&self, degree: usize) -> u64 {
        self.coeff_bound.unwrap_or(match degree {
            1 => 2_000_000,
            2 => 4096,
            _ => 20,
        })
    }

    pub fn quadrature_spec(&self) -> QuadratureSpec {
        let error_model = self.error_model.clone().unwrap_or_else(|| {
            match self.scheme {
                Scheme::NestedOrdered => {
                    "twice the refinement difference against a half-resolution run \
                     plus an exponential cutoff allowance"
                }
                Scheme::QuasiRandom => "three standard errors of the importance-sampled mean",
            }
            .to_string()
        });
        QuadratureSpec {
            scheme: self.scheme,
            points_per_axis: self.points_per_axis,
            sample_count: self.sample_count,
            upper_cutoff: self.upper_cutoff,
            error_model,
        }
    }

    pub fn scheme_label(&self) -> &'static str {
        scheme_label(self.scheme)
    }
}

pub fn scheme_label(scheme: Scheme) -> &'static str {
    match scheme {
        Scheme::NestedOrdered => "nested-ordered-quadrature",
        Scheme::QuasiRandom => "quasi-random",
    }
}

pub fn parse_scheme(s: &str) -> Option<Scheme> {
    match s {
        "nested-ordered-quadrature" => Some(Scheme::NestedOrdered),
        "quasi-random" => Some(Scheme::QuasiRandom),
        _ => None,
    }
}

/// Raw TOML schema. Unknown keys are rejected so typos surface as config
/// errors instead of silently falling back to defaults.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    precision_bits: Option<u32>,
    method: Option<String>,
    s: Option<Vec<u64>>,
    output: Option<String>,
    out_path: Option<String>,
    field: Option<RawField>,
    cone: Option<RawCone>,
    series: Option<RawSeries>,
    quadrature: Option<RawQuadrature>,
    workers: Option<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawField {
    min_poly: Vec<i64>,
    integral_basis: Option<Vec<Vec<toml::Value>>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCone {
    generators: Vec<Vec<i64>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSeries {
    coeff_bound: Option<u64>,
    term_budget: Option<u64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawQuadrature {
    scheme: Option<String>,
    points_per_axis: Option<u32>,
    sample_count: Option<u64>,
    upper_cutoff: Option<f64>,
    error_model: Option<String>,
}

/// One basis entry: a TOML integer or an exact rational string "p/q".
fn parse_rational(v: &toml::Value) -> Result<(BigRational, String), String> {
    match v {
        toml::Value::Integer(i) => Ok((BigRational::from(BigInt::from(*i)), i.to_string())),
        toml::Value::String(s) => {
            let r = BigRational::from_str(s.trim())
                .map_err(|_| format!("cannot parse rational {s:?}"))?;
            Ok((r, s.trim().to_string()))
        }
        other => Err(format!(
            "basis entries must be integers or rational strings, got {other}"
        )),
    }
}

/// Parses a configuration file body.
pub fn from_toml(text: &str) -> Result<JobConfig, String> {
    let raw: RawConfig = toml::from_str(text).map_err(|e| format!("config parse: {e}"))?;
    let mut cfg = JobConfig::default();
    if let Some(p) = raw.precision_bits {
        cfg.precision_bits = p;
    }
    if let Some(m) = raw.method {
        cfg.method = Method::parse(&m).ok_or(format!("unknown method {m:?}"))?;
    }
    if let Some(s) = raw.s {
        cfg.s = s;
    }
    if let Some(o) = raw.output {
        cfg.output = match o.as_str() {
            "json" => OutputFormat::Json,
            "csv" => OutputFormat::Csv,
            _ => return Err(format!("unknown output format {o:?}")),
        };
    }
    if let Some(p) = raw.out_path {
        cfg.out_path = Some(PathBuf::from(p));
    }
    cfg.workers = raw.workers;
    if let Some(f) = raw.field {
        if f.min_poly.len() < 2 {
            return Err("field.min_poly needs degree at least 1".into());
        }
        cfg.min_poly = f.min_poly;
        if let Some(rows) = f.integral_basis {
            let mut basis = Vec::with_capacity(rows.len());
            let mut echo = Vec::with_capacity(rows.len());
            for row in &rows {
                let mut brow = Vec::with_capacity(row.len());
                let mut erow = Vec::with_capacity(row.len());
                for v in row {
                    let (r, e) = parse_rational(v)?;
                    brow.push(r);
                    erow.push(e);
                }
                basis.push(brow);
                echo.push(erow);
            }
            cfg.integral_basis = Some(basis);
            cfg.basis_echo = echo;
        }
    }
    if let Some(c) = raw.cone {
        if c.generators.is_empty() {
            return Err("cone.generators must not be empty".into());
        }
        cfg.generators = c.generators;
    } else if cfg.min_poly != vec![0, 1] {
        return Err("a non-rational field needs explicit cone.generators".into());
    }
    if let Some(s) = raw.series {
        cfg.coeff_bound = s.coeff_bound;
        if let Some(b) = s.term_budget {
            cfg.term_budget = b as u128;
        }
    }
    if let Some(q) = raw.quadrature {
        if let Some(s) = q.scheme {
            cfg.scheme = parse_scheme(&s).ok_or(format!("unknown quadrature scheme {s:?}"))?;
        }
        if let Some(p) = q.points_per_axis {
            cfg.points_per_axis = p;
        }
        if let Some(n) = q.sample_count {
            cfg.sample_count = n;
        }
        if let Some(t) = q.upper_cutoff {
            cfg.upper_cutoff = t;
        }
        cfg.error_model = q.error_model;
    }
    Ok(cfg)
}

/// Loads the file when given, otherwise the built-in demo defaults.
pub fn load(path: Option<&std::path::Path>) -> Result<JobConfig, String> {
    match path {
        None => Ok(JobConfig::default()),
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| format!("cannot read {}: {e}", p.display()))?;
            from_toml(&text)
        }
    }
}

/// Flag values that override whatever the file said.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub precision_bits: Option<u32>,
    pub coeff_bound: Option<u64>,
    pub term_budget: Option<u64>,
    pub scheme: Option<Scheme>,
    pub points: Option<u32>,
    pub cutoff: Option<f64>,
    pub samples: Option<u64>,
    pub workers: Option<usize>,
    pub output: Option<OutputFormat>,
    pub out_path: Option<PathBuf>,
}

pub fn apply_overrides(cfg: &mut JobConfig, ov: &Overrides) {
    if let Some(p) = ov.precision_bits {
        cfg.precision_bits = p;
    }
    if let Some(b) = ov.coeff_bound {
        cfg.coeff_bound = Some(b);
    }
    if let Some(b) = ov.term_budget {
        cfg.term_budget = b as u128;
    }
    if let Some(s) = ov.scheme {
        cfg.scheme = s;
    }
    if let Some(p) = ov.points {
        cfg.points_per_axis = p;
    }
    if let Some(t) = ov.cutoff {
        cfg.upper_cutoff = t;
    }
    if let Some(n) = ov.samples {
        cfg.sample_count = n;
    }
    if let Some(w) = ov.workers {
        cfg.workers = Some(w);
    }
    if let Some(o) = ov.output {
        cfg.output = o;
    }
    if let Some(p) = &ov.out_path {
        cfg.out_path = Some(p.clone());
    }
}
