//! Builds the algebraic objects from a job configuration and runs the
//! requested evaluation routes.

use crate::config::{JobConfig, Method};
use crate::report::{Comparison, InputsEcho, MethodResult, Report};
use mdzeta::cone::Cone;
use mdzeta::field::{AlgebraicInt, NumberField};
use mdzeta::membrane::{mdzv_integral, Scheme};
use mdzeta::series::{mdzv_sum, Composition};
use num_bigint::BigInt;
use num_rational::BigRational;
use std::time::Instant;

/// Failure modes with distinct exit codes: configuration problems (2),
/// domain or validation errors (3), and budget exhaustion (5). Comparison
/// failure (4) is not an error; the report carries it.
#[derive(Debug)]
pub enum CliError {
    Config(String),
    Module(mdzeta::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Module(e) => match e {
                mdzeta::Error::Overflow { .. }
                | mdzeta::Error::DimensionBudgetExceeded { .. } => 5,
                _ => 3,
            },
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(msg) => write!(f, "configuration error: {msg}"),
            CliError::Module(e) => write!(f, "{e}"),
        }
    }
}

impl From<mdzeta::Error> for CliError {
    fn from(e: mdzeta::Error) -> Self {
        CliError::Module(e)
    }
}

/// A validated field/cone/composition triple ready to evaluate.
pub struct Job {
    pub field: NumberField,
    pub generators: Vec<AlgebraicInt>,
    pub composition: Composition,
}

pub fn build_job(cfg: &JobConfig) -> Result<Job, CliError> {
    let n = cfg.min_poly.len() - 1;
    let min_poly: Vec<BigInt> = cfg.min_poly.iter().map(|&c| BigInt::from(c)).collect();
    let basis: Vec<Vec<BigRational>> = match &cfg.integral_basis {
        Some(b) => b.clone(),
        None => (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| BigRational::from(BigInt::from(u64::from(i == j))))
                    .collect()
            })
            .collect(),
    };
    let field = NumberField::new(min_poly, basis, cfg.precision_bits)?;
    let generators: Vec<AlgebraicInt> = cfg
        .generators
        .iter()
        .map(|row| AlgebraicInt::from_i64s(row))
        .collect();
    let composition = Composition::new(cfg.s.clone())?;
    Ok(Job {
        field,
        generators,
        composition,
    })
}

fn inputs_echo(cfg: &JobConfig, method: Method, coeff_bound: u64) -> InputsEcho {
    InputsEcho {
        field_min_poly: cfg.min_poly.clone(),
        integral_basis: cfg.basis_echo.clone(),
        cone_generators: cfg.generators.clone(),
        s: cfg.s.clone(),
        method: method.label().to_string(),
        coeff_bound,
        term_budget: cfg.term_budget.to_string(),
        scheme: cfg.scheme_label().to_string(),
        points_per_axis: cfg.points_per_axis,
        sample_count: cfg.sample_count,
        upper_cutoff: cfg.upper_cutoff,
    }
}

/// Runs the requested route(s) and assembles the report. The comparison
/// block appears exactly when both routes ran.
pub fn execute(cfg: &JobConfig, method: Method) -> Result<Report, CliError> {
    let job = build_job(cfg)?;
    let cone = Cone::new(&job.field, job.generators.clone())?;
    let comp = &job.composition;
    let coeff_bound = cfg.resolved_coeff_bound(job.field.degree());
    let mut results = Vec::new();

    let mut series_pair: Option<(f64, f64)> = None;
    if method != Method::Integral {
        let start = Instant::now();
        let r = mdzv_sum(&cone, comp, coeff_bound, cfg.term_budget)?;
        let seconds = start.elapsed().as_secs_f64();
        let value = r.value.to_f64();
        let bound = r.tail_bound.to_f64();
        series_pair = Some((value, bound));
        results.push(MethodResult {
            method: "series".into(),
            value,
            error_bound: bound,
            work_units: r.terms_used.to_string(),
            seconds,
        });
    }

    let mut integral_pair: Option<(f64, f64)> = None;
    if method != Method::Series {
        let spec = cfg.quadrature_spec();
        let start = Instant::now();
        let r = mdzv_integral(&cone, comp, &spec)?;
        let seconds = start.elapsed().as_secs_f64();
        let dims = (cone.degree() * comp.depth()) as u32;
        let work = match cfg.scheme {
            Scheme::NestedOrdered => {
                let fine = (spec.points_per_axis.max(2) as u128).pow(dims);
                let coarse = ((spec.points_per_axis / 2).max(2) as u128).pow(dims);
                fine + coarse
            }
            Scheme::QuasiRandom => spec.sample_count as u128,
        };
        let value = r.value.to_f64();
        let bound = r.error_estimate.to_f64();
        integral_pair = Some((value, bound));
        results.push(MethodResult {
            method: "integral".into(),
            value,
            error_bound: bound,
            work_units: work.to_string(),
            seconds,
        });
    }

    let comparison = match (series_pair, integral_pair) {
        (Some((sv, sb)), Some((iv, ib))) => {
            let abs_diff = (sv - iv).abs();
            let scale = sv.abs().max(iv.abs()).max(f64::MIN_POSITIVE);
            let combined_bound = sb + ib;
            Some(Comparison {
                abs_diff,
                rel_diff: abs_diff / scale,
                combined_bound,
                pass: abs_diff <= combined_bound,
            })
        }
        _ => None,
    };

    Ok(Report {
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        precision_bits: cfg.precision_bits,
        inputs: inputs_echo(cfg, method, coeff_bound),
        results,
        comparison,
    })
}

/// The boundary-divisor catalog for the configured cone and composition.
pub fn catalog_json(cfg: &JobConfig) -> Result<String, CliError> {
    let job = build_job(cfg)?;
    let cone = Cone::new(&job.field, job.generators.clone())?;
    let cat = mdzeta::catalog::build_catalog(&cone, &job.composition)?;
    Ok(serde_json::to_string_pretty(&cat.to_json()).expect("catalog serializes"))
}
