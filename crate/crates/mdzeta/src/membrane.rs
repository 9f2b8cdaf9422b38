//! Iterated-integral evaluation of multiple zeta values over membranes.
//!
//! The value is an integral over n rows of ordered simplices: for weight
//! M = s_1 + ... + s_m, a membrane point is an n x M matrix with strictly
//! decreasing positive rows, and the integrand is the product of the cone's
//! generating function f_0 over the columns where the depth pattern epsilon
//! is 1 (the remaining columns carry weight-one densities).
//!
//! The quadrature engine first integrates the epsilon = 0 columns exactly.
//! For fixed block-start columns x_{j,b} those variables fill an ordered
//! simplex of width x_{j,b} - x_{j,b+1} per row, contributing
//! (x_{j,b} - x_{j,b+1})^(s_b - 1)/(s_b - 1)! with x_{j,m+1} = 0. What is
//! left is an n*m dimensional integral of
//!
//!   prod_b f_0(x_{.,b}) * prod_{j,b} (x_{j,b} - x_{j,b+1})^(s_b-1)/(s_b-1)!
//!
//! over per-row decreasing chains, evaluated by nested Gauss-Legendre
//! panels graded toward the origin, or diagnostically by exponential
//! importance sampling.

use crate::cone::Cone;
use crate::error::{Error, Result};
use crate::hp::{self, HpComplex};
use crate::quad::{self, Neumaier};
use crate::series::Composition;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::Float;

/// Ceiling on the membrane dimension n * M for the nested scheme.
pub const MAX_NESTED_DIMENSION: usize = 8;

/// Quadrature scheme selection.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scheme {
    /// Nested ordered Gauss-Legendre quadrature (deterministic).
    NestedOrdered,
    /// Seeded exponential importance sampling; a diagnostic fallback for
    /// dimensions the nested scheme cannot afford.
    QuasiRandom,
}

/// Parameters of the integral evaluation.
#[derive(Clone, Debug)]
pub struct QuadratureSpec {
    pub scheme: Scheme,
    /// Evaluation points per reduced axis (nested scheme).
    pub points_per_axis: u32,
    /// Sample count for the quasi-random scheme.
    pub sample_count: u64,
    /// Truncation of each row's unbounded direction.
    pub upper_cutoff: f64,
    /// Free-form description of how error_estimate was formed.
    pub error_model: String,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            scheme: Scheme::NestedOrdered,
            points_per_axis: 64,
            sample_count: 1 << 16,
            upper_cutoff: 40.0,
            error_model: String::new(),
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if self.points_per_axis < 2 {
            return Err(Error::DomainError {
                detail: "points_per_axis must be at least 2".into(),
            });
        }
        if !(self.upper_cutoff > 0.0) {
            return Err(Error::DomainError {
                detail: "upper_cutoff must be positive".into(),
            });
        }
        if self.sample_count == 0 {
            return Err(Error::DomainError {
                detail: "sample_count must be at least 1".into(),
            });
        }
        Ok(())
    }
}

/// A point of the membrane: n rows, each a strictly decreasing positive
/// chain of length M (the composition weight).
#[derive(Clone, Debug)]
pub struct MembranePoint {
    t: Vec<Vec<Float>>,
}

impl MembranePoint {
    /// Validates positivity and the per-row strict ordering
    /// t_{j,1} > t_{j,2} > ... > t_{j,M} > 0.
    pub fn new(t: Vec<Vec<Float>>) -> Result<Self> {
        if t.is_empty() {
            return Err(Error::DomainError {
                detail: "membrane point needs at least one row".into(),
            });
        }
        let cols = t[0].len();
        for (j, row) in t.iter().enumerate() {
            if row.len() != cols {
                return Err(Error::WrongTupleLength {
                    expected: cols,
                    got: row.len(),
                });
            }
            for (k, v) in row.iter().enumerate() {
                if !(v.is_finite() && v.is_sign_positive() && !v.is_zero()) {
                    return Err(Error::DomainError {
                        detail: format!("entry ({j}, {k}) must be positive"),
                    });
                }
                if k + 1 < cols && !(row[k] > row[k + 1]) {
                    return Err(Error::DomainError {
                        detail: format!("row {j} is not strictly decreasing at column {k}"),
                    });
                }
            }
        }
        Ok(MembranePoint { t })
    }

    pub fn rows(&self) -> usize {
        self.t.len()
    }

    pub fn cols(&self) -> usize {
        self.t[0].len()
    }

    pub fn matrix(&self) -> &[Vec<Float>] {
        &self.t
    }

    fn column(&self, k: usize) -> Vec<Float> {
        self.t.iter().map(|row| row[k].clone()).collect()
    }
}

/// Result of an integral evaluation.
#[derive(Clone, Debug)]
pub struct IntegralResult {
    pub value: Float,
    /// Quadrature refinement difference plus cutoff allowance (nested), or
    /// three standard errors of the mean (quasi-random).
    pub error_estimate: Float,
}

/// Product of f_0 over the columns opened by the depth pattern; columns
/// with epsilon = 0 contribute the constant 1.
pub fn integrand_eval(cone: &Cone, comp: &Composition, p: &MembranePoint) -> Result<Float> {
    if p.rows() != cone.degree() || p.cols() != comp.weight() as usize {
        return Err(Error::WrongTupleLength {
            expected: cone.degree() * comp.weight() as usize,
            got: p.rows() * p.cols(),
        });
    }
    integrand_eval_pattern(cone, comp.epsilon(), p)
}

/// Same as `integrand_eval` for an explicit 0/1 pattern; an all-zero
/// pattern yields the empty product 1.
fn integrand_eval_pattern(cone: &Cone, epsilon: &[u8], p: &MembranePoint) -> Result<Float> {
    let prec = cone.field().precision();
    let mut value = hp::real(prec, 1.0);
    for (k, &e) in epsilon.iter().enumerate() {
        if e == 1 {
            value *= cone.f0_closed(&p.column(k))?;
        }
    }
    Ok(value)
}

/// Evaluates the membrane integral for the composition over the cone.
///
/// The nested scheme truncates each row's outermost variable at
/// `upper_cutoff` and integrates the reduced n*m dimensional form with
/// graded Gauss-Legendre panels; its error estimate combines the refinement
/// difference against a half-resolution run with an exponential bound on
/// the truncated region. The quasi-random scheme is an unbounded-domain
/// importance sampler and reports three standard errors.
pub fn mdzv_integral(
    cone: &Cone,
    comp: &Composition,
    spec: &QuadratureSpec,
) -> Result<IntegralResult> {
    spec.validate()?;
    let field = cone.field();
    if !field.is_totally_real() {
        return Err(Error::NonTotallyReal);
    }
    let n = cone.degree();
    let dims = n * comp.weight() as usize;
    let prec = field.precision();

    match spec.scheme {
        Scheme::NestedOrdered => {
            if dims > MAX_NESTED_DIMENSION {
                return Err(Error::DimensionBudgetExceeded {
                    dims,
                    max: MAX_NESTED_DIMENSION,
                });
            }
            let engine = NestedEngine::new(cone, comp, spec.upper_cutoff);
            let fine = engine.integrate(spec.points_per_axis.max(2));
            let coarse = engine.integrate((spec.points_per_axis / 2).max(2));
            let refinement = (fine - coarse).abs();
            let floor = fine.abs() * 1e-13;
            let cutoff = engine.cutoff_allowance();
            let error = 2.0 * refinement.max(floor) + cutoff;
            Ok(IntegralResult {
                value: hp::real(prec, fine),
                error_estimate: hp::real(prec, error),
            })
        }
        Scheme::QuasiRandom => {
            let (mean, stderr) = quasi_random_estimate(cone, comp, spec.sample_count);
            Ok(IntegralResult {
                value: hp::real(prec, mean),
                error_estimate: hp::real(prec, 3.0 * stderr),
            })
        }
    }
}

/// Deterministic nested quadrature over the reduced block-start variables.
struct NestedEngine {
    n: usize,
    m: usize,
    exponents: Vec<u64>,
    /// sigma[i][j] = j-th embedding of generator i (totally real).
    sigma: Vec<Vec<f64>>,
    /// 1/(s_b - 1)! per block.
    inv_fact: Vec<f64>,
    /// Per-row truncation, scaled so every row escapes with the same
    /// exponent: S_j * cutoffs[j] = S_min * upper_cutoff.
    cutoffs: Vec<f64>,
    escape_exponent: f64,
}

impl NestedEngine {
    fn new(cone: &Cone, comp: &Composition, cutoff: f64) -> Self {
        let inv_fact = comp
            .exponents()
            .iter()
            .map(|&s| 1.0 / (1..s).map(|k| k as f64).product::<f64>().max(1.0))
            .collect();
        let n = cone.degree();
        let sigma = cone.embedding_matrix_f64();
        let row_rates: Vec<f64> = (0..n)
            .map(|j| sigma.iter().map(|row| row[j]).sum::<f64>())
            .collect();
        let s_min = row_rates.iter().fold(f64::INFINITY, |a, &b| a.min(b));
        let cutoffs = row_rates.iter().map(|&s| cutoff * s_min / s).collect();
        NestedEngine {
            n,
            m: comp.depth(),
            exponents: comp.exponents().to_vec(),
            sigma,
            inv_fact,
            cutoffs,
            escape_exponent: s_min * cutoff,
        }
    }

    /// Reference nodes and weights on (0, 1], graded toward 0.
    fn reference_nodes(points: u32) -> Vec<(f64, f64)> {
        let panels = (points as usize / 8).max(1);
        let (gl_x, gl_w) = quad::gauss_legendre(8);
        let edges = quad::graded_edges(1.0, panels, 2.0);
        let mut nodes = Vec::with_capacity(panels * 8);
        for w in edges.windows(2) {
            let half = 0.5 * (w[1] - w[0]);
            let mid = 0.5 * (w[0] + w[1]);
            for (&x, &wt) in gl_x.iter().zip(&gl_w) {
                nodes.push((mid + half * x, half * wt));
            }
        }
        nodes
    }

    fn f0_column(&self, col: &[f64]) -> f64 {
        let mut prod = 1.0;
        for row in &self.sigma {
            let lambda: f64 = row.iter().zip(col).map(|(&s, &t)| s * t).sum();
            prod /= lambda.exp_m1();
        }
        prod
    }

    fn integrate(&self, points: u32) -> f64 {
        let nodes = Self::reference_nodes(points);
        // Parallel split over the outermost axis; the partials are summed
        // in index order so results do not depend on the worker count.
        use rayon::prelude::*;
        let partials: Vec<f64> = nodes
            .par_iter()
            .map(|&(rx, rw)| {
                let mut x = vec![vec![0.0f64; self.m]; self.n];
                let mut acc = Neumaier::new();
                let xv = self.cutoffs[0] * rx;
                let mut w = self.cutoffs[0] * rw;
                x[0][0] = xv;
                w *= self.level_factor(&x, 0, 0, xv);
                if self.n == 1 {
                    w *= self.f0_column(&[xv]);
                }
                if self.n * self.m == 1 {
                    acc.add(w);
                } else {
                    self.recurse(1, w, &mut x, &nodes, &mut acc);
                }
                acc.value()
            })
            .collect();
        let mut total = Neumaier::new();
        for p in partials {
            total.add(p);
        }
        total.value()
    }

    /// Polynomial factors attached when x[j][b] is chosen: the simplex
    /// volume between consecutive block starts for block b-1, and for the
    /// last block the volume below it.
    fn level_factor(&self, x: &[Vec<f64>], b: usize, j: usize, xv: f64) -> f64 {
        let mut w = 1.0;
        if b > 0 {
            let s = self.exponents[b - 1];
            w *= (x[j][b - 1] - xv).powi(s as i32 - 1) * self.inv_fact[b - 1];
        }
        if b == self.m - 1 {
            let s = self.exponents[self.m - 1];
            w *= xv.powi(s as i32 - 1) * self.inv_fact[self.m - 1];
        }
        w
    }

    fn recurse(
        &self,
        level: usize,
        weight: f64,
        x: &mut [Vec<f64>],
        nodes: &[(f64, f64)],
        acc: &mut Neumaier,
    ) {
        let b = level / self.n;
        let j = level % self.n;
        let upper = if b == 0 { self.cutoffs[j] } else { x[j][b - 1] };
        let last = level + 1 == self.n * self.m;
        for &(rx, rw) in nodes {
            let xv = upper * rx;
            let mut w = weight * upper * rw;
            x[j][b] = xv;
            w *= self.level_factor(x, b, j, xv);
            if j == self.n - 1 {
                let col: Vec<f64> = (0..self.n).map(|r| x[r][b]).collect();
                w *= self.f0_column(&col);
            }
            if last {
                acc.add(w);
            } else if w != 0.0 {
                self.recurse(level + 1, w, x, nodes, acc);
            }
        }
    }

    /// Allowance for the mass outside the per-row cutoffs. Any escaping row
    /// j forces its outermost variable above cutoffs[j], which scales the
    /// integrand by at least e^{-S_j cutoffs[j]} = e^{-escape_exponent};
    /// the polynomial prefactor absorbs the slow directions.
    fn cutoff_allowance(&self) -> f64 {
        let weight: u64 = self.exponents.iter().sum();
        let t_max = self.cutoffs.iter().fold(0.0f64, |a, &b| a.max(b));
        (self.n as f64)
            * (-self.escape_exponent).exp()
            * (1.0 + t_max).powi((self.n as u64 * weight) as i32)
    }
}

/// Importance-sampled estimate over the unbounded reduced domain. The
/// sampler draws the increment variables from exponentials matched to the
/// integrand's dominant decay, so weights stay bounded away from heavy
/// tails for the shapes the diagnostic targets.
fn quasi_random_estimate(cone: &Cone, comp: &Composition, samples: u64) -> (f64, f64) {
    let n = cone.degree();
    let m = comp.depth();
    let s = comp.exponents();
    let sigma = cone.embedding_matrix_f64();
    let inv_fact: Vec<f64> = s
        .iter()
        .map(|&sb| 1.0 / (1..sb).map(|k| k as f64).product::<f64>().max(1.0))
        .collect();
    // Row rates S_j = sum_i sigma_j(e_i); column c of the increments sees
    // total exponential decay (c+1) * S_j.
    let rates: Vec<f64> = (0..n)
        .map(|j| sigma.iter().map(|row| row[j]).sum::<f64>())
        .collect();

    let mut rng = ChaCha8Rng::seed_from_u64(0x6d7a_7631);
    let mut mean = Neumaier::new();
    let mut sq = Neumaier::new();
    let mut x = vec![vec![0.0f64; m]; n];
    for _ in 0..samples {
        // Draw increments, build suffix sums x[j][b] = sum_{c >= b} y[j][c],
        // and start the weight from the density reciprocal.
        let mut log_weight = 0.0f64;
        for j in 0..n {
            let mut suffix = 0.0;
            for c in (0..m).rev() {
                let rho = (c as f64 + 1.0) * rates[j];
                let u: f64 = rng.random_range(f64::MIN_POSITIVE..1.0);
                let y = -u.ln() / rho;
                log_weight += rho * y - rho.ln();
                suffix += y;
                x[j][c] = suffix;
            }
        }
        let mut log_f = 0.0f64;
        for b in 0..m {
            for row in &sigma {
                let lambda: f64 = (0..n).map(|j| row[j] * x[j][b]).sum();
                log_f -= lambda.exp_m1().ln();
            }
            for x_row in x.iter() {
                let y = if b + 1 < m {
                    x_row[b] - x_row[b + 1]
                } else {
                    x_row[b]
                };
                log_f += (s[b] as f64 - 1.0) * y.ln() + inv_fact[b].ln();
            }
        }
        let w = (log_f + log_weight).exp();
        mean.add(w);
        sq.add(w * w);
    }
    let nn = samples as f64;
    let avg = mean.value() / nn;
    let var = (sq.value() / nn - avg * avg).max(0.0);
    (avg, (var / nn).sqrt())
}

/// Compares the finite-difference Jacobian of z_i(t) = exp(-sum_j t_j
/// sigma_j(e_i)) against the exact pullback factor |det sigma| * prod z_i,
/// and the weight-one variant against f_0. Returns (|det J|, |det sigma|,
/// ratio); the ratio converges to 1 as h shrinks for valid steps.
pub fn omega_alpha_check(cone: &Cone, t: &[Float], h: &Float) -> Result<(Float, Float, Float)> {
    let field = cone.field();
    if !field.is_totally_real() {
        return Err(Error::NonTotallyReal);
    }
    let n = cone.degree();
    if t.len() != n {
        return Err(Error::WrongTupleLength {
            expected: n,
            got: t.len(),
        });
    }
    if let Some(idx) = t.iter().position(|v| !v.is_sign_positive() || v.is_zero()) {
        return Err(Error::NonPositivePoint { index: idx });
    }
    let min_t = t
        .iter()
        .fold(f64::INFINITY, |acc, v| acc.min(v.to_f64()));
    let hf = h.to_f64();
    if !(hf > 0.0) || hf >= min_t / 4.0 {
        return Err(Error::StepTooLarge { step: hf });
    }

    let (jac, ratio0, ratio1) = jacobian_ratios(cone, t, h)?;
    let half = Float::with_val(h.prec(), h / 2u32);
    let (_, ratio0_half, ratio1_half) = jacobian_ratios(cone, t, &half)?;

    // Central differences are second order: halving the step must shrink
    // both discrepancies unless they already sit at the rounding floor.
    let floor = 1e-12f64;
    for (coarse, fine) in [(&ratio0, &ratio0_half), (&ratio1, &ratio1_half)] {
        let e_coarse = (coarse.to_f64() - 1.0).abs();
        let e_fine = (fine.to_f64() - 1.0).abs();
        if e_fine > floor && e_fine > 0.6 * e_coarse {
            return Err(Error::StepTooLarge { step: hf });
        }
    }

    let sqrt_d = cone.embedding_det().det.abs();
    Ok((jac, sqrt_d, ratio0))
}

/// |det J| with J the central-difference Jacobian at step h, plus the two
/// pullback ratios (weight 0 and weight 1 forms).
fn jacobian_ratios(cone: &Cone, t: &[Float], h: &Float) -> Result<(Float, Float, Float)> {
    let prec = cone.field().precision();
    let n = cone.degree();
    let rates = cone.rates(t)?;
    let z: Vec<Float> = rates.iter().map(|l| Float::with_val(prec, (-l.clone()).exp())).collect();

    // J[i][j] = (z_i(t + h e_j) - z_i(t - h e_j)) / (2h); shifting t_j by
    // +-h multiplies z_i by exp(-+ h sigma_ij).
    let mut jac = Vec::with_capacity(n);
    for i in 0..n {
        let mut row = Vec::with_capacity(n);
        for j in 0..n {
            let sig = &cone.embedding_matrix()[i][j].re;
            let shift = Float::with_val(prec, sig * h);
            let plus = Float::with_val(prec, (-shift.clone()).exp());
            let minus = shift.exp();
            let diff = Float::with_val(prec, &plus - &minus);
            row.push(Float::with_val(prec, &z[i] * &diff) / Float::with_val(prec, 2 * h.clone()));
        }
        jac.push(row);
    }
    let det = real_det(jac).abs();

    let sqrt_d = cone.embedding_det().det.abs();
    let mut prod_z = hp::real(prec, 1.0);
    for zi in &z {
        prod_z *= zi;
    }
    let expected0 = Float::with_val(prec, &sqrt_d * &prod_z);
    let ratio0 = Float::with_val(prec, &det / &expected0);

    // Weight-one variant: |det J| * prod 1/(1 - z_i) against |det sigma| * f_0.
    let mut lhs1 = det.clone();
    for zi in &z {
        lhs1 /= Float::with_val(prec, 1u32 - zi);
    }
    let f0 = cone.f0_closed(t)?;
    let expected1 = Float::with_val(prec, &sqrt_d * &f0);
    let ratio1 = Float::with_val(prec, &lhs1 / &expected1);
    Ok((det, ratio0, ratio1))
}

/// Determinant of a small real matrix by Gaussian elimination with partial
/// pivoting, at the operand precision.
fn real_det(mut rows: Vec<Vec<Float>>) -> Float {
    let n = rows.len();
    let prec = rows[0][0].prec();
    let mut det = hp::real(prec, 1.0);
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&a, &b| {
                rows[a][col]
                    .clone()
                    .abs()
                    .partial_cmp(&rows[b][col].clone().abs())
                    .expect("finite")
            })
            .expect("nonempty");
        if rows[pivot][col].is_zero() {
            return hp::real(prec, 0.0);
        }
        if pivot != col {
            rows.swap(pivot, col);
            det = -det;
        }
        det *= rows[col][col].clone();
        for r in col + 1..n {
            let factor = Float::with_val(prec, &rows[r][col] / &rows[col][col]);
            for c in col..n {
                let sub = Float::with_val(prec, &factor * &rows[col][c]);
                rows[r][c] -= sub;
            }
        }
    }
    det
}

/// Projective limit class over {0, 1}: the direction a blow-up coordinate
/// degenerates to as the parameter grows.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProjectiveClass {
    /// [0 : 1]
    ZeroOne,
    /// [1 : 0]
    OneZero,
}

impl ProjectiveClass {
    pub fn as_pair(self) -> (u8, u8) {
        match self {
            ProjectiveClass::ZeroOne => (0, 1),
            ProjectiveClass::OneZero => (1, 0),
        }
    }
}

impl std::fmt::Display for ProjectiveClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let (a, b) = self.as_pair();
        write!(f, "[{a}:{b}]")
    }
}

/// Limits of the coordinate attached to generators i and k under embedding
/// j: the growth limit p (by modulus comparison) and the shrink limit
/// q = [sigma_j(e_i) : sigma_j(e_k)]. All indices are 0-based.
pub fn tangent_limits(
    cone: &Cone,
    i: usize,
    k: usize,
    j: usize,
) -> Result<(ProjectiveClass, (HpComplex, HpComplex))> {
    let n = cone.degree();
    for idx in [i, k, j] {
        if idx >= n {
            return Err(Error::IndexOutOfRange {
                index: idx,
                degree: n,
            });
        }
    }
    if i == k {
        return Err(Error::DomainError {
            detail: "generator indices must differ".into(),
        });
    }
    let prec = cone.field().precision();
    let b = cone.embedding_matrix()[i][j].clone();
    let c = cone.embedding_matrix()[k][j].clone();
    let ab = b.abs();
    let ac = c.abs();
    let gap = Float::with_val(prec, &ab - &ac).abs();
    let scale = Float::with_val(prec, ab.clone().max(&ac));
    let threshold = hp::two_pow(prec, -((prec as i32) / 2)) * scale;
    if gap <= threshold {
        return Err(Error::EqualModulusEmbeddings { i, k, embedding: j });
    }
    let p = if ab < ac {
        ProjectiveClass::ZeroOne
    } else {
        ProjectiveClass::OneZero
    };
    Ok((p, (b, c)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{AlgebraicInt, NumberField};
    use crate::fixtures;
    use crate::series::{mdzv_sum, DEFAULT_TERM_BUDGET};
    use num_bigint::BigInt;
    use num_rational::BigRational;

    const ZETA_2: f64 = 1.6449340668482264;
    const ZETA_3: f64 = 1.2020569031595943;

    fn comp(s: &[u64]) -> Composition {
        Composition::new(s.to_vec()).expect("valid composition")
    }

    fn hp_rows(prec: u32, rows: &[&[f64]]) -> Vec<Vec<Float>> {
        rows.iter()
            .map(|r| r.iter().map(|&v| hp::real(prec, v)).collect())
            .collect()
    }

    #[test]
    fn membrane_point_validates_ordering_and_positivity() {
        assert!(MembranePoint::new(hp_rows(64, &[&[3.0, 2.0, 1.0]])).is_ok());
        assert!(MembranePoint::new(hp_rows(64, &[&[1.0, 2.0]])).is_err());
        assert!(MembranePoint::new(hp_rows(64, &[&[2.0, 2.0]])).is_err());
        assert!(MembranePoint::new(hp_rows(64, &[&[2.0, 0.0]])).is_err());
        assert!(MembranePoint::new(hp_rows(64, &[&[2.0, 1.0], &[3.0]])).is_err());
    }

    #[test]
    fn integrand_is_f0_on_opened_columns() {
        let q = fixtures::rational_field(96);
        let cone = fixtures::rational_cone(&q);
        let c = comp(&[2]);
        // Pattern (1, 0): only the first column contributes, with
        // f0(t1) = e^{-t1}/(1 - e^{-t1}).
        let p = MembranePoint::new(hp_rows(96, &[&[0.9, 0.4]])).unwrap();
        let v = integrand_eval(&cone, &c, &p).unwrap();
        let expected = (-0.9f64).exp() / (1.0 - (-0.9f64).exp());
        assert!((v.to_f64() - expected).abs() < 1e-14);

        // All-zero pattern: empty product.
        let one = integrand_eval_pattern(&cone, &[0, 0], &p).unwrap();
        assert!((one.to_f64() - 1.0).abs() < 1e-30);

        // Shape mismatch is rejected.
        let bad = MembranePoint::new(hp_rows(96, &[&[0.9]])).unwrap();
        assert!(integrand_eval(&cone, &c, &bad).is_err());
    }

    #[test]
    fn integrand_on_quadratic_cone_is_product_of_f0_columns() {
        let nf = fixtures::quadratic_field_sqrt2(96);
        let cone = fixtures::quadratic_cone(&nf);
        let c = comp(&[1, 2]);
        let p = MembranePoint::new(hp_rows(
            96,
            &[&[1.4, 0.9, 0.3], &[2.0, 1.1, 0.5]],
        ))
        .unwrap();
        let v = integrand_eval(&cone, &c, &p).unwrap();
        // epsilon = (1, 1, 0): columns 0 and 1 carry f0.
        let f_a = cone
            .f0_closed(&[hp::real(96, 1.4), hp::real(96, 2.0)])
            .unwrap();
        let f_b = cone
            .f0_closed(&[hp::real(96, 0.9), hp::real(96, 1.1)])
            .unwrap();
        let expected = Float::with_val(96, &f_a * &f_b);
        assert!((v - &expected).abs().to_f64() < 1e-25);

        // Cross-check one factor against the truncated series form of f0.
        let (series_v, tail) = cone
            .f0_series(&[hp::real(96, 1.4), hp::real(96, 2.0)], 40)
            .unwrap();
        assert!((series_v - &f_a).abs().to_f64() <= tail.to_f64() + 1e-25);
    }

    #[test]
    fn rational_zeta_two_by_quadrature() {
        let q = fixtures::rational_field(96);
        let cone = fixtures::rational_cone(&q);
        let spec = QuadratureSpec {
            points_per_axis: 64,
            upper_cutoff: 40.0,
            ..QuadratureSpec::default()
        };
        let r = mdzv_integral(&cone, &comp(&[2]), &spec).unwrap();
        assert!(
            (r.value.to_f64() - ZETA_2).abs() < 1e-6,
            "got {}",
            r.value.to_f64()
        );
        assert!(r.error_estimate.to_f64() > 0.0);
    }

    #[test]
    fn rational_depth_two_matches_zeta_three() {
        let q = fixtures::rational_field(96);
        let cone = fixtures::rational_cone(&q);
        let spec = QuadratureSpec {
            points_per_axis: 64,
            upper_cutoff: 40.0,
            ..QuadratureSpec::default()
        };
        let r = mdzv_integral(&cone, &comp(&[1, 2]), &spec).unwrap();
        assert!(
            (r.value.to_f64() - ZETA_3).abs() < 1e-5,
            "got {}",
            r.value.to_f64()
        );
    }

    #[test]
    fn quadrature_refinement_converges_on_zeta_two() {
        let q = fixtures::rational_field(96);
        let cone = fixtures::rational_cone(&q);
        let c = comp(&[2]);
        let mut errs = Vec::new();
        for points in [16u32, 32, 64] {
            let spec = QuadratureSpec {
                points_per_axis: points,
                upper_cutoff: 40.0,
                ..QuadratureSpec::default()
            };
            let r = mdzv_integral(&cone, &c, &spec).unwrap();
            errs.push((r.value.to_f64() - ZETA_2).abs());
        }
        assert!(errs[1] < errs[0] && errs[2] < errs[1], "errors {errs:?}");
    }

    #[test]
    fn quadratic_cone_integral_matches_series() {
        let nf = fixtures::quadratic_field_sqrt2(96);
        let cone = fixtures::quadratic_cone(&nf);
        for s in [vec![2u64], vec![1, 2]] {
            let c = comp(&s);
            let series = mdzv_sum(&cone, &c, 4096, DEFAULT_TERM_BUDGET).unwrap();
            let spec = QuadratureSpec {
                points_per_axis: 64,
                upper_cutoff: 30.0,
                ..QuadratureSpec::default()
            };
            let integral = mdzv_integral(&cone, &c, &spec).unwrap();
            let sv = series.value.to_f64();
            let iv = integral.value.to_f64();
            assert!(
                ((iv - sv) / sv).abs() < 1e-4,
                "s={s:?}: integral {iv} vs series {sv}"
            );
            // Two-route agreement within the stated allowances.
            let allowance =
                integral.error_estimate.to_f64() + series.tail_bound.to_f64();
            assert!((iv - sv).abs() <= allowance, "s={s:?}: gap above allowance");
        }
    }

    #[test]
    fn dimension_and_field_guards() {
        let nf = fixtures::quadratic_field_sqrt2(80);
        let cone = fixtures::quadratic_cone(&nf);
        // Weight 5 on a quadratic field needs 10 membrane dimensions.
        let wide = comp(&[1, 1, 1, 2]);
        let err = mdzv_integral(&cone, &wide, &QuadratureSpec::default()).unwrap_err();
        assert_eq!(
            err,
            Error::DimensionBudgetExceeded {
                dims: 10,
                max: MAX_NESTED_DIMENSION
            }
        );

        let cubic = fixtures::cubic_field(80);
        let cone3 = fixtures::cubic_cone(&cubic);
        let err = mdzv_integral(&cone3, &comp(&[2]), &QuadratureSpec::default()).unwrap_err();
        assert_eq!(err, Error::NonTotallyReal);

        let bad_spec = QuadratureSpec {
            points_per_axis: 1,
            ..QuadratureSpec::default()
        };
        let q = fixtures::rational_field(80);
        let coneq = fixtures::rational_cone(&q);
        assert!(mdzv_integral(&coneq, &comp(&[2]), &bad_spec).is_err());
    }

    #[test]
    fn importance_sampler_brackets_zeta_two() {
        let q = fixtures::rational_field(80);
        let cone = fixtures::rational_cone(&q);
        let spec = QuadratureSpec {
            scheme: Scheme::QuasiRandom,
            sample_count: 40_000,
            ..QuadratureSpec::default()
        };
        let r = mdzv_integral(&cone, &comp(&[2]), &spec).unwrap();
        let err = r.error_estimate.to_f64();
        assert!(err > 0.0 && err < 0.05);
        assert!(
            (r.value.to_f64() - ZETA_2).abs() < 2.0 * err.max(1e-3),
            "estimate {} err {err}",
            r.value.to_f64()
        );
        // Same seed and inputs reproduce the estimate exactly.
        let again = mdzv_integral(&cone, &comp(&[2]), &spec).unwrap();
        assert_eq!(r.value.to_f64(), again.value.to_f64());
    }

    #[test]
    fn jacobian_matches_embedding_determinant_on_rational_cone() {
        let q = fixtures::rational_field(96);
        let cone = fixtures::rational_cone(&q);
        let t = vec![hp::real(96, 1.0)];
        let h = hp::real(96, 1e-5);
        let (jac, sqrt_d, ratio) = omega_alpha_check(&cone, &t, &h).unwrap();
        assert!((jac.to_f64() - (-1.0f64).exp()).abs() < 1e-9);
        assert!((sqrt_d.to_f64() - 1.0).abs() < 1e-20);
        assert!((ratio.to_f64() - 1.0).abs() < 1e-6);
    }

    #[test]
    fn jacobian_ratio_on_quadratic_cone_with_cached_determinant() {
        let nf = fixtures::quadratic_field_sqrt2(128);
        let cone = fixtures::quadratic_cone(&nf);
        let t = vec![hp::real(128, 0.7), hp::real(128, 1.3)];
        let h = hp::real(128, 1e-5);
        let (_, sqrt_d, ratio) = omega_alpha_check(&cone, &t, &h).unwrap();
        // |det sigma| for generators (1, 3 + 2 sqrt2) is 4 sqrt2.
        assert!((sqrt_d.to_f64() - 4.0 * 2f64.sqrt()).abs() < 1e-12);
        assert!((ratio.to_f64() - 1.0).abs() < 1e-5);
    }

    #[test]
    fn jacobian_error_shrinks_quadratically_with_the_step() {
        let nf = fixtures::quadratic_field_sqrt2(128);
        let cone = fixtures::quadratic_cone(&nf);
        let t = vec![hp::real(128, 0.7), hp::real(128, 1.3)];
        let coarse = omega_alpha_check(&cone, &t, &hp::real(128, 1e-2)).unwrap();
        let fine = omega_alpha_check(&cone, &t, &hp::real(128, 5e-3)).unwrap();
        let e_coarse = (coarse.2.to_f64() - 1.0).abs();
        let e_fine = (fine.2.to_f64() - 1.0).abs();
        assert!(e_fine > 0.0 && e_coarse > 0.0);
        let shrink = e_coarse / e_fine;
        assert!(
            (2.5..6.0).contains(&shrink),
            "expected roughly fourfold shrink, got {shrink}"
        );
    }

    #[test]
    fn oversized_steps_are_rejected() {
        let q = fixtures::rational_field(96);
        let cone = fixtures::rational_cone(&q);
        let t = vec![hp::real(96, 1.0)];
        let err = omega_alpha_check(&cone, &t, &hp::real(96, 0.5)).unwrap_err();
        assert!(matches!(err, Error::StepTooLarge { .. }));
    }

    #[test]
    fn tangent_limits_follow_the_modulus_comparison() {
        let nf = fixtures::quadratic_field_sqrt2(96);
        let cone = fixtures::quadratic_cone(&nf);
        // Embeddings are ordered by ascending root, so embedding 0 sends
        // sqrt2 to the negative root: sigma_0(e_2) = 3 - 2 sqrt2 = 0.1716.
        let (p, (qa, qb)) = tangent_limits(&cone, 0, 1, 0).unwrap();
        assert_eq!(p, ProjectiveClass::OneZero);
        assert!((qa.re.to_f64() - 1.0).abs() < 1e-25);
        assert!((qb.re.to_f64() - 0.171572875253810).abs() < 1e-12);

        // Embedding 1: sigma_1(e_2) = 3 + 2 sqrt2 = 5.83 > 1.
        let (p, (_, qb)) = tangent_limits(&cone, 0, 1, 1).unwrap();
        assert_eq!(p, ProjectiveClass::ZeroOne);
        assert!((qb.re.to_f64() - 5.828427124746190).abs() < 1e-12);

        // Swapping i and k flips the growth class.
        let (p_swapped, _) = tangent_limits(&cone, 1, 0, 1).unwrap();
        assert_eq!(p_swapped, ProjectiveClass::OneZero);

        assert!(matches!(
            tangent_limits(&cone, 0, 0, 0),
            Err(Error::DomainError { .. })
        ));
        assert!(matches!(
            tangent_limits(&cone, 0, 2, 0),
            Err(Error::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn equal_modulus_embeddings_are_degenerate() {
        // A split quadratic algebra makes two independent generators share
        // an embedding value exactly: roots of x^2 - 1 are -1 and 1, and
        // both 1 and 2 + r embed to 1 at the first embedding.
        let nf = NumberField::new(
            vec![BigInt::from(-1), BigInt::from(0), BigInt::from(1)],
            vec![
                vec![BigRational::from(BigInt::from(1)), BigRational::from(BigInt::from(0))],
                vec![BigRational::from(BigInt::from(0)), BigRational::from(BigInt::from(1))],
            ],
            96,
        )
        .unwrap();
        let cone = Cone::new(
            &nf,
            vec![
                AlgebraicInt::from_i64s(&[1, 0]),
                AlgebraicInt::from_i64s(&[2, 1]),
            ],
        )
        .unwrap();
        let err = tangent_limits(&cone, 0, 1, 0).unwrap_err();
        assert_eq!(
            err,
            Error::EqualModulusEmbeddings {
                i: 0,
                k: 1,
                embedding: 0
            }
        );
        // The other embedding separates them: 1 versus 3.
        let (p, _) = tangent_limits(&cone, 0, 1, 1).unwrap();
        assert_eq!(p, ProjectiveClass::ZeroOne);
    }

    #[test]
    fn tangent_ratio_matches_difference_quotient_with_improving_accuracy() {
        // d(e^{-bt}) / d(e^{-ct}) tends to b/c as t -> 0; the discrepancy
        // must shrink as t does (Richardson-style trend on real embeddings).
        let nf = fixtures::quadratic_field_sqrt2(128);
        let cone = fixtures::quadratic_cone(&nf);
        for j in 0..2 {
            let (_, (qa, qb)) = tangent_limits(&cone, 0, 1, j).unwrap();
            let target = qa.re.to_f64() / qb.re.to_f64();
            let b = cone.embedding_matrix()[0][j].re.to_f64();
            let c = cone.embedding_matrix()[1][j].re.to_f64();
            let mut prev_err = f64::INFINITY;
            for t in [1e-3, 1e-4, 1e-5] {
                let delta = t / 50.0;
                let num = (-b * (t + delta)).exp() - (-b * (t - delta)).exp();
                let den = (-c * (t + delta)).exp() - (-c * (t - delta)).exp();
                let err = (num / den - target).abs();
                assert!(err < prev_err, "embedding {j}: error {err} at t={t}");
                prev_err = err;
            }
        }
    }
}
