//! Nested-series evaluation of multiple zeta values attached to a cone.
//!
//! The target quantity is a sum over m-tuples of cone members,
//!
//!   sum over (beta_1, ..., beta_m)  of  prod_k  N(beta_1 + ... + beta_k)^(-s_k),
//!
//! where each beta ranges over the cone's positive integer span and N is the
//! field norm. Truncation keeps the coefficient box 1 <= a_i <= coeff_bound
//! for every beta independently; `tail_bound` returns a proven bound on the
//! discarded mass.
//!
//! Engines, selected by shape:
//!   depth 1          direct box enumeration with exact integer norms
//!   degree 1, m >= 2 streaming windowed prefix sums, O(m^2) scalar cursors
//!   degree 2, m >= 2 streaming rows, O(m^2) cursor rows of prefix sums
//!   degree >= 3      dense multidimensional prefix grid (memory permitting)
//!
//! All engines share the exact multilinear norm form extracted from the
//! regular representations of the cone generators, so norms are computed in
//! integer arithmetic and only the final power is floating point.

use crate::cone::Cone;
use crate::error::{Error, Result};
use crate::hp;
use crate::quad::Neumaier;
use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use rug::Float;
use std::collections::BTreeMap;

/// Default ceiling on the work estimate depth * bound^degree.
pub const DEFAULT_TERM_BUDGET: u128 = 1 << 33;

/// Ceiling on dense-grid cells for the degree >= 3 engine (two f64 grids
/// of this size are held in memory).
const GRID_CELL_BUDGET: u128 = 4_000_000;

/// Largest admissible exponent entry; keeps f64 powers well conditioned.
const MAX_EXPONENT: u64 = 60;

/// A tuple of positive integer exponents (s_1, ..., s_m) with s_m >= 2,
/// together with its membrane depth pattern.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Composition {
    s: Vec<u64>,
    epsilon: Vec<u8>,
}

impl Composition {
    /// Validates exponents: nonempty, all >= 1, last >= 2.
    pub fn new(s: Vec<u64>) -> Result<Self> {
        if s.is_empty() {
            return Err(Error::EmptyComposition);
        }
        if let Some(&bad) = s.iter().find(|&&v| v == 0 || v > MAX_EXPONENT) {
            return Err(Error::DomainError {
                detail: format!("exponent {bad} outside supported range 1..={MAX_EXPONENT}"),
            });
        }
        let last = *s.last().expect("nonempty");
        if last < 2 {
            return Err(Error::LastExponentTooSmall { got: last });
        }
        // epsilon marks the first slot of each block of length s_k; the
        // total length is the weight. The pattern always starts with 1 and
        // ends with 0 because s_m >= 2.
        let weight: u64 = s.iter().sum();
        let mut epsilon = vec![0u8; weight as usize];
        let mut pos = 0usize;
        for &sk in &s {
            epsilon[pos] = 1;
            pos += sk as usize;
        }
        debug_assert_eq!(epsilon[0], 1);
        debug_assert_eq!(*epsilon.last().expect("weight >= 2"), 0);
        Ok(Composition { s, epsilon })
    }

    /// Number of exponents m.
    pub fn depth(&self) -> usize {
        self.s.len()
    }

    /// Sum of the exponents.
    pub fn weight(&self) -> u64 {
        self.s.iter().sum()
    }

    pub fn exponents(&self) -> &[u64] {
        &self.s
    }

    /// Depth pattern of length weight(): 1 opens a block, 0 continues it.
    pub fn epsilon(&self) -> &[u8] {
        &self.epsilon
    }

    /// 0-based offsets of the block starts inside the epsilon pattern.
    pub fn block_starts(&self) -> Vec<usize> {
        self.epsilon
            .iter()
            .enumerate()
            .filter_map(|(i, &e)| (e == 1).then_some(i))
            .collect()
    }
}

/// Outcome of a truncated series evaluation.
#[derive(Clone, Debug)]
pub struct SeriesResult {
    /// Truncated sum, exactly the box-truncation of the series.
    pub value: Float,
    /// Proven upper bound on the discarded tail, nonincreasing in the bound.
    pub tail_bound: Float,
    /// Number of coefficient tuples included: coeff_bound^(degree * depth).
    pub terms_used: u128,
    /// The per-coordinate truncation bound that was used.
    pub coeff_bound: u64,
}

/// Exact norm form: N(sum_i a_i e_i) as an integer polynomial in the box
/// coordinates, obtained by multilinear expansion of the determinant of the
/// regular representation. Total degree of every monomial equals the field
/// degree.
struct NormPoly {
    n: usize,
    terms: Vec<(Vec<u32>, i128)>,
}

impl NormPoly {
    fn build(cone: &Cone) -> Result<NormPoly> {
        let field = cone.field();
        let n = field.degree();
        let reps: Vec<_> = cone
            .generators()
            .iter()
            .map(|g| field.regular_rep(g))
            .collect::<Result<Vec<_>>>()?;
        let mut acc: BTreeMap<Vec<u32>, BigInt> = BTreeMap::new();
        // Row-multilinearity of the determinant: assign each row of the
        // matrix independently to one generator's representation.
        let mut choice = vec![0usize; n];
        loop {
            let matrix: Vec<Vec<BigInt>> = (0..n)
                .map(|r| reps[choice[r]].entries[r].clone())
                .collect();
            let det = crate::poly::bigint_det(&matrix);
            if !det.is_zero() {
                let mut exps = vec![0u32; n];
                for &p in &choice {
                    exps[p] += 1;
                }
                *acc.entry(exps).or_insert_with(BigInt::zero) += det;
            }
            // odometer over {0..n-1}^n
            let mut carry = true;
            for digit in choice.iter_mut() {
                if *digit + 1 < n {
                    *digit += 1;
                    carry = false;
                    break;
                }
                *digit = 0;
            }
            if carry {
                break;
            }
        }
        let mut terms = Vec::new();
        for (exps, coeff) in acc {
            if coeff.is_zero() {
                continue;
            }
            let c = coeff.to_i128().ok_or_else(|| Error::DomainError {
                detail: "norm form coefficient exceeds the supported integer range".into(),
            })?;
            terms.push((exps, c));
        }
        Ok(NormPoly { n, terms })
    }

    /// Checks that |N| over the box [1, bound]^n stays inside i128 with
    /// headroom, so evaluation can use unchecked arithmetic.
    fn validate_range(&self, bound: u64) -> Result<()> {
        let b = bound as f64;
        let total: f64 = self
            .terms
            .iter()
            .map(|(_, c)| (*c as f64).abs() * b.powi(self.n as i32))
            .sum();
        if total > 1.0e37 {
            return Err(Error::DomainError {
                detail: "norm values exceed the fast evaluation range at this bound".into(),
            });
        }
        Ok(())
    }

    #[inline]
    fn eval(&self, a: &[i64]) -> i128 {
        let mut total = 0i128;
        for (exps, coeff) in &self.terms {
            let mut prod = *coeff;
            for (d, &e) in exps.iter().enumerate() {
                for _ in 0..e {
                    prod *= a[d] as i128;
                }
            }
            total += prod;
        }
        total
    }
}

/// Norm evaluation specialised by degree for the streaming inner loops.
enum FastNorm {
    Linear { c: i128 },
    Quadratic { xx: i128, xy: i128, yy: i128 },
    Poly(NormPoly),
}

impl FastNorm {
    fn build(cone: &Cone, bound: u64) -> Result<FastNorm> {
        let poly = NormPoly::build(cone)?;
        poly.validate_range(bound)?;
        match poly.n {
            1 => {
                let c = poly
                    .terms
                    .iter()
                    .find(|(e, _)| e[0] == 1)
                    .map(|&(_, c)| c)
                    .unwrap_or(0);
                Ok(FastNorm::Linear { c })
            }
            2 => {
                let pick = |ex: &[u32]| {
                    poly.terms
                        .iter()
                        .find(|(e, _)| e == ex)
                        .map(|&(_, c)| c)
                        .unwrap_or(0)
                };
                Ok(FastNorm::Quadratic {
                    xx: pick(&[2, 0]),
                    xy: pick(&[1, 1]),
                    yy: pick(&[0, 2]),
                })
            }
            _ => Ok(FastNorm::Poly(poly)),
        }
    }

    #[inline]
    fn eval1(&self, x: i64) -> i128 {
        match self {
            FastNorm::Linear { c } => c * x as i128,
            _ => unreachable!("degree mismatch"),
        }
    }

    #[inline]
    fn eval2(&self, x: i64, y: i64) -> i128 {
        match self {
            FastNorm::Quadratic { xx, xy, yy } => {
                let (x, y) = (x as i128, y as i128);
                xx * x * x + xy * x * y + yy * y * y
            }
            _ => unreachable!("degree mismatch"),
        }
    }

    fn eval(&self, a: &[i64]) -> i128 {
        match self {
            FastNorm::Linear { .. } => self.eval1(a[0]),
            FastNorm::Quadratic { .. } => self.eval2(a[0], a[1]),
            FastNorm::Poly(p) => p.eval(a),
        }
    }
}

#[inline]
fn power_term(norm: i128, s: u64) -> f64 {
    debug_assert!(norm >= 1, "cone member norm must be a positive integer");
    (norm as f64).powi(-(s as i32))
}

/// Evaluates the truncated nested series for a totally positive cone.
///
/// `coeff_bound` is the per-coordinate truncation A; `term_budget` caps the
/// work estimate depth * A^degree and triggers `Error::Overflow` when it
/// would be exceeded. Deeper degree >= 3 evaluations additionally require
/// the dense grid (depth * A + 1)^degree to fit in memory and report
/// `Error::Overflow` against the grid budget otherwise.
pub fn mdzv_sum(
    cone: &Cone,
    comp: &Composition,
    coeff_bound: u64,
    term_budget: u128,
) -> Result<SeriesResult> {
    let n = cone.degree();
    let m = comp.depth();
    if coeff_bound == 0 {
        return Err(Error::DomainError {
            detail: "coefficient bound must be at least 1".into(),
        });
    }
    let estimate = (coeff_bound as u128)
        .checked_pow(n as u32)
        .and_then(|p| p.checked_mul(m as u128))
        .unwrap_or(u128::MAX);
    if estimate > term_budget {
        return Err(Error::Overflow {
            estimate,
            budget: term_budget,
        });
    }
    let reach = (m as u64) * coeff_bound;
    let norm = FastNorm::build(cone, reach)?;
    let s = comp.exponents();

    let value = if m == 1 {
        sum_depth1(&norm, n, s[0], coeff_bound)
    } else {
        match n {
            1 => sum_stream_deg1(&norm, s, coeff_bound),
            2 => sum_stream_deg2(&norm, s, coeff_bound),
            _ => {
                let side = (reach + 1) as u128;
                let cells = side.checked_pow(n as u32).unwrap_or(u128::MAX);
                if cells > GRID_CELL_BUDGET {
                    return Err(Error::Overflow {
                        estimate: cells,
                        budget: GRID_CELL_BUDGET,
                    });
                }
                sum_grid(&norm, n, s, coeff_bound)
            }
        }
    };

    let tail = tail_bound(cone, comp, coeff_bound)?;
    let prec = cone.field().precision();
    Ok(SeriesResult {
        value: hp::real(prec, value),
        tail_bound: tail,
        terms_used: (coeff_bound as u128).saturating_pow((n * m) as u32),
        coeff_bound,
    })
}

/// Depth 1: direct enumeration of the coefficient box.
fn sum_depth1(norm: &FastNorm, n: usize, s: u64, bound: u64) -> f64 {
    let mut acc = Neumaier::new();
    match norm {
        FastNorm::Linear { .. } => {
            for x in 1..=bound as i64 {
                acc.add(power_term(norm.eval1(x), s));
            }
        }
        FastNorm::Quadratic { .. } => {
            for x in 1..=bound as i64 {
                for y in 1..=bound as i64 {
                    acc.add(power_term(norm.eval2(x, y), s));
                }
            }
        }
        FastNorm::Poly(_) => {
            let mut coords = vec![1i64; n];
            loop {
                acc.add(power_term(norm.eval(&coords), s));
                let mut carry = true;
                for c in coords.iter_mut() {
                    if *c < bound as i64 {
                        *c += 1;
                        carry = false;
                        break;
                    }
                    *c = 1;
                }
                if carry {
                    break;
                }
            }
        }
    }
    acc.value()
}

/// Degree 1 streaming engine for depth >= 2.
///
/// Rewrites the nested sum over increments w_k in [1, A] as windowed prefix
/// sums of the partial quantities F_k(u) = g_k(u) * (S_{k-1}(u-1) -
/// S_{k-1}(u-1-A)), where S_k is the running prefix of F_k and g_k(u) =
/// N(u e_1)^(-s_k). Each level needs its prefix at a fixed lag behind the
/// master counter, and the lags collapse to (m - k) + c * A for c <= m - k,
/// so O(m^2) compensated cursors replace any stored arrays.
fn sum_stream_deg1(norm: &FastNorm, s: &[u64], bound: u64) -> f64 {
    let m = s.len();
    let a = bound as i64;
    let top = m as i64 * a;
    let mut streams: Vec<Vec<Neumaier>> = (1..m).map(|k| vec![Neumaier::new(); m - k + 1]).collect();
    let mut total = Neumaier::new();
    for u in 1..=top {
        for k in 1..m {
            let lag_base = (m - k) as i64;
            for c in 0..=(m - k) {
                let pos = u - lag_base - c as i64 * a;
                if pos < 1 {
                    continue;
                }
                let f = if k == 1 {
                    if pos <= a {
                        power_term(norm.eval1(pos), s[0])
                    } else {
                        0.0
                    }
                } else {
                    let hi = streams[k - 2][c].value();
                    let lo = streams[k - 2][c + 1].value();
                    let win = (hi - lo).max(0.0);
                    if win > 0.0 {
                        power_term(norm.eval1(pos), s[k - 1]) * win
                    } else {
                        0.0
                    }
                };
                if f != 0.0 {
                    streams[k - 1][c].add(f);
                }
            }
        }
        let hi = streams[m - 2][0].value();
        let lo = streams[m - 2][1].value();
        let win = (hi - lo).max(0.0);
        if win > 0.0 {
            total.add(power_term(norm.eval1(u), s[m - 1]) * win);
        }
    }
    total.value()
}

/// Degree 2 streaming engine for depth >= 2: the same lag structure as the
/// degree 1 engine, with each cursor holding a full row of two-dimensional
/// prefix sums P_k(x, .) so windows become four-corner differences.
fn sum_stream_deg2(norm: &FastNorm, s: &[u64], bound: u64) -> f64 {
    let m = s.len();
    let a = bound as usize;
    let top = m * a;
    let width = top + 1;
    let mut rows: Vec<Vec<Vec<f64>>> = (1..m)
        .map(|k| vec![vec![0.0f64; width]; m - k + 1])
        .collect();
    let mut total = Neumaier::new();

    let window = |hi: &[f64], lo: &[f64], y: usize| -> f64 {
        let near = hi[y - 1] - lo[y - 1];
        let far = if y >= a + 1 {
            hi[y - 1 - a] - lo[y - 1 - a]
        } else {
            0.0
        };
        (near - far).max(0.0)
    };

    for u in 1..=top {
        for k in 1..m {
            let lag_base = m - k;
            for c in 0..=(m - k) {
                let lag = lag_base + c * a;
                if u <= lag {
                    continue;
                }
                let pos = (u - lag) as i64;
                if k == 1 {
                    if pos <= a as i64 {
                        let row = &mut rows[0][c];
                        let mut run = 0.0f64;
                        for y in 1..width {
                            if y <= a {
                                run += power_term(norm.eval2(pos, y as i64), s[0]);
                            }
                            row[y] += run;
                        }
                    }
                } else {
                    let (lower, upper) = rows.split_at_mut(k - 1);
                    let prev = &lower[k - 2];
                    let row = &mut upper[0][c];
                    let mut run = 0.0f64;
                    for y in 1..width {
                        let win = window(&prev[c], &prev[c + 1], y);
                        if win > 0.0 {
                            run += power_term(norm.eval2(pos, y as i64), s[k - 1]) * win;
                        }
                        row[y] += run;
                    }
                }
            }
        }
        let prev = &rows[m - 2];
        for y in 1..width {
            let win = window(&prev[0], &prev[1], y);
            if win > 0.0 {
                total.add(power_term(norm.eval2(u as i64, y as i64), s[m - 1]) * win);
            }
        }
    }
    total.value()
}

/// Dense-grid engine for degree >= 3: level by level, store the
/// n-dimensional prefix sums of F_k and read box windows off 2^n corners.
fn sum_grid(norm: &FastNorm, n: usize, s: &[u64], bound: u64) -> f64 {
    let m = s.len();
    let a = bound as i64;
    let side = (m as i64 * a + 1) as usize;
    let cells = side.pow(n as u32);
    let strides: Vec<usize> = (0..n).map(|d| side.pow(d as u32)).collect();

    // Level 1 terms live on the box [1, A]^n.
    let mut grid = vec![0.0f64; cells];
    let mut coords = vec![1i64; n];
    'outer: loop {
        let idx: usize = coords
            .iter()
            .zip(&strides)
            .map(|(&c, &st)| c as usize * st)
            .sum();
        grid[idx] = power_term(norm.eval(&coords), s[0]);
        let mut d = 0;
        loop {
            if coords[d] < a {
                coords[d] += 1;
                break;
            }
            coords[d] = 1;
            d += 1;
            if d == n {
                break 'outer;
            }
        }
    }
    prefix_in_place(&mut grid, side, n, &strides);

    let corner_masks = 1usize << n;
    let window = |prefix: &[f64], coords: &[i64]| -> f64 {
        let mut total = 0.0;
        for mask in 0..corner_masks {
            let mut idx = 0usize;
            let mut ok = true;
            for d in 0..n {
                let shift = if mask >> d & 1 == 1 { 1 + a } else { 1 };
                let e = coords[d] - shift;
                if e < 0 {
                    ok = false;
                    break;
                }
                idx += e as usize * strides[d];
            }
            if ok {
                let sign = if (mask.count_ones() & 1) == 1 { -1.0 } else { 1.0 };
                total += sign * prefix[idx];
            }
        }
        total.max(0.0)
    };

    for k in 2..=m {
        let last = k == m;
        let mut next = if last { Vec::new() } else { vec![0.0f64; cells] };
        let mut acc = Neumaier::new();
        let mut coords = vec![0i64; n];
        for idx in 0..cells {
            // decode coords from idx incrementally
            if idx > 0 {
                let mut d = 0;
                loop {
                    coords[d] += 1;
                    if (coords[d] as usize) < side {
                        break;
                    }
                    coords[d] = 0;
                    d += 1;
                }
            }
            if coords.iter().any(|&c| c < 1) {
                continue;
            }
            let win = window(&grid, &coords);
            if win <= 0.0 {
                continue;
            }
            let f = power_term(norm.eval(&coords), s[k - 1]) * win;
            if last {
                acc.add(f);
            } else {
                next[idx] = f;
            }
        }
        if last {
            return acc.value();
        }
        prefix_in_place(&mut next, side, n, &strides);
        grid = next;
    }
    unreachable!("depth >= 2 loops terminate at k == m");
}

fn prefix_in_place(grid: &mut [f64], side: usize, n: usize, strides: &[usize]) {
    for d in 0..n {
        let st = strides[d];
        for idx in 0..grid.len() {
            if (idx / st) % side != 0 {
                grid[idx] += grid[idx - st];
            }
        }
    }
}

/// Exact reference evaluation by nested enumeration with field arithmetic:
/// every partial sum gamma_k is accumulated as an algebraic integer and its
/// norm taken exactly, so this oracle shares no code with the fast engines.
/// Cost is coeff_bound^(degree * depth); intended for small inputs.
pub fn mdzv_sum_reference(cone: &Cone, comp: &Composition, coeff_bound: u64) -> Result<Float> {
    use rug::ops::Pow;
    let field = cone.field();
    let n = cone.degree();
    let m = comp.depth();
    let tuples = (coeff_bound as u128).checked_pow((n * m) as u32);
    assert!(
        matches!(tuples, Some(t) if t <= 4_000_000),
        "reference oracle is restricted to small boxes"
    );
    let prec = field.precision();
    let s = comp.exponents();
    let mut total = Float::with_val(prec + 16, 0);

    // Odometer over all m coefficient vectors at once.
    let mut coords = vec![1u64; n * m];
    loop {
        let mut gamma = field.zero_element();
        let mut term = Float::with_val(prec + 16, 1);
        for k in 0..m {
            let member = cone.member(&coords[k * n..(k + 1) * n]);
            gamma = field.add(&gamma, &member)?;
            let nb = field.norm(&gamma)?;
            assert!(nb.is_positive(), "norms in a valid cone are positive");
            let nf = hp::real_from_bigint(prec + 16, &nb);
            term *= nf.pow(-(s[k] as i32));
        }
        total += term;

        let mut carry = true;
        for c in coords.iter_mut() {
            if *c < coeff_bound {
                *c += 1;
                carry = false;
                break;
            }
            *c = 1;
        }
        if carry {
            break;
        }
    }
    Ok(total)
}

/// Proven upper bound on the series mass outside the coefficient box.
///
/// Every accumulated partial sum gamma_k satisfies the vertex bound
/// N(gamma_k) >= u_k^n * kappa with u_k the total coefficient mass so far
/// and kappa the minimum generator norm contribution (weighted AM-GM per
/// embedding). Tuples escaping the box are covered by a union over the
/// violating level; each slab sum is bounded by nested integral majorants
/// carried as nonincreasing step functions with power tails. The result is
/// monotone nonincreasing in `coeff_bound`.
pub fn tail_bound(cone: &Cone, comp: &Composition, coeff_bound: u64) -> Result<Float> {
    let n = cone.degree();
    let m = comp.depth();
    let s = comp.exponents();
    if coeff_bound == 0 {
        return Err(Error::DomainError {
            detail: "coefficient bound must be at least 1".into(),
        });
    }
    let kappa = vertex_norm_floor(cone)?;

    // factorial of n-1 for the lattice count C(w-1, n-1) <= w^(n-1)/(n-1)!
    let fact: f64 = (1..n as u64).map(|k| k as f64).product::<f64>().max(1.0);
    let umax = ((coeff_bound as f64 + n as f64) * 10.0).max(1.0e6);

    let mut total = 0.0f64;
    for violator in 0..m {
        let mut phi = tail::StepBound::one();
        for k in (0..m).rev() {
            let a = (n as f64 - 1.0) - (n as f64) * s[k] as f64;
            let shift = if k == violator {
                coeff_bound as f64 + n as f64
            } else {
                n as f64
            };
            phi = tail::transform(&phi, a, shift, umax);
        }
        total += phi.eval(0.0);
    }
    total *= kappa.powi(-(comp.weight() as i32)) / fact.powi(m as i32);
    Ok(hp::real(cone.field().precision(), total))
}

/// Lower bound kappa with N(gamma) >= (sum of coefficients)^n * kappa for
/// every cone member gamma: the minimum over generators of the product of
/// embedding contributions, using real parts for complex embeddings (valid
/// because moduli dominate real parts and the norm is the modulus product).
fn vertex_norm_floor(cone: &Cone) -> Result<f64> {
    let field = cone.field();
    if field.is_totally_real() {
        // Exact: kappa = min generator norm, a positive integer.
        let mut best: Option<BigInt> = None;
        for g in cone.generators() {
            let nb = field.norm(g)?;
            if !nb.is_positive() {
                return Err(Error::DomainError {
                    detail: "tail bound requires totally positive generators".into(),
                });
            }
            best = Some(match best {
                None => nb,
                Some(b) => b.min(nb),
            });
        }
        return Ok(best
            .expect("cone has generators")
            .to_f64()
            .expect("generator norm fits in f64"));
    }
    // The embedding matrix lists all degree-many embeddings, so conjugate
    // pairs contribute their squared real part through the two conjugate
    // columns automatically.
    let mut kappa = f64::INFINITY;
    for row in cone.embedding_matrix() {
        let mut prod = 1.0f64;
        for z in row {
            let re = z.re.to_f64();
            if re <= 0.0 {
                return Err(Error::DomainError {
                    detail: "tail bound requires embeddings with positive real part".into(),
                });
            }
            prod *= re;
        }
        kappa = kappa.min(prod);
    }
    // Small downward guard so float rounding cannot break rigor.
    Ok(kappa * (1.0 - 1e-9))
}

/// Nonincreasing step majorants with power-law tails, used to push integral
/// bounds through the nested levels of the tail estimate.
mod tail {
    /// h(y) <= vals[l] on [edges[l], edges[l+1]), and h(y) <= c * y^(-p)
    /// for y >= edges.last(). vals is nonincreasing.
    pub struct StepBound {
        edges: Vec<f64>,
        vals: Vec<f64>,
        tail_c: f64,
        tail_p: f64,
    }

    impl StepBound {
        /// The constant majorant h == 1.
        pub fn one() -> StepBound {
            StepBound {
                edges: vec![0.0],
                vals: Vec::new(),
                tail_c: 1.0,
                tail_p: 0.0,
            }
        }

        pub fn eval(&self, y: f64) -> f64 {
            let ymax = *self.edges.last().expect("edges nonempty");
            if self.vals.is_empty() || y >= ymax {
                if self.tail_p == 0.0 {
                    return self.tail_c;
                }
                return self.tail_c * y.powf(-self.tail_p);
            }
            if y <= self.edges[0] {
                return self.vals[0];
            }
            let l = self.edges.partition_point(|&e| e <= y) - 1;
            self.vals[l.min(self.vals.len() - 1)]
        }

        /// Upper bound on the integral of t^a * h(t) over [y, infinity).
        /// Requires tail_p - a - 1 > 0 for convergence.
        pub fn integral_from(&self, y: f64, a: f64) -> f64 {
            debug_assert!(y > 0.0);
            let ymax = *self.edges.last().expect("edges nonempty");
            let decay = self.tail_p - a - 1.0;
            assert!(decay > 0.0, "tail integral must converge");
            let start = y.max(ymax);
            let mut total = self.tail_c * start.powf(-decay) / decay;
            if y < ymax {
                for l in 0..self.vals.len() {
                    let hi = self.edges[l + 1];
                    if hi <= y {
                        continue;
                    }
                    let lo = self.edges[l].max(y);
                    if lo >= hi {
                        continue;
                    }
                    total += self.vals[l] * power_integral(a, lo, hi);
                }
            }
            total
        }
    }

    /// Integral of t^a over [lo, hi], 0 < lo < hi.
    fn power_integral(a: f64, lo: f64, hi: f64) -> f64 {
        if (a + 1.0).abs() < 1e-12 {
            (hi / lo).ln()
        } else {
            (hi.powf(a + 1.0) - lo.powf(a + 1.0)) / (a + 1.0)
        }
    }

    /// One level of the nested bound: given a majorant phi of the deeper
    /// levels as a function of the running coefficient mass, returns a
    /// majorant of U -> G(U + shift) + int_{U+shift}^inf G(t) dt where
    /// G(t) = t^a * phi(t). Monotone because a < 0 and phi is nonincreasing.
    pub fn transform(phi: &StepBound, a: f64, shift: f64, umax_hint: f64) -> StepBound {
        debug_assert!(a < 0.0);
        let prev_ymax = *phi.edges.last().expect("edges nonempty");
        let umax = umax_hint.max(prev_ymax).max(shift);
        let mut edges = vec![0.0f64];
        let mut y = 1.0f64;
        while y < umax {
            edges.push(y);
            y *= 1.05;
        }
        edges.push(y);
        let bound_at = |u: f64| -> f64 {
            let t = u + shift;
            t.powf(a) * phi.eval(t) + phi.integral_from(t, a)
        };
        let mut vals: Vec<f64> = edges[..edges.len() - 1]
            .iter()
            .map(|&u| bound_at(u))
            .collect();
        // Enforce the nonincreasing invariant against float wobble.
        for l in (0..vals.len().saturating_sub(1)).rev() {
            vals[l] = vals[l].max(vals[l + 1]);
        }
        // Power tail: for U >= umax (so U + shift is in phi's tail region),
        //   G(U+shift) + int <= c (U+shift)^(a-p) (1 + (U+shift)/(p-a-1) / (U+shift))
        // which is at most c' U^(-(p-a-1)) with c' below.
        let p = phi.tail_p;
        let decay = p - a - 1.0;
        assert!(decay > 0.0);
        let tail_c = phi.tail_c * (1.0 / umax + 1.0 / decay);
        StepBound {
            edges,
            vals,
            tail_c,
            tail_p: decay,
        }
    }
}
