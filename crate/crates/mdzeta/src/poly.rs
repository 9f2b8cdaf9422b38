//! Exact univariate polynomials over Q, with certified root extraction.
//!
//! Everything structural (degree checks, square-freeness, Sturm counts,
//! resultants) is computed exactly on `BigRational`/`BigInt`. Floating point
//! enters only at the last step, where isolated roots are polished by Newton
//! iteration at twice the requested precision and rounded back. The residual
//! |p(root)| is re-checked after rounding, so callers can rely on
//! |p(root)| < 2^(-prec/2) without trusting the iteration count.

use crate::hp::{self, HpComplex};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rug::Float;

/// Dense polynomial over Q, coefficients ascending, trailing zeros trimmed.
#[derive(Clone, Debug, PartialEq)]
pub struct QPoly {
    coeffs: Vec<BigRational>,
}

impl QPoly {
    pub fn new(mut coeffs: Vec<BigRational>) -> Self {
        while coeffs.len() > 1 && coeffs.last().map_or(false, Zero::is_zero) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(BigRational::zero());
        }
        QPoly { coeffs }
    }

    pub fn from_bigint_coeffs(coeffs: &[BigInt]) -> Self {
        QPoly::new(
            coeffs
                .iter()
                .map(|c| BigRational::from_integer(c.clone()))
                .collect(),
        )
    }

    pub fn zero() -> Self {
        QPoly::new(vec![BigRational::zero()])
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_zero()
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn leading(&self) -> &BigRational {
        self.coeffs.last().expect("coeffs never empty")
    }

    pub fn is_monic(&self) -> bool {
        !self.is_zero() && self.leading().is_one()
    }

    pub fn eval_rational(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_float(&self, x: &Float) -> Float {
        let prec = x.prec();
        let mut acc = hp::real(prec, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * x + hp::real_from_rational(prec, c);
        }
        acc
    }

    pub fn eval_complex(&self, z: &HpComplex) -> HpComplex {
        let prec = z.prec();
        let mut acc = HpComplex::zero(prec);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(z);
            acc.re += hp::real_from_rational(prec, c);
        }
        acc
    }

    pub fn derivative(&self) -> QPoly {
        if self.degree() == 0 {
            return QPoly::zero();
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c * BigRational::from_integer(BigInt::from(k)))
            .collect();
        QPoly::new(coeffs)
    }

    /// Remainder of `self` divided by `div`. `div` must be non-zero.
    pub fn rem(&self, div: &QPoly) -> QPoly {
        assert!(!div.is_zero(), "division by zero polynomial");
        let mut rem = self.coeffs.clone();
        let dd = div.degree();
        let lead = div.leading().clone();
        while rem.len() > dd && !(rem.len() == 1 && rem[0].is_zero()) {
            let k = rem.len() - 1;
            if rem[k].is_zero() {
                rem.pop();
                continue;
            }
            let factor = &rem[k] / &lead;
            let shift = k - dd;
            for (i, dc) in div.coeffs.iter().enumerate() {
                let delta = &factor * dc;
                rem[shift + i] -= delta;
            }
            rem.pop();
        }
        QPoly::new(rem)
    }

    /// Monic greatest common divisor via the Euclidean algorithm.
    pub fn gcd(&self, other: &QPoly) -> QPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        if a.is_zero() {
            return a;
        }
        let lead = a.leading().clone();
        QPoly::new(a.coeffs.into_iter().map(|c| c / &lead).collect())
    }

    pub fn is_square_free(&self) -> bool {
        self.gcd(&self.derivative()).degree() == 0
    }

    /// 1 + max |a_i| / |a_n|; every complex root has modulus below this.
    pub fn cauchy_root_bound(&self) -> BigRational {
        let lead = self.leading().abs();
        let mut max = BigRational::zero();
        for c in &self.coeffs[..self.coeffs.len() - 1] {
            let v = c.abs() / &lead;
            if v > max {
                max = v;
            }
        }
        max + BigRational::one()
    }
}

fn sign_at(p: &QPoly, x: &BigRational) -> i32 {
    let v = p.eval_rational(x);
    if v.is_zero() {
        0
    } else if v.is_positive() {
        1
    } else {
        -1
    }
}

/// Sturm chain of `p`: p, p', then negated remainders down to a constant.
pub fn sturm_chain(p: &QPoly) -> Vec<QPoly> {
    let mut chain = vec![p.clone(), p.derivative()];
    loop {
        let k = chain.len();
        if chain[k - 1].is_zero() {
            chain.pop();
            break;
        }
        if chain[k - 1].degree() == 0 {
            break;
        }
        let r = chain[k - 2].rem(&chain[k - 1]);
        let negated = QPoly::new(r.coeffs.into_iter().map(|c| -c).collect());
        chain.push(negated);
    }
    chain
}

fn sign_variations(signs: impl Iterator<Item = i32>) -> usize {
    let mut count = 0;
    let mut last = 0;
    for s in signs {
        if s == 0 {
            continue;
        }
        if last != 0 && s != last {
            count += 1;
        }
        last = s;
    }
    count
}

/// Number of distinct real roots of the chain's polynomial in `(a, b]`.
pub fn count_real_roots_in(chain: &[QPoly], a: &BigRational, b: &BigRational) -> usize {
    let va = sign_variations(chain.iter().map(|p| sign_at(p, a)));
    let vb = sign_variations(chain.iter().map(|p| sign_at(p, b)));
    va - vb
}

/// Interior split point at which `p` does not vanish. Among deg+1 distinct
/// candidates at most deg can be roots, so the scan always succeeds.
fn non_root_split(p: &QPoly, a: &BigRational, b: &BigRational) -> BigRational {
    let width = b - a;
    let d = p.degree();
    let den = BigRational::from_integer(BigInt::from(d as i64 + 2));
    for t in 0..=d {
        let m = a + &width * BigRational::from_integer(BigInt::from(t as i64 + 1)) / &den;
        if sign_at(p, &m) != 0 {
            return m;
        }
    }
    unreachable!("square-free polynomial vanished at deg+1 points");
}

/// Disjoint intervals `(a, b)`, each containing exactly one real root,
/// sorted ascending. `p` never vanishes at an endpoint, so the bracketed
/// root is strictly interior and the endpoint signs differ.
pub fn isolate_real_roots(p: &QPoly) -> Vec<(BigRational, BigRational)> {
    assert!(p.is_square_free(), "isolation expects a square-free input");
    let chain = sturm_chain(p);
    let bound = p.cauchy_root_bound();
    let lo = -bound.clone();
    let hi = bound;
    let total = count_real_roots_in(&chain, &lo, &hi);
    let mut out = Vec::with_capacity(total);
    let mut stack = vec![(lo, hi, total)];
    while let Some((a, b, k)) = stack.pop() {
        match k {
            0 => {}
            1 => out.push((a, b)),
            _ => {
                let mid = non_root_split(p, &a, &b);
                let left = count_real_roots_in(&chain, &a, &mid);
                stack.push((mid.clone(), b, k - left));
                stack.push((a, mid, left));
            }
        }
    }
    out.sort_by(|x, y| x.0.cmp(&y.0));
    out
}

/// Exact determinant by fraction-free (Bareiss) elimination.
pub fn bigint_det(matrix: &[Vec<BigInt>]) -> BigInt {
    let n = matrix.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut m: Vec<Vec<BigInt>> = matrix.to_vec();
    let mut sign = 1i32;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let swap = (k + 1..n).find(|&r| !m[r][k].is_zero());
            match swap {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = num / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if sign < 0 {
        -det
    } else {
        det
    }
}

/// Resultant of two integer polynomials via the Sylvester determinant.
pub fn resultant(p: &[BigInt], q: &[BigInt]) -> BigInt {
    let dp = p.len() - 1;
    let dq = q.len() - 1;
    assert!(dp > 0 || dq > 0, "resultant needs a non-constant input");
    let size = dp + dq;
    let mut m = vec![vec![BigInt::zero(); size]; size];
    for row in 0..dq {
        for (k, c) in p.iter().rev().enumerate() {
            m[row][row + k] = c.clone();
        }
    }
    for row in 0..dp {
        for (k, c) in q.iter().rev().enumerate() {
            m[dq + row][row + k] = c.clone();
        }
    }
    bigint_det(&m)
}

/// Discriminant of a monic integer polynomial:
/// (-1)^(n(n-1)/2) * resultant(p, p').
pub fn discriminant(p: &[BigInt]) -> BigInt {
    let n = p.len() - 1;
    assert!(n >= 1, "discriminant needs degree >= 1");
    assert!(p[n].is_one(), "discriminant path expects a monic polynomial");
    if n == 1 {
        return BigInt::one();
    }
    let dp: Vec<BigInt> = p
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| c * BigInt::from(k))
        .collect();
    let res = resultant(p, &dp);
    if (n * (n - 1) / 2) % 2 == 1 {
        -res
    } else {
        res
    }
}

/// Newton refinement of the single root inside `(lo, hi)`.
///
/// Bisects exactly until the bracket is narrow, then iterates Newton at
/// `2 * prec` bits and rounds to `prec`. The bracket must straddle exactly
/// one simple root; an endpoint that is itself a root is returned directly.
pub fn refine_real_root(p: &QPoly, lo: &BigRational, hi: &BigRational, prec: u32) -> Float {
    let two = BigRational::from_integer(BigInt::from(2));
    let mut a = lo.clone();
    let mut b = hi.clone();
    let sa = sign_at(p, &a);
    if sa == 0 {
        return hp::real_from_rational(prec, &a);
    }
    if sign_at(p, &b) == 0 {
        return hp::real_from_rational(prec, &b);
    }
    for _ in 0..64 {
        let mid = (&a + &b) / &two;
        let sm = sign_at(p, &mid);
        if sm == 0 {
            return hp::real_from_rational(prec, &mid);
        }
        if sm == sa {
            a = mid;
        } else {
            b = mid;
        }
    }
    let work = prec * 2 + 16;
    let deriv = p.derivative();
    let mut x = hp::real_from_rational(work, &((&a + &b) / &two));
    for _ in 0..prec.ilog2() + 8 {
        let fx = p.eval_float(&x);
        let dx = deriv.eval_float(&x);
        if dx.is_zero() {
            break;
        }
        let step = fx / dx;
        x -= &step;
    }
    Float::with_val(prec, &x)
}

/// All complex roots of a square-free polynomial by Durand-Kerner at
/// extended precision, Newton-polished per root.
fn durand_kerner(p: &QPoly, prec: u32) -> Vec<HpComplex> {
    let n = p.degree();
    let work = prec * 2 + 32;
    let radius = hp::real_from_rational(work, &p.cauchy_root_bound());
    let mut roots: Vec<HpComplex> = (0..n)
        .map(|k| {
            // Perturbed angle keeps starting points off the real axis.
            let theta = 2.0 * std::f64::consts::PI * (k as f64) / (n as f64) + 0.397;
            let c = HpComplex::from_f64(work, theta.cos(), theta.sin());
            c.scale(&radius)
        })
        .collect();
    let tol = hp::two_pow(work, -((prec as i32) * 2));
    for _ in 0..64 + 8 * n {
        let mut max_step = hp::real(work, 0.0);
        for k in 0..n {
            let num = p.eval_complex(&roots[k]);
            let mut den = HpComplex::from_f64(work, 1.0, 0.0);
            for l in 0..n {
                if l != k {
                    den = den.mul(&roots[k].sub(&roots[l]));
                }
            }
            if den.is_zero() {
                continue;
            }
            let step = num.div(&den);
            let sa = step.abs();
            if sa > max_step {
                max_step = sa;
            }
            roots[k] = roots[k].sub(&step);
        }
        if max_step < tol {
            break;
        }
    }
    let deriv = p.derivative();
    for r in roots.iter_mut() {
        for _ in 0..4 {
            let f = p.eval_complex(r);
            let d = deriv.eval_complex(r);
            if d.is_zero() {
                break;
            }
            *r = r.sub(&f.div(&d));
        }
    }
    roots
        .into_iter()
        .map(|r| HpComplex::new(Float::with_val(prec, &r.re), Float::with_val(prec, &r.im)))
        .collect()
}

/// All roots at `prec` bits: real roots ascending first (count certified by
/// Sturm), then complex roots ordered by (imaginary, real) part.
pub fn all_roots(p: &QPoly, prec: u32) -> Vec<HpComplex> {
    let n = p.degree();
    if n == 1 {
        let root = -(&p.coeffs()[0] / &p.coeffs()[1]);
        return vec![HpComplex::from_real(hp::real_from_rational(prec, &root))];
    }
    let real_intervals = isolate_real_roots(p);
    let real_roots: Vec<Float> = real_intervals
        .iter()
        .map(|(a, b)| refine_real_root(p, a, b, prec))
        .collect();
    let n_complex = n - real_roots.len();
    let mut out: Vec<HpComplex> = real_roots.into_iter().map(HpComplex::from_real).collect();
    if n_complex > 0 {
        let mut candidates = durand_kerner(p, prec);
        // The n_complex candidates farthest from the real axis are the
        // genuinely complex roots; the rest duplicate the certified reals.
        candidates.sort_by(|x, y| {
            let ax = x.im.clone().abs();
            let ay = y.im.clone().abs();
            ay.partial_cmp(&ax).expect("finite imaginary parts")
        });
        let mut complex: Vec<HpComplex> = candidates.into_iter().take(n_complex).collect();
        complex.sort_by(|x, y| {
            (x.im.partial_cmp(&y.im))
                .expect("finite parts")
                .then(x.re.partial_cmp(&y.re).expect("finite parts"))
        });
        out.extend(complex);
    }
    out
}
