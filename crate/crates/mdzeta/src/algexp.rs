//! The algebraic-exponent calculus on monomials.
//!
//! A ring element gamma acts on a monomial y_1^{v_1} ... y_n^{v_n} through
//! its regular representation C = (c_ik): the exponent vector maps to v * C
//! (row-vector convention), so the basis monomial y_i goes to
//! prod_k y_k^{c_ik}. Intuitively y_i stands for exp(-sigma(mu_i) t) and the
//! action realizes raising to the power gamma; the composition law
//! f^beta(f^alpha(y)) = f^{alpha*beta}(y) is exact at the integer-matrix
//! level and is the main property the tests pin down.

use crate::field::{AlgebraicInt, NumberField};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_traits::Zero;
use rug::Float;

/// Monomial in n positional variables with integer (possibly negative)
/// exponents.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Monomial {
    pub exponents: Vec<BigInt>,
}

impl Monomial {
    pub fn new(exponents: Vec<BigInt>) -> Self {
        Monomial { exponents }
    }

    pub fn from_i64s(exponents: &[i64]) -> Self {
        Monomial {
            exponents: exponents.iter().map(|&e| BigInt::from(e)).collect(),
        }
    }

    /// The basis monomial y_i (zero-based index) in n variables.
    pub fn basis(n: usize, i: usize) -> Self {
        let mut exponents = vec![BigInt::zero(); n];
        exponents[i] += 1;
        Monomial { exponents }
    }

    /// Monomial product: exponent vectors add.
    pub fn product(&self, other: &Monomial) -> Monomial {
        Monomial {
            exponents: self
                .exponents
                .iter()
                .zip(&other.exponents)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

/// Applies the exponent action of gamma: the exponent vector is multiplied
/// on the right by regular_rep(gamma). Never inverts, so arbitrary (not just
/// unit) gamma are valid.
pub fn alg_pow(nf: &NumberField, gamma: &AlgebraicInt, mon: &Monomial) -> Result<Monomial> {
    if mon.exponents.len() != nf.degree() {
        return Err(Error::FieldMismatch {
            left: nf.degree(),
            right: mon.exponents.len(),
        });
    }
    let rep = nf.regular_rep(gamma)?;
    Ok(Monomial::new(rep.act_on_row(&mon.exponents)))
}

/// Evaluates prod_k point_k^{v_k} at strictly positive coordinates.
/// Computed as exp(sum v_k ln point_k) with 32 guard bits, so the result is
/// correct to within an ulp or two at the points' precision.
pub fn monomial_eval(mon: &Monomial, point: &[Float]) -> Result<Float> {
    for (index, x) in point.iter().enumerate() {
        if !(x.is_finite() && x.is_sign_positive() && !x.is_zero()) {
            return Err(Error::NonPositivePoint { index });
        }
    }
    let prec = point.first().map_or(64, |f| f.prec());
    let work = prec + 32;
    let mut log_sum = Float::with_val(work, 0);
    for (v, x) in mon.exponents.iter().zip(point) {
        if v.is_zero() {
            continue;
        }
        let lx = Float::with_val(work, x).ln();
        log_sum += crate::hp::real_from_bigint(work, v) * lx;
    }
    Ok(Float::with_val(prec, log_sum.exp()))
}
