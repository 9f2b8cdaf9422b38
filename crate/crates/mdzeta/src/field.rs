//! Number fields with exact integral arithmetic and certified embeddings.
//!
//! A field K of degree n is presented by a monic square-free minimal
//! polynomial for a generator theta and an integral basis mu_1..mu_n given by
//! rational coordinates in the power basis 1, theta, ..., theta^(n-1), with
//! mu_1 = 1. Ring elements carry exact integer coordinates in the integral
//! basis. All structural quantities (regular representations, norms, traces,
//! discriminants) are exact; only the embedding values themselves are floats,
//! certified to satisfy |min_poly(rho_j)| < 2^(-precision/2).
//!
//! Embedding order is fixed once and used by every downstream module: real
//! roots ascending, then complex roots ordered by imaginary part.

use crate::hp::{self, HpComplex};
use crate::poly::{self, QPoly};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rug::Float;

/// Element of the ring generated by the integral basis: exact integer
/// coordinates (a_1,...,a_n) meaning a_1*mu_1 + ... + a_n*mu_n.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AlgebraicInt {
    pub coords: Vec<BigInt>,
}

impl AlgebraicInt {
    pub fn new(coords: Vec<BigInt>) -> Self {
        AlgebraicInt { coords }
    }

    pub fn from_i64s(coords: &[i64]) -> Self {
        AlgebraicInt {
            coords: coords.iter().map(|&c| BigInt::from(c)).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn is_zero_element(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }
}

/// Square integer matrix; row i holds the basis coordinates of gamma*mu_i.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    pub entries: Vec<Vec<BigInt>>,
}

impl IntMatrix {
    pub fn identity(n: usize) -> Self {
        let entries = (0..n)
            .map(|i| {
                (0..n)
                    .map(|k| if i == k { BigInt::one() } else { BigInt::zero() })
                    .collect()
            })
            .collect();
        IntMatrix { entries }
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        let n = self.dim();
        let mut out = vec![vec![BigInt::zero(); n]; n];
        for i in 0..n {
            for k in 0..n {
                let mut acc = BigInt::zero();
                for l in 0..n {
                    acc += &self.entries[i][l] * &other.entries[l][k];
                }
                out[i][k] = acc;
            }
        }
        IntMatrix { entries: out }
    }

    pub fn add(&self, other: &IntMatrix) -> IntMatrix {
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(r, s)| r.iter().zip(s).map(|(a, b)| a + b).collect())
            .collect();
        IntMatrix { entries }
    }

    pub fn det(&self) -> BigInt {
        poly::bigint_det(&self.entries)
    }

    /// Row-vector action v -> v * M, the exponent action used downstream.
    pub fn act_on_row(&self, v: &[BigInt]) -> Vec<BigInt> {
        let n = self.dim();
        (0..n)
            .map(|k| {
                let mut acc = BigInt::zero();
                for (i, vi) in v.iter().enumerate() {
                    acc += vi * &self.entries[i][k];
                }
                acc
            })
            .collect()
    }
}

/// Determinant of the embedding matrix of a generator tuple, with the exact
/// companion data: D = det^2 as an exact rational (an integer for algebraic
/// integers) and its ratio to the discriminant of the field's integral basis.
#[derive(Clone, Debug)]
pub struct EmbeddingDeterminant {
    pub det: HpComplex,
    pub d_value: BigRational,
    pub disc_ratio: BigRational,
}

/// Exact rational matrix inverse by Gauss-Jordan; also returns the
/// determinant. `None` when singular.
fn rational_inverse(m: &[Vec<BigRational>]) -> Option<(Vec<Vec<BigRational>>, BigRational)> {
    let n = m.len();
    let mut a: Vec<Vec<BigRational>> = m.to_vec();
    let mut inv: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|k| {
                    if i == k {
                        BigRational::one()
                    } else {
                        BigRational::zero()
                    }
                })
                .collect()
        })
        .collect();
    let mut det = BigRational::one();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        if pivot != col {
            a.swap(col, pivot);
            inv.swap(col, pivot);
            det = -det;
        }
        let p = a[col][col].clone();
        det *= &p;
        for k in 0..n {
            a[col][k] /= &p;
            inv[col][k] /= &p;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for k in 0..n {
                    let d = &f * &a[col][k];
                    a[r][k] -= d;
                    let d = &f * &inv[col][k];
                    inv[r][k] -= d;
                }
            }
        }
    }
    Some((inv, det))
}

/// Determinant of a small high-precision complex matrix by Gaussian
/// elimination with partial pivoting.
fn complex_det(m: &mut [Vec<HpComplex>], prec: u32) -> HpComplex {
    let n = m.len();
    let mut det = HpComplex::from_f64(prec, 1.0, 0.0);
    for col in 0..n {
        let mut pivot = col;
        let mut best = m[col][col].abs();
        for r in col + 1..n {
            let v = m[r][col].abs();
            if v > best {
                best = v;
                pivot = r;
            }
        }
        if m[pivot][col].is_zero() {
            return HpComplex::zero(prec);
        }
        if pivot != col {
            m.swap(col, pivot);
            det = det.neg();
        }
        det = det.mul(&m[col][col]);
        for r in col + 1..n {
            let f = m[r][col].div(&m[col][col]);
            for k in col..n {
                let sub = f.mul(&m[col][k]);
                m[r][k] = m[r][k].sub(&sub);
            }
        }
    }
    det
}

#[derive(Debug)]
pub struct NumberField {
    min_poly: Vec<BigInt>,
    basis: Vec<Vec<BigRational>>,
    basis_inv: Vec<Vec<BigRational>>,
    basis_det: BigRational,
    precision: u32,
    embeddings: Vec<HpComplex>,
    basis_embeddings: Vec<Vec<HpComplex>>,
    n_real: usize,
    disc_min_poly: BigInt,
}

impl NumberField {
    /// Builds a field from a monic square-free minimal polynomial
    /// (coefficients ascending) and an integral basis whose row i gives
    /// mu_i in the power basis. Embeddings are isolated exactly and then
    /// polished to the requested precision.
    pub fn new(
        min_poly: Vec<BigInt>,
        integral_basis: Vec<Vec<BigRational>>,
        precision: u32,
    ) -> Result<NumberField> {
        if min_poly.len() < 2 || !min_poly.last().expect("non-empty").is_one() {
            return Err(Error::NotMonic);
        }
        let n = min_poly.len() - 1;
        let min_poly_q = QPoly::from_bigint_coeffs(&min_poly);
        if !min_poly_q.is_square_free() {
            return Err(Error::NotSquareFree);
        }
        if integral_basis.len() != n || integral_basis.iter().any(|row| row.len() != n) {
            return Err(Error::BasisSingular);
        }
        let first_ok = integral_basis[0][0].is_one()
            && integral_basis[0][1..].iter().all(Zero::is_zero);
        if !first_ok {
            return Err(Error::FirstBasisElementNotOne);
        }
        let (basis_inv, basis_det) =
            rational_inverse(&integral_basis).ok_or(Error::BasisSingular)?;

        let embeddings = poly::all_roots(&min_poly_q, precision);
        let check_prec = precision * 2;
        let tol = hp::two_pow(check_prec, -((precision as i32) / 2));
        for rho in &embeddings {
            let lifted = HpComplex::new(
                Float::with_val(check_prec, &rho.re),
                Float::with_val(check_prec, &rho.im),
            );
            let resid = min_poly_q.eval_complex(&lifted).abs();
            assert!(
                resid < tol,
                "root certification failed: residual {resid} at precision {precision}"
            );
        }
        let n_real = embeddings.iter().filter(|r| r.im.is_zero()).count();

        let basis_embeddings: Vec<Vec<HpComplex>> = integral_basis
            .iter()
            .map(|row| {
                embeddings
                    .iter()
                    .map(|rho| {
                        // Horner evaluation of mu_i at the root rho.
                        let mut acc = HpComplex::zero(precision);
                        for c in row.iter().rev() {
                            acc = acc.mul(rho);
                            acc.re += hp::real_from_rational(precision, c);
                        }
                        acc
                    })
                    .collect()
            })
            .collect();

        let disc_min_poly = poly::discriminant(&min_poly);
        Ok(NumberField {
            min_poly,
            basis: integral_basis,
            basis_inv,
            basis_det,
            precision,
            embeddings,
            basis_embeddings,
            n_real,
            disc_min_poly,
        })
    }

    pub fn degree(&self) -> usize {
        self.min_poly.len() - 1
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn min_poly(&self) -> &[BigInt] {
        &self.min_poly
    }

    pub fn integral_basis(&self) -> &[Vec<BigRational>] {
        &self.basis
    }

    pub fn embeddings(&self) -> &[HpComplex] {
        &self.embeddings
    }

    pub fn num_real_embeddings(&self) -> usize {
        self.n_real
    }

    pub fn is_totally_real(&self) -> bool {
        self.n_real == self.degree()
    }

    /// Discriminant of the supplied integral basis: det(B)^2 times the
    /// discriminant of the minimal polynomial, exactly.
    pub fn basis_discriminant(&self) -> BigRational {
        let det2 = &self.basis_det * &self.basis_det;
        det2 * BigRational::from_integer(self.disc_min_poly.clone())
    }

    pub fn zero_element(&self) -> AlgebraicInt {
        AlgebraicInt::new(vec![BigInt::zero(); self.degree()])
    }

    pub fn one_element(&self) -> AlgebraicInt {
        let mut coords = vec![BigInt::zero(); self.degree()];
        coords[0] = BigInt::one();
        AlgebraicInt::new(coords)
    }

    fn check_len(&self, a: &AlgebraicInt) -> Result<()> {
        if a.len() != self.degree() {
            return Err(Error::FieldMismatch {
                left: self.degree(),
                right: a.len(),
            });
        }
        Ok(())
    }

    /// Power-basis coordinates of an element (exact).
    fn to_power(&self, a: &AlgebraicInt) -> Vec<BigRational> {
        let n = self.degree();
        let mut out = vec![BigRational::zero(); n];
        for (i, c) in a.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let cr = BigRational::from_integer(c.clone());
            for k in 0..n {
                out[k] += &cr * &self.basis[i][k];
            }
        }
        out
    }

    /// Product of two power-basis vectors, reduced modulo the minimal
    /// polynomial (monic, so the reduction is division-free).
    fn power_mul_mod(&self, a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
        let n = self.degree();
        let mut prod = vec![BigRational::zero(); 2 * n - 1];
        for (i, ai) in a.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (k, bk) in b.iter().enumerate() {
                prod[i + k] += ai * bk;
            }
        }
        for d in (n..2 * n - 1).rev() {
            if prod[d].is_zero() {
                continue;
            }
            let c = std::mem::replace(&mut prod[d], BigRational::zero());
            for (k, mk) in self.min_poly.iter().take(n).enumerate() {
                if !mk.is_zero() {
                    prod[d - n + k] -= &c * BigRational::from_integer(mk.clone());
                }
            }
        }
        prod.truncate(n);
        prod
    }

    /// Basis coordinates of a power-basis vector (exact, possibly
    /// non-integral).
    fn power_to_basis(&self, p: &[BigRational]) -> Vec<BigRational> {
        let n = self.degree();
        (0..n)
            .map(|k| {
                let mut acc = BigRational::zero();
                for (l, pl) in p.iter().enumerate() {
                    if !pl.is_zero() {
                        acc += pl * &self.basis_inv[l][k];
                    }
                }
                acc
            })
            .collect()
    }

    /// The matrix (c_ik) with gamma*mu_i = sum_k c_ik mu_k. Exact; fails
    /// with NonIntegralProduct if the basis is not multiplicatively closed.
    pub fn regular_rep(&self, gamma: &AlgebraicInt) -> Result<IntMatrix> {
        self.check_len(gamma)?;
        let n = self.degree();
        let g = self.to_power(gamma);
        let mut entries = Vec::with_capacity(n);
        for i in 0..n {
            let prod = self.power_mul_mod(&g, &self.basis[i]);
            let coords = self.power_to_basis(&prod);
            let mut row = Vec::with_capacity(n);
            for c in coords {
                if !c.is_integer() {
                    return Err(Error::NonIntegralProduct { row: i });
                }
                row.push(c.to_integer());
            }
            entries.push(row);
        }
        Ok(IntMatrix { entries })
    }

    pub fn add(&self, a: &AlgebraicInt, b: &AlgebraicInt) -> Result<AlgebraicInt> {
        self.check_len(a)?;
        self.check_len(b)?;
        let coords = a
            .coords
            .iter()
            .zip(&b.coords)
            .map(|(x, y)| x + y)
            .collect();
        Ok(AlgebraicInt::new(coords))
    }

    pub fn mul(&self, a: &AlgebraicInt, b: &AlgebraicInt) -> Result<AlgebraicInt> {
        self.check_len(a)?;
        self.check_len(b)?;
        let rep = self.regular_rep(a)?;
        Ok(AlgebraicInt::new(rep.act_on_row(&b.coords)))
    }

    /// Field norm: det of the regular representation. Exact.
    pub fn norm(&self, a: &AlgebraicInt) -> Result<BigInt> {
        Ok(self.regular_rep(a)?.det())
    }

    /// Trace of multiplication by the element with the given power-basis
    /// coordinates, computed on the power basis (no integrality needed).
    fn power_trace(&self, x: &[BigRational]) -> BigRational {
        let n = self.degree();
        let mut theta_c = vec![BigRational::zero(); n];
        theta_c[0] = BigRational::one();
        let mut trace = BigRational::zero();
        for c in 0..n {
            let prod = self.power_mul_mod(x, &theta_c);
            trace += prod[c].clone();
            if c + 1 < n {
                // Advance theta^c -> theta^(c+1) by shift and reduce.
                let mut shifted = vec![BigRational::zero(); n + 1];
                shifted[1..=n].clone_from_slice(&theta_c);
                if !shifted[n].is_zero() {
                    let lead = std::mem::replace(&mut shifted[n], BigRational::zero());
                    for (k, mk) in self.min_poly.iter().take(n).enumerate() {
                        if !mk.is_zero() {
                            shifted[k] -= &lead * BigRational::from_integer(mk.clone());
                        }
                    }
                }
                shifted.truncate(n);
                theta_c = shifted;
            }
        }
        trace
    }

    /// sigma_j(a) at the certified j-th root (j zero-based).
    pub fn embed(&self, a: &AlgebraicInt, j: usize) -> Result<HpComplex> {
        self.check_len(a)?;
        if j >= self.degree() {
            return Err(Error::IndexOutOfRange {
                index: j,
                degree: self.degree(),
            });
        }
        let mut acc = HpComplex::zero(self.precision);
        for (i, c) in a.coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let cf = hp::real_from_bigint(self.precision, c);
            acc = acc.add(&self.basis_embeddings[i][j].scale(&cf));
        }
        Ok(acc)
    }

    /// det(sigma_j(e_i)) for an n-tuple of ring elements, with the exact
    /// square D = det^2 (via the trace form) and the exact ratio of D to the
    /// discriminant of the integral basis.
    pub fn embedding_det(&self, e: &[AlgebraicInt]) -> Result<EmbeddingDeterminant> {
        let n = self.degree();
        if e.len() != n {
            return Err(Error::WrongTupleLength {
                expected: n,
                got: e.len(),
            });
        }
        for el in e {
            self.check_len(el)?;
        }
        let mut m: Vec<Vec<HpComplex>> = e
            .iter()
            .map(|el| (0..n).map(|j| self.embed(el, j).expect("checked")).collect())
            .collect();
        let det = complex_det(&mut m, self.precision);

        // D = det(Tr(e_i * e_k)) exactly: the Gram matrix of the trace form.
        let powers: Vec<Vec<BigRational>> = e.iter().map(|el| self.to_power(el)).collect();
        let gram: Vec<Vec<BigRational>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|k| {
                        let prod = self.power_mul_mod(&powers[i], &powers[k]);
                        self.power_trace(&prod)
                    })
                    .collect()
            })
            .collect();
        let d_value = rational_det(&gram);
        let disc = self.basis_discriminant();
        let disc_ratio = &d_value / &disc;
        Ok(EmbeddingDeterminant {
            det,
            d_value,
            disc_ratio,
        })
    }
}

/// Exact determinant of a rational matrix: clear denominators per row, then
/// run fraction-free elimination over the integers.
pub fn rational_det(m: &[Vec<BigRational>]) -> BigRational {
    let n = m.len();
    if n == 0 {
        return BigRational::one();
    }
    let mut scale = BigInt::one();
    let cleared: Vec<Vec<BigInt>> = m
        .iter()
        .map(|row| {
            let mut lcm = BigInt::one();
            for x in row {
                lcm = num_integer::lcm(lcm, x.denom().clone());
            }
            scale *= &lcm;
            row.iter()
                .map(|x| x.numer() * (&lcm / x.denom()))
                .collect()
        })
        .collect();
    BigRational::new(poly::bigint_det(&cleared), scale)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn identity_basis(n: usize) -> Vec<Vec<BigRational>> {
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|k| if i == k { rat(1, 1) } else { rat(0, 1) })
                    .collect()
            })
            .collect()
    }

    fn q_sqrt2() -> NumberField {
        NumberField::new(ints(&[-2, 0, 1]), identity_basis(2), 128).expect("valid field")
    }

    fn q_field() -> NumberField {
        NumberField::new(ints(&[-1, 1]), identity_basis(1), 64).expect("valid field")
    }

    fn cubic_field() -> NumberField {
        NumberField::new(ints(&[-1, -1, 0, 1]), identity_basis(3), 128).expect("valid field")
    }

    #[test]
    fn construction_validates_inputs() {
        assert_eq!(
            NumberField::new(ints(&[-2, 0, 2]), identity_basis(2), 64).unwrap_err(),
            Error::NotMonic
        );
        assert_eq!(
            NumberField::new(ints(&[1, -2, 1]), identity_basis(2), 64).unwrap_err(),
            Error::NotSquareFree
        );
        let dup = vec![vec![rat(1, 1), rat(0, 1)], vec![rat(1, 1), rat(0, 1)]];
        assert_eq!(
            NumberField::new(ints(&[-2, 0, 1]), dup, 64).unwrap_err(),
            Error::BasisSingular
        );
        let swapped = vec![vec![rat(0, 1), rat(1, 1)], vec![rat(1, 1), rat(0, 1)]];
        assert_eq!(
            NumberField::new(ints(&[-2, 0, 1]), swapped, 64).unwrap_err(),
            Error::FirstBasisElementNotOne
        );
    }

    #[test]
    fn embeddings_are_ordered_and_certified() {
        let nf = q_sqrt2();
        assert_eq!(nf.num_real_embeddings(), 2);
        let r0 = nf.embeddings()[0].re.to_f64();
        let r1 = nf.embeddings()[1].re.to_f64();
        assert!((r0 + std::f64::consts::SQRT_2).abs() < 1e-30);
        assert!((r1 - std::f64::consts::SQRT_2).abs() < 1e-30);

        let cubic = cubic_field();
        assert_eq!(cubic.num_real_embeddings(), 1);
        assert!(!cubic.is_totally_real());
        assert!(cubic.embeddings()[1].im.to_f64() < 0.0);
        assert!(cubic.embeddings()[2].im.to_f64() > 0.0);
    }

    #[test]
    fn regular_rep_matches_hand_values() {
        let nf = q_sqrt2();
        let one = nf.one_element();
        assert_eq!(nf.regular_rep(&one).unwrap(), IntMatrix::identity(2));
        let sqrt2 = AlgebraicInt::from_i64s(&[0, 1]);
        assert_eq!(
            nf.regular_rep(&sqrt2).unwrap().entries,
            vec![ints(&[0, 1]), ints(&[2, 0])]
        );
        let unit = AlgebraicInt::from_i64s(&[1, 1]);
        assert_eq!(
            nf.regular_rep(&unit).unwrap().entries,
            vec![ints(&[1, 1]), ints(&[2, 1])]
        );
    }

    #[test]
    fn ring_ops_are_exact() {
        let nf = q_sqrt2();
        let u = AlgebraicInt::from_i64s(&[1, 1]);
        let sum = nf.add(&u, &u).unwrap();
        assert_eq!(sum, AlgebraicInt::from_i64s(&[2, 2]));
        let v = AlgebraicInt::from_i64s(&[1, -1]);
        let prod = nf.mul(&u, &v).unwrap();
        assert_eq!(prod, AlgebraicInt::from_i64s(&[-1, 0]));
        let z = nf.mul(&u, &nf.zero_element()).unwrap();
        assert!(z.is_zero_element());
        let bad = AlgebraicInt::from_i64s(&[1, 2, 3]);
        assert_eq!(
            nf.add(&u, &bad).unwrap_err(),
            Error::FieldMismatch { left: 2, right: 3 }
        );
    }

    #[test]
    fn norms_match_hand_values() {
        let nf = q_sqrt2();
        assert_eq!(
            nf.norm(&AlgebraicInt::from_i64s(&[3, 2])).unwrap(),
            BigInt::from(1)
        );
        assert_eq!(
            nf.norm(&AlgebraicInt::from_i64s(&[1, 1])).unwrap(),
            BigInt::from(-1)
        );
        let q = q_field();
        assert_eq!(
            q.norm(&AlgebraicInt::from_i64s(&[5])).unwrap(),
            BigInt::from(5)
        );
    }

    #[test]
    fn embed_matches_hand_values() {
        let nf = q_sqrt2();
        let a = AlgebraicInt::from_i64s(&[3, 2]);
        let lo = nf.embed(&a, 0).unwrap().re.to_f64();
        let hi = nf.embed(&a, 1).unwrap().re.to_f64();
        assert!((lo - 0.17157287525381).abs() < 1e-12);
        assert!((hi - 5.82842712474619).abs() < 1e-12);
        assert_eq!(
            nf.embed(&a, 2).unwrap_err(),
            Error::IndexOutOfRange { index: 2, degree: 2 }
        );
        let q = q_field();
        let seven = q.embed(&AlgebraicInt::from_i64s(&[7]), 0).unwrap();
        assert!((seven.re.to_f64() - 7.0).abs() < 1e-15);
    }

    #[test]
    fn embedding_det_and_discriminant_data() {
        let nf = q_sqrt2();
        // Power basis tuple (1, sqrt2): det = 2*sqrt2 with ascending root
        // order, D = 8, and D equals the basis discriminant.
        let tuple = vec![AlgebraicInt::from_i64s(&[1, 0]), AlgebraicInt::from_i64s(&[0, 1])];
        let ed = nf.embedding_det(&tuple).unwrap();
        assert!((ed.det.re.to_f64() - 2.0 * std::f64::consts::SQRT_2).abs() < 1e-25);
        assert_eq!(ed.d_value, rat(8, 1));
        assert_eq!(ed.disc_ratio, rat(1, 1));

        // Cone basis (1, 3+2*sqrt2): det = 4*sqrt2, D = 32, ratio 4.
        let cone = vec![AlgebraicInt::from_i64s(&[1, 0]), AlgebraicInt::from_i64s(&[3, 2])];
        let ed = nf.embedding_det(&cone).unwrap();
        assert!((ed.det.re.to_f64() - 4.0 * std::f64::consts::SQRT_2).abs() < 1e-25);
        assert_eq!(ed.d_value, rat(32, 1));
        assert_eq!(ed.disc_ratio, rat(4, 1));
        // The float det squares to the exact D.
        let d2 = ed.det.mul(&ed.det).re.to_f64();
        assert!((d2 - 32.0).abs() < 1e-25);

        let q = q_field();
        let ed = q.embedding_det(&[AlgebraicInt::from_i64s(&[1])]).unwrap();
        assert!((ed.det.re.to_f64() - 1.0).abs() < 1e-15);
        assert_eq!(ed.d_value, rat(1, 1));

        assert_eq!(
            nf.embedding_det(&tuple[..1]).unwrap_err(),
            Error::WrongTupleLength { expected: 2, got: 1 }
        );
    }

    #[test]
    fn non_maximal_basis_discriminant_scaling() {
        // Q(sqrt5) with the maximal order basis (1, (1+theta)/2):
        // disc(min_poly) = 20, det(B) = 1/2, so the basis discriminant is 5.
        let basis = vec![vec![rat(1, 1), rat(0, 1)], vec![rat(1, 2), rat(1, 2)]];
        let nf = NumberField::new(ints(&[-5, 0, 1]), basis, 128).expect("valid field");
        assert_eq!(nf.basis_discriminant(), rat(5, 1));
        let tuple = vec![AlgebraicInt::from_i64s(&[1, 0]), AlgebraicInt::from_i64s(&[0, 1])];
        let ed = nf.embedding_det(&tuple).unwrap();
        assert_eq!(ed.d_value, rat(5, 1));
        assert_eq!(ed.disc_ratio, rat(1, 1));
    }

    #[test]
    fn non_order_basis_reports_offending_row() {
        // mu_2 = theta/2 over x^2 - 2: mu_2^2 = 1/2, outside the span.
        let basis = vec![vec![rat(1, 1), rat(0, 1)], vec![rat(0, 1), rat(1, 2)]];
        let nf = NumberField::new(ints(&[-2, 0, 1]), basis, 64).expect("constructs fine");
        let mu2 = AlgebraicInt::from_i64s(&[0, 1]);
        assert_eq!(
            nf.regular_rep(&mu2).unwrap_err(),
            Error::NonIntegralProduct { row: 1 }
        );
    }

    #[test]
    fn regular_rep_is_a_ring_homomorphism() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_f1e1d);
        for nf in [q_sqrt2(), cubic_field()] {
            let n = nf.degree();
            for _ in 0..200 {
                let a = AlgebraicInt::new(
                    (0..n).map(|_| BigInt::from(rng.random_range(-10..=10i64))).collect(),
                );
                let b = AlgebraicInt::new(
                    (0..n).map(|_| BigInt::from(rng.random_range(-10..=10i64))).collect(),
                );
                let ra = nf.regular_rep(&a).unwrap();
                let rb = nf.regular_rep(&b).unwrap();
                let sum = nf.add(&a, &b).unwrap();
                assert_eq!(nf.regular_rep(&sum).unwrap(), ra.add(&rb));
                let prod = nf.mul(&a, &b).unwrap();
                assert_eq!(nf.regular_rep(&prod).unwrap(), ra.mul(&rb));
            }
        }
    }

    #[test]
    fn exact_norm_agrees_with_embedding_product() {
        let mut rng = ChaCha8Rng::seed_from_u64(0xca11_ab1e);
        for nf in [q_field(), q_sqrt2(), cubic_field()] {
            let n = nf.degree();
            let tol = 2f64.powi(-(nf.precision() as i32) / 4);
            for _ in 0..100 {
                let a = AlgebraicInt::new(
                    (0..n).map(|_| BigInt::from(rng.random_range(-10..=10i64))).collect(),
                );
                let exact = nf.norm(&a).unwrap();
                let mut prod = HpComplex::from_f64(nf.precision(), 1.0, 0.0);
                for j in 0..n {
                    prod = prod.mul(&nf.embed(&a, j).unwrap());
                }
                let exact_f = hp::real_from_bigint(nf.precision(), &exact);
                let scale = exact_f.to_f64().abs().max(1.0);
                let diff = prod.sub(&HpComplex::from_real(exact_f)).abs().to_f64();
                assert!(diff < tol * scale, "norm drift {diff} vs tol {tol}");
            }
        }
    }

    #[test]
    fn embed_is_additive_at_working_precision() {
        let mut rng = ChaCha8Rng::seed_from_u64(0xadd_111);
        let nf = q_sqrt2();
        for _ in 0..50 {
            let a = AlgebraicInt::from_i64s(&[rng.random_range(-50..=50), rng.random_range(-50..=50)]);
            let b = AlgebraicInt::from_i64s(&[rng.random_range(-50..=50), rng.random_range(-50..=50)]);
            let sum = nf.add(&a, &b).unwrap();
            for j in 0..2 {
                let lhs = nf.embed(&sum, j).unwrap();
                let rhs = nf.embed(&a, j).unwrap().add(&nf.embed(&b, j).unwrap());
                let diff = lhs.sub(&rhs).abs().to_f64();
                assert!(diff < 2f64.powi(-120), "additivity drift {diff}");
            }
        }
    }
}
