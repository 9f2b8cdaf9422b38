//! Simplicial cones C = N{e_1,...,e_n} and their generating function f_0.
//!
//! A cone is spanned by n linearly independent, totally nonnegative ring
//! elements; its members are sum a_i e_i over positive integers a_i (the
//! index set always starts at 1, never 0, so every member is nonzero). The
//! generating function
//!
//! ```text
//! f_0(C; t) = sum_{alpha in C} exp(-sum_j t_j sigma_j(alpha))
//! ```
//!
//! collapses to a product of n geometric series because the exponent is
//! linear in the coefficients a_i. Both forms are implemented; the series
//! form carries a rigorous tail bound and exists to cross-check the product.

use crate::field::{AlgebraicInt, EmbeddingDeterminant, NumberField};
use crate::hp::{self, HpComplex};
use crate::{Error, Result};
use num_bigint::BigInt;
use num_traits::Zero;
use rug::ops::Pow;
use rug::Float;

#[derive(Debug)]
pub struct Cone<'f> {
    field: &'f NumberField,
    generators: Vec<AlgebraicInt>,
    /// Entry [i][j] = sigma_j(e_i) at field precision.
    embedding_matrix: Vec<Vec<HpComplex>>,
    /// det(sigma_j(e_i)) plus its exact square and discriminant ratio.
    embedding_det: EmbeddingDeterminant,
}

impl<'f> Cone<'f> {
    /// Validates generators: exactly n of them, linearly independent over Q
    /// (exact rank check), and Re(sigma_j(e_i)) >= 0 everywhere, strictly
    /// positive under real embeddings. The embedding matrix and its
    /// determinant are cached for the quadrature and catalog layers.
    pub fn new(field: &'f NumberField, generators: Vec<AlgebraicInt>) -> Result<Cone<'f>> {
        let n = field.degree();
        if generators.len() != n {
            return Err(Error::WrongTupleLength {
                expected: n,
                got: generators.len(),
            });
        }
        let coord_rows: Vec<Vec<BigInt>> = generators.iter().map(|g| g.coords.clone()).collect();
        if coord_rows.iter().any(|r| r.len() != n) {
            return Err(Error::FieldMismatch {
                left: n,
                right: coord_rows.iter().map(Vec::len).find(|&l| l != n).unwrap_or(0),
            });
        }
        if crate::poly::bigint_det(&coord_rows).is_zero() {
            return Err(Error::NotLinearlyIndependent);
        }

        let mut embedding_matrix = Vec::with_capacity(n);
        let complex_slack = hp::two_pow(field.precision(), -((field.precision() as i32) / 2));
        for (i, g) in generators.iter().enumerate() {
            let mut row = Vec::with_capacity(n);
            for j in 0..n {
                let v = field.embed(g, j)?;
                let real_embedding = v.im.is_zero();
                let bad = if real_embedding {
                    // Strict positivity: required for f_0 convergence.
                    !v.re.is_sign_positive() || v.re.is_zero()
                } else {
                    // Complex embeddings only need Re >= 0; allow a certified
                    // rounding margin around zero.
                    v.re < -complex_slack.clone()
                };
                if bad {
                    return Err(Error::NegativeEmbedding {
                        generator: i,
                        embedding: j,
                    });
                }
                row.push(v);
            }
            embedding_matrix.push(row);
        }
        let embedding_det = field.embedding_det(&generators)?;
        Ok(Cone {
            field,
            generators,
            embedding_matrix,
            embedding_det,
        })
    }

    pub fn field(&self) -> &'f NumberField {
        self.field
    }

    pub fn degree(&self) -> usize {
        self.field.degree()
    }

    pub fn generators(&self) -> &[AlgebraicInt] {
        &self.generators
    }

    pub fn embedding_matrix(&self) -> &[Vec<HpComplex>] {
        &self.embedding_matrix
    }

    pub fn embedding_det(&self) -> &EmbeddingDeterminant {
        &self.embedding_det
    }

    /// The embedding matrix as f64 real parts, entry [i][j]. Only meaningful
    /// for totally real fields; the fast series/quadrature engines use it.
    pub(crate) fn embedding_matrix_f64(&self) -> Vec<Vec<f64>> {
        self.embedding_matrix
            .iter()
            .map(|row| row.iter().map(|v| v.re.to_f64()).collect())
            .collect()
    }

    /// The cone member with coefficient vector a (exact coordinates).
    pub fn member(&self, a: &[u64]) -> AlgebraicInt {
        let n = self.degree();
        let mut coords = vec![BigInt::zero(); n];
        for (ai, g) in a.iter().zip(&self.generators) {
            for (c, gc) in coords.iter_mut().zip(&g.coords) {
                *c += gc * BigInt::from(*ai);
            }
        }
        AlgebraicInt::new(coords)
    }

    /// All members with coefficients in the box 1 <= a_i <= bound, in
    /// lexicographic coefficient order. Exactly bound^n items.
    pub fn enumerate(&self, bound: u64) -> ConeIter<'_, 'f> {
        ConeIter {
            cone: self,
            next: if bound >= 1 { Some(vec![1; self.degree()]) } else { None },
            bound,
        }
    }

    /// The exponential rates lambda_i = sum_j t_j sigma_j(e_i) for a real
    /// argument vector t. Errors unless every rate is strictly positive,
    /// which also requires a totally real field.
    pub(crate) fn rates(&self, t: &[Float]) -> Result<Vec<Float>> {
        let n = self.degree();
        if t.len() != n {
            return Err(Error::WrongTupleLength {
                expected: n,
                got: t.len(),
            });
        }
        if !self.field.is_totally_real() {
            return Err(Error::DomainError {
                detail: "f_0 needs a totally real field for a real exponent sum".into(),
            });
        }
        let prec = self.field.precision();
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let mut acc = hp::real(prec, 0.0);
            for (j, tj) in t.iter().enumerate() {
                acc += Float::with_val(prec, tj) * &self.embedding_matrix[i][j].re;
            }
            if !acc.is_sign_positive() || acc.is_zero() {
                return Err(Error::DomainError {
                    detail: format!("exponent rate for generator {i} is not positive"),
                });
            }
            out.push(acc);
        }
        Ok(out)
    }

    /// Closed form of f_0: product over generators of 1/(exp(lambda_i) - 1),
    /// which equals exp(-lambda_i)/(1 - exp(-lambda_i)) without cancellation.
    pub fn f0_closed(&self, t: &[Float]) -> Result<Float> {
        let prec = self.field.precision();
        let mut prod = hp::real(prec, 1.0);
        for lambda in self.rates(t)? {
            prod /= lambda.exp_m1();
        }
        Ok(prod)
    }

    /// Truncated series for f_0 over the coefficient box 1 <= a_i <= bound,
    /// with a rigorous tail bound: the mass outside the box is at most
    /// sum_i exp(-(bound+1) lambda_i)/(1-exp(-lambda_i)) *
    /// prod_{k != i} exp(-lambda_k)/(1-exp(-lambda_k)),
    /// one slab per coordinate that can exceed the bound.
    pub fn f0_series(&self, t: &[Float], bound: u64) -> Result<(Float, Float)> {
        let rates = self.rates(t)?;
        let prec = self.field.precision();
        let n = self.degree();
        // Per-generator geometric pieces e^{-a lambda_i}, a = 1..bound.
        // The box sum factors as a product of finite geometric sums.
        let mut value = hp::real(prec, 1.0);
        for lambda in &rates {
            let mut geo = hp::real(prec, 0.0);
            let q = (-Float::with_val(prec, lambda)).exp();
            let mut term = q.clone();
            for _ in 0..bound {
                geo += &term;
                term *= &q;
            }
            value *= geo;
        }
        let mut tail = hp::real(prec, 0.0);
        for i in 0..n {
            let mut slab = hp::real(prec, 1.0);
            for (k, lambda) in rates.iter().enumerate() {
                let e = (-Float::with_val(prec, lambda)).exp();
                let denom = hp::real(prec, 1.0) - &e;
                if k == i {
                    let head = e.pow((bound + 1) as u32);
                    slab *= head / denom;
                } else {
                    slab *= e / denom;
                }
            }
            tail += slab;
        }
        Ok((value, tail))
    }
}

pub struct ConeIter<'c, 'f> {
    cone: &'c Cone<'f>,
    next: Option<Vec<u64>>,
    bound: u64,
}

impl Iterator for ConeIter<'_, '_> {
    type Item = (Vec<u64>, AlgebraicInt);

    fn next(&mut self) -> Option<Self::Item> {
        let current = self.next.take()?;
        let element = self.cone.member(&current);
        // Odometer advance in lexicographic order.
        let mut following = current.clone();
        for pos in (0..following.len()).rev() {
            if following[pos] < self.bound {
                following[pos] += 1;
                self.next = Some(following);
                break;
            }
            following[pos] = 1;
        }
        Some((current, element))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::collections::HashSet;

    fn identity_basis(n: usize) -> Vec<Vec<BigRational>> {
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|k| BigRational::from_integer(BigInt::from((i == k) as i64)))
                    .collect()
            })
            .collect()
    }

    fn q_field() -> NumberField {
        NumberField::new(vec![BigInt::from(-1), BigInt::from(1)], identity_basis(1), 128)
            .expect("valid")
    }

    fn q_sqrt2() -> NumberField {
        let mp = vec![BigInt::from(-2), BigInt::from(0), BigInt::from(1)];
        NumberField::new(mp, identity_basis(2), 128).expect("valid")
    }

    fn std_cone(nf: &NumberField) -> Cone<'_> {
        Cone::new(
            nf,
            vec![AlgebraicInt::from_i64s(&[1, 0]), AlgebraicInt::from_i64s(&[3, 2])],
        )
        .expect("valid cone")
    }

    #[test]
    fn validation_accepts_and_rejects() {
        let nf = q_sqrt2();
        let cone = std_cone(&nf);
        for row in cone.embedding_matrix() {
            for v in row {
                assert!(v.re.to_f64() > 0.0);
            }
        }

        // 1 + sqrt2 is negative under the embedding sending sqrt2 to -sqrt2,
        // i.e. embedding index 0 in ascending root order.
        let bad = Cone::new(
            &nf,
            vec![AlgebraicInt::from_i64s(&[1, 0]), AlgebraicInt::from_i64s(&[1, 1])],
        );
        assert_eq!(
            bad.unwrap_err(),
            Error::NegativeEmbedding { generator: 1, embedding: 0 }
        );

        let dep = Cone::new(
            &nf,
            vec![AlgebraicInt::from_i64s(&[1, 0]), AlgebraicInt::from_i64s(&[2, 0])],
        );
        assert_eq!(dep.unwrap_err(), Error::NotLinearlyIndependent);

        let q = q_field();
        let unit = Cone::new(&q, vec![AlgebraicInt::from_i64s(&[1])]).expect("valid");
        assert_eq!(unit.degree(), 1);
    }

    #[test]
    fn cached_determinant_matches_field_data() {
        let nf = q_sqrt2();
        let cone = std_cone(&nf);
        let ed = cone.embedding_det();
        assert!((ed.det.re.to_f64() - 4.0 * std::f64::consts::SQRT_2).abs() < 1e-25);
        assert_eq!(ed.d_value, BigRational::from_integer(BigInt::from(32)));
        assert_eq!(ed.disc_ratio, BigRational::from_integer(BigInt::from(4)));
    }

    #[test]
    fn enumeration_is_lexicographic_and_complete() {
        let nf = q_sqrt2();
        let cone = std_cone(&nf);
        let items: Vec<(Vec<u64>, AlgebraicInt)> = cone.enumerate(2).collect();
        assert_eq!(items.len(), 4);
        let coeffs: Vec<Vec<u64>> = items.iter().map(|(a, _)| a.clone()).collect();
        assert_eq!(coeffs, vec![vec![1, 1], vec![1, 2], vec![2, 1], vec![2, 2]]);
        assert_eq!(items[0].1, AlgebraicInt::from_i64s(&[4, 2]));
        assert_eq!(items[1].1, AlgebraicInt::from_i64s(&[7, 4]));

        let q = q_field();
        let unit = Cone::new(&q, vec![AlgebraicInt::from_i64s(&[1])]).unwrap();
        let members: Vec<BigInt> =
            unit.enumerate(3).map(|(_, el)| el.coords[0].clone()).collect();
        assert_eq!(members, vec![BigInt::from(1), BigInt::from(2), BigInt::from(3)]);

        // Completeness at a larger bound: count and uniqueness.
        let all: Vec<Vec<u64>> = cone.enumerate(5).map(|(a, _)| a).collect();
        assert_eq!(all.len(), 25);
        let distinct: HashSet<Vec<u64>> = all.into_iter().collect();
        assert_eq!(distinct.len(), 25);
    }

    #[test]
    fn f0_closed_matches_hand_values() {
        let q = q_field();
        let unit = Cone::new(&q, vec![AlgebraicInt::from_i64s(&[1])]).unwrap();
        let t = vec![hp::real(128, 2.0).ln()];
        let v = unit.f0_closed(&t).unwrap();
        assert!((v - 1u32).abs().to_f64() < 1e-35);
        let t3 = vec![hp::real(128, 3.0).ln()];
        let v3 = unit.f0_closed(&t3).unwrap();
        assert!((v3 - hp::real(128, 0.5)).abs().to_f64() < 1e-35);
    }

    #[test]
    fn f0_series_matches_closed_form_within_tail() {
        let q = q_field();
        let unit = Cone::new(&q, vec![AlgebraicInt::from_i64s(&[1])]).unwrap();
        let t = vec![hp::real(128, 2.0).ln()];
        let (v, tail) = unit.f0_series(&t, 20).unwrap();
        // Finite geometric sum: 1 - 2^-20.
        assert!((v.to_f64() - (1.0 - 2f64.powi(-20))).abs() < 1e-25);
        assert!(tail.to_f64() <= 2f64.powi(-20) * 1.0001);
        let closed = unit.f0_closed(&t).unwrap();
        let diff = (closed - v).abs().to_f64();
        assert!(diff <= tail.to_f64());

        let nf = q_sqrt2();
        let cone = std_cone(&nf);
        let mut rng = ChaCha8Rng::seed_from_u64(0xf0f0);
        for _ in 0..50 {
            let t: Vec<Float> =
                (0..2).map(|_| hp::real(128, rng.random_range(0.5..3.0))).collect();
            let (v, tail) = cone.f0_series(&t, 60).unwrap();
            assert!(tail.to_f64() < 1e-10, "tail too big: {}", tail.to_f64());
            let closed = cone.f0_closed(&t).unwrap();
            // The proven tail can sit far below the 128-bit rounding floor
            // of the two evaluations, so allow that rounding as well.
            let cushion = closed.to_f64().abs().max(1e-300) * 2f64.powi(-100);
            let diff = (closed - v).abs().to_f64();
            assert!(
                diff <= tail.to_f64() + cushion,
                "diff {diff} above tail bound"
            );
        }
    }

    #[test]
    fn f0_is_monotone_decreasing_in_each_coordinate() {
        let nf = q_sqrt2();
        let cone = std_cone(&nf);
        let mut rng = ChaCha8Rng::seed_from_u64(0x6010);
        for _ in 0..20 {
            let base: Vec<f64> = (0..2).map(|_| rng.random_range(0.5..3.0)).collect();
            let t: Vec<Float> = base.iter().map(|&x| hp::real(128, x)).collect();
            let v0 = cone.f0_closed(&t).unwrap().to_f64();
            for j in 0..2 {
                let mut bumped = base.clone();
                bumped[j] += 0.125;
                let tb: Vec<Float> = bumped.iter().map(|&x| hp::real(128, x)).collect();
                let v1 = cone.f0_closed(&tb).unwrap().to_f64();
                assert!(v1 < v0, "f0 failed to decrease in coordinate {j}");
            }
        }
    }

    #[test]
    fn domain_errors_on_nonpositive_rates() {
        let q = q_field();
        let unit = Cone::new(&q, vec![AlgebraicInt::from_i64s(&[1])]).unwrap();
        let t = vec![hp::real(128, 0.0)];
        assert!(matches!(unit.f0_closed(&t), Err(Error::DomainError { .. })));
    }

    #[test]
    fn embedding_sums_are_additive_for_cone_members() {
        let nf = q_sqrt2();
        let cone = std_cone(&nf);
        let mut rng = ChaCha8Rng::seed_from_u64(0x5a5a);
        let members: Vec<AlgebraicInt> = cone.enumerate(4).map(|(_, el)| el).collect();
        for _ in 0..40 {
            let a = &members[rng.random_range(0..members.len())];
            let b = &members[rng.random_range(0..members.len())];
            let sum = nf.add(a, b).unwrap();
            for j in 0..2 {
                let lhs = nf.embed(&sum, j).unwrap();
                let rhs = nf.embed(a, j).unwrap().add(&nf.embed(b, j).unwrap());
                assert!(lhs.sub(&rhs).abs().to_f64() < 2f64.powi(-120));
            }
        }
    }
}
