//! Ready-made fields and cones used across tests, the self-check suites,
//! and the command line examples.
//!
//! The catalogue is small but spans the shapes the engines distinguish:
//! the rational field (degree 1), two real quadratic fields (degree 2,
//! totally real), and a cubic field with one real and one conjugate pair
//! of complex embeddings.

use crate::cone::Cone;
use crate::field::{AlgebraicInt, NumberField};
use num_bigint::BigInt;
use num_rational::BigRational;

fn int_poly(coeffs: &[i64]) -> Vec<BigInt> {
    coeffs.iter().map(|&c| BigInt::from(c)).collect()
}

fn rational_rows(rows: &[&[(i64, i64)]]) -> Vec<Vec<BigRational>> {
    rows.iter()
        .map(|row| {
            row.iter()
                .map(|&(p, q)| BigRational::new(BigInt::from(p), BigInt::from(q)))
                .collect()
        })
        .collect()
}

fn int_rows(rows: &[&[i64]]) -> Vec<Vec<BigRational>> {
    rows.iter()
        .map(|row| {
            row.iter()
                .map(|&v| BigRational::from(BigInt::from(v)))
                .collect()
        })
        .collect()
}

/// The rational field presented as a degree 1 number field: minimal
/// polynomial x, integral basis (1).
pub fn rational_field(precision: u32) -> NumberField {
    NumberField::new(int_poly(&[0, 1]), int_rows(&[&[1]]), precision)
        .expect("rational fixture is valid")
}

/// The positive ray in the rational field, generated by 1.
pub fn rational_cone(field: &NumberField) -> Cone<'_> {
    Cone::new(field, vec![AlgebraicInt::from_i64s(&[1])]).expect("rational cone is valid")
}

/// Real quadratic field of discriminant 8: x^2 - 2 with basis (1, r),
/// r the positive square root of 2.
pub fn quadratic_field_sqrt2(precision: u32) -> NumberField {
    NumberField::new(int_poly(&[-2, 0, 1]), int_rows(&[&[1, 0], &[0, 1]]), precision)
        .expect("sqrt2 fixture is valid")
}

/// Totally positive simplicial cone in the sqrt2 field with generators
/// 1 and 3 + 2r (a totally positive unit).
pub fn quadratic_cone<'f>(field: &'f NumberField) -> Cone<'f> {
    Cone::new(
        field,
        vec![
            AlgebraicInt::from_i64s(&[1, 0]),
            AlgebraicInt::from_i64s(&[3, 2]),
        ],
    )
    .expect("quadratic cone is valid")
}

/// Real quadratic field of discriminant 5: x^2 - 5 with integral basis
/// (1, (1 + r)/2).
pub fn quadratic_field_sqrt5(precision: u32) -> NumberField {
    NumberField::new(
        int_poly(&[-5, 0, 1]),
        rational_rows(&[&[(1, 1), (0, 1)], &[(1, 2), (1, 2)]]),
        precision,
    )
    .expect("sqrt5 fixture is valid")
}

/// Cubic field x^3 - x - 1 (discriminant -23): one real embedding near
/// 1.3247 and one complex conjugate pair. Power basis (1, t, t^2).
pub fn cubic_field(precision: u32) -> NumberField {
    NumberField::new(
        int_poly(&[-1, -1, 0, 1]),
        int_rows(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]),
        precision,
    )
    .expect("cubic fixture is valid")
}

/// Cone in the cubic field with generators 1, t^2, 1 + t + t^2. All three
/// are positive in the real embedding and have positive real part in the
/// complex pair, so the cone passes validation and supports tail bounds.
pub fn cubic_cone<'f>(field: &'f NumberField) -> Cone<'f> {
    Cone::new(
        field,
        vec![
            AlgebraicInt::from_i64s(&[1, 0, 0]),
            AlgebraicInt::from_i64s(&[0, 0, 1]),
            AlgebraicInt::from_i64s(&[1, 1, 1]),
        ],
    )
    .expect("cubic cone is valid")
}
