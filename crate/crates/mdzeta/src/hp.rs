//! High-precision scalars on top of MPFR floats.
//!
//! Exact data (coordinates, norms, discriminants) lives on `num-bigint` and
//! `num-rational` types; this module covers everything transcendental. A
//! working precision in bits travels with each value, set per number field
//! (default 128). Complex values are plain (re, im) pairs of floats: the
//! complex needs of the crate are root finding and small determinants, which
//! do not justify MPC bindings.

use num_bigint::BigInt;
use num_rational::BigRational;
use rug::Float;

/// Default working precision in bits.
pub const DEFAULT_PRECISION: u32 = 128;

/// New float at `prec` bits from an `f64`.
pub fn real(prec: u32, x: f64) -> Float {
    Float::with_val(prec, x)
}

/// New float at `prec` bits from an exact integer.
pub fn real_from_bigint(prec: u32, x: &BigInt) -> Float {
    let parsed = Float::parse(x.to_string()).expect("BigInt decimal form is a valid float literal");
    Float::with_val(prec, parsed)
}

/// New float at `prec` bits from an exact rational. Rounding happens once,
/// at the final division.
pub fn real_from_rational(prec: u32, x: &BigRational) -> Float {
    let num = real_from_bigint(prec, x.numer());
    let den = real_from_bigint(prec, x.denom());
    num / den
}

/// One unit in the last place of `x`, or `2^-prec` for zero.
pub fn ulp(x: &Float) -> Float {
    let prec = x.prec();
    let exp = x.get_exp().unwrap_or(0);
    Float::with_val(prec, Float::i_exp(1, exp.saturating_sub(prec as i32)))
}

/// `2^e` at `prec` bits; the certification thresholds `2^(-prec/2)` and
/// `2^(-prec/4)` are built from this.
pub fn two_pow(prec: u32, e: i32) -> Float {
    Float::with_val(prec, Float::i_exp(1, e))
}

/// Complex number as a pair of MPFR floats at a shared precision.
#[derive(Clone, Debug)]
pub struct HpComplex {
    pub re: Float,
    pub im: Float,
}

impl HpComplex {
    pub fn new(re: Float, im: Float) -> Self {
        debug_assert_eq!(re.prec(), im.prec());
        HpComplex { re, im }
    }

    pub fn from_f64(prec: u32, re: f64, im: f64) -> Self {
        HpComplex::new(real(prec, re), real(prec, im))
    }

    pub fn from_real(re: Float) -> Self {
        let prec = re.prec();
        HpComplex { re, im: real(prec, 0.0) }
    }

    pub fn zero(prec: u32) -> Self {
        HpComplex::from_f64(prec, 0.0, 0.0)
    }

    pub fn prec(&self) -> u32 {
        self.re.prec()
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    /// Modulus, computed as a hypotenuse to avoid overflow in squares.
    pub fn abs(&self) -> Float {
        self.re.clone().hypot(&self.im)
    }

    pub fn add(&self, other: &Self) -> Self {
        HpComplex::new(
            Float::with_val(self.prec(), &self.re + &other.re),
            Float::with_val(self.prec(), &self.im + &other.im),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        HpComplex::new(
            Float::with_val(self.prec(), &self.re - &other.re),
            Float::with_val(self.prec(), &self.im - &other.im),
        )
    }

    pub fn neg(&self) -> Self {
        HpComplex::new(
            Float::with_val(self.prec(), -&self.re),
            Float::with_val(self.prec(), -&self.im),
        )
    }

    pub fn mul(&self, other: &Self) -> Self {
        let prec = self.prec();
        let re = Float::with_val(prec, &self.re * &other.re) - Float::with_val(prec, &self.im * &other.im);
        let im = Float::with_val(prec, &self.re * &other.im) + Float::with_val(prec, &self.im * &other.re);
        HpComplex::new(re, im)
    }

    pub fn scale(&self, f: &Float) -> Self {
        HpComplex::new(
            Float::with_val(self.prec(), &self.re * f),
            Float::with_val(self.prec(), &self.im * f),
        )
    }

    pub fn div(&self, other: &Self) -> Self {
        let prec = self.prec();
        let den = Float::with_val(prec, other.re.clone().square() + other.im.clone().square());
        let re = Float::with_val(prec, &self.re * &other.re) + Float::with_val(prec, &self.im * &other.im);
        let im = Float::with_val(prec, &self.im * &other.re) - Float::with_val(prec, &self.re * &other.im);
        HpComplex::new(re / &den, im / &den)
    }

    pub fn to_f64s(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }
}
