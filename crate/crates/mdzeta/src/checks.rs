//! Built-in structural check suites.
//!
//! Each suite exercises one of the identities the two evaluation routes
//! rest on, over the built-in fixtures (the rationals, the real quadratic
//! field of discriminant 8, and the cubic field of discriminant -23). The
//! CLI `check` subcommand and the acceptance tests both run these, so the
//! counts reported on the command line are exactly what the test suite
//! enforces.
//!
//! All randomized suites use fixed seeds; reruns produce identical counts.

use crate::algexp::{alg_pow, Monomial};
use crate::catalog::{build_catalog, catalog_counts};
use crate::error::Result;
use crate::field::AlgebraicInt;
use crate::fixtures;
use crate::hp::{self, HpComplex};
use crate::membrane::{omega_alpha_check, tangent_limits, ProjectiveClass};
use crate::series::Composition;
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::Float;
use serde::Serialize;

/// The named check suites.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Algexp,
    Numfield,
    F0,
    Jacobian,
    Tangent,
    Catalog,
    All,
}

pub const SUITE_NAMES: [&str; 7] = [
    "algexp", "numfield", "f0", "jacobian", "tangent", "catalog", "all",
];

impl Suite {
    pub fn parse(name: &str) -> Option<Suite> {
        match name {
            "algexp" => Some(Suite::Algexp),
            "numfield" => Some(Suite::Numfield),
            "f0" => Some(Suite::F0),
            "jacobian" => Some(Suite::Jacobian),
            "tangent" => Some(Suite::Tangent),
            "catalog" => Some(Suite::Catalog),
            "all" => Some(Suite::All),
            _ => None,
        }
    }
}

/// Outcome of one suite: check counts plus a description of each failure.
#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: &'static str,
    pub passed: u64,
    pub failed: u64,
    pub failures: Vec<String>,
}

impl SuiteReport {
    fn new(suite: &'static str) -> Self {
        SuiteReport {
            suite,
            passed: 0,
            failed: 0,
            failures: Vec::new(),
        }
    }

    fn record(&mut self, ok: bool, context: impl FnOnce() -> String) {
        if ok {
            self.passed += 1;
        } else {
            self.failed += 1;
            self.failures.push(context());
        }
    }
}

/// Runs the named suite (or all of them) on the built-in fixtures.
pub fn run(suite: Suite) -> Vec<SuiteReport> {
    match suite {
        Suite::Algexp => vec![algexp_suite()],
        Suite::Numfield => vec![numfield_suite()],
        Suite::F0 => vec![f0_suite()],
        Suite::Jacobian => vec![jacobian_suite()],
        Suite::Tangent => vec![tangent_suite()],
        Suite::Catalog => vec![catalog_suite()],
        Suite::All => vec![
            algexp_suite(),
            numfield_suite(),
            f0_suite(),
            jacobian_suite(),
            tangent_suite(),
            catalog_suite(),
        ],
    }
}

fn random_element(rng: &mut ChaCha8Rng, n: usize) -> AlgebraicInt {
    AlgebraicInt::new((0..n).map(|_| BigInt::from(rng.random_range(-4i64..=4))).collect())
}

/// Exponent calculus: applying the action of alpha then beta equals the
/// action of alpha * beta, exactly, for 1000 random pairs per field.
fn algexp_suite() -> SuiteReport {
    let mut report = SuiteReport::new("algexp");
    let fields = [fixtures::quadratic_field_sqrt2(64), fixtures::cubic_field(64)];
    let mut rng = ChaCha8Rng::seed_from_u64(0x1a2b_0001);
    for nf in &fields {
        let n = nf.degree();
        for trial in 0..1000 {
            let alpha = random_element(&mut rng, n);
            let beta = random_element(&mut rng, n);
            let mon = Monomial::new(
                (0..n).map(|_| BigInt::from(rng.random_range(-3i64..=3))).collect(),
            );
            let chained = alg_pow(nf, &alpha, &mon)
                .and_then(|m| alg_pow(nf, &beta, &m));
            let direct = nf
                .mul(&alpha, &beta)
                .and_then(|prod| alg_pow(nf, &prod, &mon));
            let ok = matches!((&chained, &direct), (Ok(a), Ok(b)) if a == b);
            report.record(ok, || {
                format!("degree {n} trial {trial}: chained action != product action")
            });
        }
    }
    report
}

/// Norm multiplicativity over the exact integers, and agreement of the
/// exact norm with the product of numerical embeddings.
fn numfield_suite() -> SuiteReport {
    let mut report = SuiteReport::new("numfield");
    let fields = [
        fixtures::rational_field(96),
        fixtures::quadratic_field_sqrt2(96),
        fixtures::cubic_field(96),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(0x1a2b_0002);
    for nf in &fields {
        let n = nf.degree();
        let prec = nf.precision();
        for trial in 0..200 {
            let a = random_element(&mut rng, n);
            let b = random_element(&mut rng, n);
            let exact = (|| -> Result<bool> {
                let prod = nf.mul(&a, &b)?;
                Ok(nf.norm(&prod)? == nf.norm(&a)? * nf.norm(&b)?)
            })();
            report.record(matches!(exact, Ok(true)), || {
                format!("degree {n} trial {trial}: norm not multiplicative")
            });

            let numeric = (|| -> Result<bool> {
                let mut prod = HpComplex::from_f64(prec, 1.0, 0.0);
                for j in 0..n {
                    prod = prod.mul(&nf.embed(&a, j)?);
                }
                let exact_norm = hp::real_from_bigint(prec, &nf.norm(&a)?);
                let gap = prod.sub(&HpComplex::from_real(exact_norm.clone())).abs();
                let scale = exact_norm.abs().max(&hp::real(prec, 1.0));
                Ok(gap <= hp::two_pow(prec, -((prec as i32) / 2)) * scale)
            })();
            report.record(matches!(numeric, Ok(true)), || {
                format!("degree {n} trial {trial}: embeddings disagree with exact norm")
            });
        }
    }
    report
}

/// Closed form of the cone generating function versus its truncated series,
/// within the rigorous tail bound, at 50 random points per real field.
fn f0_suite() -> SuiteReport {
    let mut report = SuiteReport::new("f0");
    let q = fixtures::rational_field(128);
    let nf2 = fixtures::quadratic_field_sqrt2(128);
    let cones = [fixtures::rational_cone(&q), fixtures::quadratic_cone(&nf2)];
    let mut rng = ChaCha8Rng::seed_from_u64(0x1a2b_0003);
    for cone in &cones {
        let n = cone.degree();
        let prec = cone.field().precision();
        for trial in 0..50 {
            let t: Vec<Float> = (0..n)
                .map(|_| hp::real(prec, rng.random_range(0.3..2.5)))
                .collect();
            let ok = (|| -> Result<bool> {
                let closed = cone.f0_closed(&t)?;
                // Grow the truncation until the rigorous tail is below the
                // target, then compare.
                let mut bound = 64u64;
                loop {
                    let (series, tail) = cone.f0_series(&t, bound)?;
                    if tail.to_f64() < 1e-10 || bound >= 1 << 14 {
                        let cushion =
                            closed.clone().abs().to_f64().max(1e-300) * 2f64.powi(-100);
                        return Ok(tail.to_f64() < 1e-10
                            && (series - &closed).abs().to_f64() <= tail.to_f64() + cushion);
                    }
                    bound *= 2;
                }
            })();
            report.record(matches!(ok, Ok(true)), || {
                format!("degree {n} trial {trial}: closed form outside series tail")
            });
        }
    }
    report
}

/// Finite-difference Jacobian of the exponential chart against the
/// embedding determinant: ratio within 1e-5 at 20 random interior points
/// per field, second-order shrink under step halving, and the exact
/// discriminant ratios of the embedding determinant.
fn jacobian_suite() -> SuiteReport {
    let mut report = SuiteReport::new("jacobian");
    let q = fixtures::rational_field(128);
    let nf2 = fixtures::quadratic_field_sqrt2(128);
    let cones = [fixtures::rational_cone(&q), fixtures::quadratic_cone(&nf2)];
    let mut rng = ChaCha8Rng::seed_from_u64(0x1a2b_0004);
    for cone in &cones {
        let n = cone.degree();
        let prec = cone.field().precision();
        for trial in 0..20 {
            let t: Vec<Float> = (0..n)
                .map(|_| hp::real(prec, rng.random_range(0.4..2.0)))
                .collect();
            let h = hp::real(prec, 1e-5);
            let ok = omega_alpha_check(cone, &t, &h)
                .map(|(_, _, ratio)| (ratio.to_f64() - 1.0).abs() <= 1e-5)
                .unwrap_or(false);
            report.record(ok, || {
                format!("degree {n} trial {trial}: pullback ratio off by more than 1e-5")
            });
        }

        // Second-order convergence at a fixed interior point.
        let t: Vec<Float> = (0..n).map(|i| hp::real(prec, 0.7 + 0.3 * i as f64)).collect();
        let order_ok = (|| -> Result<bool> {
            let coarse = omega_alpha_check(cone, &t, &hp::real(prec, 1e-2))?;
            let fine = omega_alpha_check(cone, &t, &hp::real(prec, 5e-3))?;
            let e0 = (coarse.2.to_f64() - 1.0).abs();
            let e1 = (fine.2.to_f64() - 1.0).abs();
            Ok(e0 > 0.0 && e1 > 0.0 && (2.5..6.0).contains(&(e0 / e1)))
        })();
        report.record(matches!(order_ok, Ok(true)), || {
            format!("degree {n}: step halving is not second order")
        });
    }

    // Exact determinant ratios: the integral basis reproduces the field
    // discriminant (ratio 1); the quadratic cone basis (1, 3 + 2 sqrt2)
    // spans an index-2 sublattice (ratio 4).
    let basis_elems: Vec<AlgebraicInt> = (0..nf2.degree())
        .map(|i| {
            let mut coords = vec![BigInt::from(0); nf2.degree()];
            coords[i] = BigInt::from(1);
            AlgebraicInt::new(coords)
        })
        .collect();
    let ratio_basis = nf2.embedding_det(&basis_elems).map(|d| d.disc_ratio);
    report.record(
        matches!(&ratio_basis, Ok(r) if *r == num_rational::BigRational::from(BigInt::from(1))),
        || "integral basis determinant ratio is not exactly 1".to_string(),
    );
    let cone2 = fixtures::quadratic_cone(&nf2);
    let ratio_cone = nf2
        .embedding_det(cone2.generators())
        .map(|d| d.disc_ratio);
    report.record(
        matches!(&ratio_cone, Ok(r) if *r == num_rational::BigRational::from(BigInt::from(4))),
        || "cone basis determinant ratio is not exactly 4".to_string(),
    );
    report
}

fn complex_exp(z: &HpComplex) -> HpComplex {
    let prec = z.prec();
    let mag = Float::with_val(prec, z.re.clone().exp());
    let (sin, cos) = z.im.clone().sin_cos(Float::new(prec));
    HpComplex::new(
        Float::with_val(prec, &mag * &cos),
        Float::with_val(prec, &mag * &sin),
    )
}

/// Tangential limits: the growth class p matches the modulus comparison in
/// every (ordered pair, embedding) case, the growth is confirmed
/// numerically on real embeddings, and the shrink ratio q matches a
/// central difference quotient with an improving trend as t shrinks.
fn tangent_suite() -> SuiteReport {
    let mut report = SuiteReport::new("tangent");
    let nf2 = fixtures::quadratic_field_sqrt2(192);
    let nf3 = fixtures::cubic_field(192);
    let cones = [fixtures::quadratic_cone(&nf2), fixtures::cubic_cone(&nf3)];
    for cone in &cones {
        let n = cone.degree();
        let prec = cone.field().precision();
        for i in 0..n {
            for k in 0..n {
                if i == k {
                    continue;
                }
                for j in 0..n {
                    let label = || format!("degree {n} pair ({i},{k}) embedding {j}");
                    let Ok((p, (qa, qb))) = tangent_limits(cone, i, k, j) else {
                        report.record(false, || format!("{}: unexpected error", label()));
                        continue;
                    };

                    // Independent p: directly compare embedding moduli.
                    let ma = cone.embedding_matrix()[i][j].abs();
                    let mb = cone.embedding_matrix()[k][j].abs();
                    let expected = if ma < mb {
                        ProjectiveClass::ZeroOne
                    } else {
                        ProjectiveClass::OneZero
                    };
                    report.record(p == expected, || {
                        format!("{}: growth class disagrees with moduli", label())
                    });

                    // On real embeddings the class is visible in the decay
                    // of z_i/z_k itself.
                    if qa.im.is_zero() && qb.im.is_zero() {
                        let a = qa.re.to_f64();
                        let b = qb.re.to_f64();
                        let r10 = (-(a - b) * 10.0).exp();
                        let r20 = (-(a - b) * 20.0).exp();
                        let grows = r20 > r10;
                        report.record(grows == (p == ProjectiveClass::ZeroOne), || {
                            format!("{}: decay direction disagrees with class", label())
                        });
                    }

                    // q against the central difference quotient
                    // d(e^{-bt}) / d(e^{-ct}) at shrinking t.
                    let target = qa.div(&qb);
                    let mut prev = f64::INFINITY;
                    let mut trend = true;
                    let mut final_err = f64::NAN;
                    for tv in [1e-3, 1e-4, 1e-5] {
                        let delta = tv / 50.0;
                        let at =
                            |s: f64, w: &HpComplex| complex_exp(&w.scale(&hp::real(prec, -s)));
                        let num = at(tv + delta, &qa).sub(&at(tv - delta, &qa));
                        let den = at(tv + delta, &qb).sub(&at(tv - delta, &qb));
                        let quotient = num.div(&den);
                        let err = quotient.sub(&target).abs().to_f64() / target.abs().to_f64();
                        trend &= err < prev;
                        prev = err;
                        final_err = err;
                    }
                    report.record(trend && final_err < 1e-4, || {
                        format!("{}: difference quotient does not approach q", label())
                    });
                }
            }
        }
    }
    report
}

/// Catalog counts against the closed-form formulas over the full
/// (degree, weight) grid, including the marked-point counts at n = 1.
fn catalog_suite() -> SuiteReport {
    let mut report = SuiteReport::new("catalog");
    let q = fixtures::rational_field(64);
    let nf2 = fixtures::quadratic_field_sqrt2(64);
    let nf3 = fixtures::cubic_field(64);
    let cones = [
        fixtures::rational_cone(&q),
        fixtures::quadratic_cone(&nf2),
        fixtures::cubic_cone(&nf3),
    ];
    for cone in &cones {
        let n = cone.degree();
        for w in 2..=6usize {
            let mut s = vec![1u64; w - 2];
            s.push(2);
            let comp = Composition::new(s).expect("valid composition");
            let ok = build_catalog(cone, &comp)
                .and_then(|cat| {
                    let counts = catalog_counts(&cat)?;
                    Ok(counts.a == 2 * n * w
                        && counts.b1 == 2 * n + n * n * (w - 1)
                        && counts.b2 == n * (n - 1)
                        && counts.marked_points == n * n * w + 3)
                })
                .unwrap_or(false);
            report.record(ok, || format!("degree {n} weight {w}: counts mismatch"));
        }
    }
    // The rational field at weights 2 and 3 sits on 5 and 6 marked points.
    let cone_q = fixtures::rational_cone(&q);
    for (w, expect) in [(2usize, 5usize), (3, 6)] {
        let mut s = vec![1u64; w - 2];
        s.push(2);
        let comp = Composition::new(s).expect("valid composition");
        let ok = build_catalog(&cone_q, &comp)
            .map(|cat| cat.marked_points == expect)
            .unwrap_or(false);
        report.record(ok, || format!("weight {w}: expected {expect} marked points"));
    }
    report
}

/// Convenience used by the CLI and tests: true when nothing failed.
pub fn all_passed(reports: &[SuiteReport]) -> bool {
    reports.iter().all(|r| r.failed == 0)
}
