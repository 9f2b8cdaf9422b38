//! Divisor catalog for the compactified membrane domain.
//!
//! The membrane on a degree-n field with a weight-W composition embeds into
//! a moduli space of n^2 W + 3 marked points via the coordinates
//! z(i, j, d) = exp(-t_{j,d} sigma_j(e_i)), indexed by generator i, row j,
//! and slot d (all labels 1-based here and in the JSON output). The catalog
//! lists the boundary components the integration domain runs into:
//!
//! * family A: the fixed values z(i, n, d) = eps_d and z(i, n, d) = inf,
//! * family B1: the codimension-1 walls z = 0, consecutive-slot collisions,
//!   and z = 1,
//! * family B2: for each generator pair, the codimension-2 degenerations
//!   whose blow-up coordinates are projective points: the growth-side class
//!   over {0, 1} and the shrink-side embedding ratios.
//!
//! Nothing geometric is modeled; the records are combinatorial metadata
//! validated against closed-form counts.

use crate::cone::Cone;
use crate::error::{Error, Result};
use crate::hp::HpComplex;
use crate::membrane::tangent_limits;
use crate::series::Composition;
use serde_json::{json, Value};

/// The seven component families.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ComponentKind {
    AEqualEpsilon,
    AInfinity,
    B1Zero,
    B1Diagonal,
    B1One,
    B2Prime,
    B2DoublePrime,
}

impl ComponentKind {
    pub fn label(self) -> &'static str {
        match self {
            ComponentKind::AEqualEpsilon => "A-equal-epsilon",
            ComponentKind::AInfinity => "A-infinity",
            ComponentKind::B1Zero => "B1-zero",
            ComponentKind::B1Diagonal => "B1-diagonal",
            ComponentKind::B1One => "B1-one",
            ComponentKind::B2Prime => "B2-prime",
            ComponentKind::B2DoublePrime => "B2-doubleprime",
        }
    }
}

/// One boundary component. Index fields are 1-based labels; unused ones are
/// None. B2 records carry exactly one of the projective payloads, A and B1
/// records carry neither.
#[derive(Clone, Debug)]
pub struct DivisorComponent {
    pub kind: ComponentKind,
    /// Generator label, or the smaller member of a B2 pair.
    pub i: Option<usize>,
    /// Row label, or the larger member of a B2 pair.
    pub k: Option<usize>,
    /// Slot label.
    pub d: Option<usize>,
    /// Defining condition in the z(i, j, d) coordinates.
    pub equation: String,
    /// Growth-side limit class over {0, 1} (B2-prime only).
    pub growth_point: Option<(u8, u8)>,
    /// Shrink-side ratios [sigma_j(e_i1) : sigma_j(e_i2)], one pair per
    /// embedding j in ascending order (B2-doubleprime only).
    pub shrink_pairs: Option<Vec<(HpComplex, HpComplex)>>,
}

/// The full component list with its headline parameters.
#[derive(Clone, Debug)]
pub struct DivisorCatalog {
    pub n: usize,
    /// Composition weight W; slots run 1..=W.
    pub weight: usize,
    /// n^2 W + 3.
    pub marked_points: usize,
    /// The 0/1 block pattern whose entries the A-family pins.
    pub epsilon: Vec<u8>,
    pub components: Vec<DivisorComponent>,
}

/// Closed-form component counts.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CatalogCounts {
    pub a: usize,
    pub b1: usize,
    pub b2: usize,
    pub marked_points: usize,
}

/// Enumerates every boundary component for the cone and composition.
///
/// A: z(i, n, d) = eps_d and z(i, n, d) = inf for i in 1..=n, d in 1..=W.
/// B1: z(i, 1, 1) = 0, the slot collisions z(i, k, d) = z(i, k, d+1) for
/// d in 1..=W-1, and z(i, 1, W) = 1. B2: per pair i1 < i2 one growth record
/// and one shrink record; the shrink ratios come from `tangent_limits`, and
/// an equal-modulus pair makes the blow-up point undefined.
pub fn build_catalog(cone: &Cone, comp: &Composition) -> Result<DivisorCatalog> {
    let n = cone.degree();
    let w = comp.weight() as usize;
    let epsilon = comp.epsilon().to_vec();
    let mut components = Vec::new();

    for i in 1..=n {
        for d in 1..=w {
            components.push(DivisorComponent {
                kind: ComponentKind::AEqualEpsilon,
                i: Some(i),
                k: None,
                d: Some(d),
                equation: format!("z({i},{n},{d}) = {}", epsilon[d - 1]),
                growth_point: None,
                shrink_pairs: None,
            });
        }
    }
    for i in 1..=n {
        for d in 1..=w {
            components.push(DivisorComponent {
                kind: ComponentKind::AInfinity,
                i: Some(i),
                k: None,
                d: Some(d),
                equation: format!("z({i},{n},{d}) = inf"),
                growth_point: None,
                shrink_pairs: None,
            });
        }
    }

    for i in 1..=n {
        components.push(DivisorComponent {
            kind: ComponentKind::B1Zero,
            i: Some(i),
            k: None,
            d: None,
            equation: format!("z({i},1,1) = 0"),
            growth_point: None,
            shrink_pairs: None,
        });
    }
    for i in 1..=n {
        for k in 1..=n {
            for d in 1..w {
                components.push(DivisorComponent {
                    kind: ComponentKind::B1Diagonal,
                    i: Some(i),
                    k: Some(k),
                    d: Some(d),
                    equation: format!("z({i},{k},{d}) = z({i},{k},{})", d + 1),
                    growth_point: None,
                    shrink_pairs: None,
                });
            }
        }
    }
    for i in 1..=n {
        components.push(DivisorComponent {
            kind: ComponentKind::B1One,
            i: Some(i),
            k: None,
            d: None,
            equation: format!("z({i},1,{w}) = 1"),
            growth_point: None,
            shrink_pairs: None,
        });
    }

    for i1 in 1..=n {
        for i2 in i1 + 1..=n {
            // The growth-side coordinates z(i, 1, 1) live on row 1, so the
            // limit class compares the pair under the first embedding.
            let (p, _) = tangent_limits(cone, i1 - 1, i2 - 1, 0).map_err(|e| match e {
                Error::EqualModulusEmbeddings { i, k, embedding } => {
                    Error::DegenerateBlowupPoint { i, k, embedding }
                }
                other => other,
            })?;
            components.push(DivisorComponent {
                kind: ComponentKind::B2Prime,
                i: Some(i1),
                k: Some(i2),
                d: None,
                equation: format!(
                    "[z({i1},1,1) : z({i2},1,1)] -> {p} as t -> inf"
                ),
                growth_point: Some(p.as_pair()),
                shrink_pairs: None,
            });

            let mut pairs = Vec::with_capacity(n);
            for j in 0..n {
                let (_, q) = tangent_limits(cone, i1 - 1, i2 - 1, j).map_err(|e| match e {
                    Error::EqualModulusEmbeddings { i, k, embedding } => {
                        Error::DegenerateBlowupPoint { i, k, embedding }
                    }
                    other => other,
                })?;
                pairs.push(q);
            }
            components.push(DivisorComponent {
                kind: ComponentKind::B2DoublePrime,
                i: Some(i1),
                k: Some(i2),
                d: None,
                equation: format!(
                    "[1 - z({i1},1,1) : 1 - z({i2},1,1)] -> [sigma_j(e{i1}) : sigma_j(e{i2})] as t -> 0"
                ),
                growth_point: None,
                shrink_pairs: Some(pairs),
            });
        }
    }

    Ok(DivisorCatalog {
        n,
        weight: w,
        marked_points: n * n * w + 3,
        epsilon,
        components,
    })
}

/// Evaluates the closed-form counts and checks them against the enumerated
/// records: |A| = 2nW, |B1| = 2n + n^2 (W-1), |B2| = 2 C(n,2), and
/// marked_points = n^2 W + 3.
pub fn catalog_counts(cat: &DivisorCatalog) -> Result<CatalogCounts> {
    let n = cat.n;
    let w = cat.weight;
    let expected = CatalogCounts {
        a: 2 * n * w,
        b1: 2 * n + n * n * (w - 1),
        b2: n * (n - 1),
        marked_points: n * n * w + 3,
    };

    let count = |kinds: &[ComponentKind]| {
        cat.components
            .iter()
            .filter(|c| kinds.contains(&c.kind))
            .count()
    };
    let got_a = count(&[ComponentKind::AEqualEpsilon, ComponentKind::AInfinity]);
    let got_b1 = count(&[
        ComponentKind::B1Zero,
        ComponentKind::B1Diagonal,
        ComponentKind::B1One,
    ]);
    let got_b2 = count(&[ComponentKind::B2Prime, ComponentKind::B2DoublePrime]);

    if got_a != expected.a {
        return Err(Error::CountMismatch { kind: "A".into() });
    }
    if got_b1 != expected.b1 {
        return Err(Error::CountMismatch { kind: "B1".into() });
    }
    if got_b2 != expected.b2 {
        return Err(Error::CountMismatch { kind: "B2".into() });
    }
    if cat.marked_points != expected.marked_points {
        return Err(Error::CountMismatch {
            kind: "marked_points".into(),
        });
    }
    Ok(expected)
}

impl DivisorComponent {
    fn to_json(&self) -> Value {
        let mut indices = serde_json::Map::new();
        if let Some(i) = self.i {
            indices.insert("i".into(), json!(i));
        }
        if let Some(k) = self.k {
            indices.insert("k".into(), json!(k));
        }
        if let Some(d) = self.d {
            indices.insert("d".into(), json!(d));
        }
        let projective = if let Some((a, b)) = self.growth_point {
            json!([a, b])
        } else if let Some(pairs) = &self.shrink_pairs {
            Value::Array(
                pairs
                    .iter()
                    .map(|(qa, qb)| {
                        let (ar, ai) = qa.to_f64s();
                        let (br, bi) = qb.to_f64s();
                        json!([[ar, ai], [br, bi]])
                    })
                    .collect(),
            )
        } else {
            Value::Null
        };
        json!({
            "kind": self.kind.label(),
            "indices": Value::Object(indices),
            "equation": self.equation,
            "projective_point": projective,
        })
    }
}

impl DivisorCatalog {
    /// Machine-readable form: top-level n, W, marked_points, epsilon, and
    /// the component list. Families beyond codimension 2 are out of scope,
    /// which the covered_families key states explicitly.
    pub fn to_json(&self) -> Value {
        json!({
            "n": self.n,
            "W": self.weight,
            "marked_points": self.marked_points,
            "epsilon": self.epsilon,
            "covered_families": ["A", "B1", "B2"],
            "components": Value::Array(self.components.iter().map(|c| c.to_json()).collect()),
        })
    }
}
