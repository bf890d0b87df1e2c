//! Self-contained JSON description of a constructed instance: the geometric
//! data, both bases, every matrix, the counts, and optionally the search that
//! produced it. A document can be rebuilt from its geometric data and checked
//! against its own stored matrices.

use serde::{Deserialize, Serialize};

use crate::algebra::{Field, Matrix};
use crate::config::{FieldSpec, FunctionSpec, RatSpec};
use crate::curve::{Curve, CurveFunction, Divisor, Model, PlaceId};
use crate::error::{Error, Result};
use crate::instance::{Algorithm, BoundsReport, CcmaInstance, ComplexityReport, CountRule};
use crate::optimizer::{OptimizationResult, SearchConfig};

pub const FORMAT: &str = "ccma-instance/1";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivisorTerm {
    pub place: PlaceId,
    pub multiplicity: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlaceEntry {
    pub id: PlaceId,
    /// Affine coordinates of rational finite places.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub point: Option<[u32; 2]>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FunctionEntry {
    pub text: String,
    pub a: RatSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<RatSpec>,
}

impl FunctionEntry {
    fn of(g: &CurveFunction, f: &Field) -> FunctionEntry {
        FunctionEntry {
            text: g.render(f),
            a: RatSpec::of(&g.a),
            b: (!g.b.is_zero()).then(|| RatSpec::of(&g.b)),
        }
    }

    /// The structured form is authoritative; `text` is for reading.
    fn build(&self, curve: &Curve) -> Result<CurveFunction> {
        FunctionSpec::Parts { a: self.a.clone(), b: self.b.clone() }.build(curve, &[])
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Matrices {
    pub t2d: Vec<Vec<u32>>,
    pub td: Vec<Vec<u32>>,
    pub c: Vec<Vec<u32>>,
    pub r: Vec<Vec<u32>>,
    pub bq: Vec<Vec<u32>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Grids {
    pub t2d: Vec<String>,
    pub td: Vec<String>,
    pub c: Vec<String>,
    pub r: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchSection {
    pub config: SearchConfig,
    pub objective: [i64; 2],
    pub initial_objective: [i64; 2],
    pub initial_metrics: ComplexityReport,
    pub candidates_evaluated: u64,
    pub independent_candidates: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub total_candidates: Option<u64>,
    pub complete: bool,
    pub budget_exhausted: bool,
    pub nz_bound: usize,
    pub nz_bound_attained: bool,
    pub code_first_fallback: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target_met: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reference_beaten: Option<bool>,
    /// Rows give the new basis in terms of the starting one.
    pub sigma: Vec<Vec<u32>>,
}

impl SearchSection {
    pub fn of(r: &OptimizationResult) -> SearchSection {
        SearchSection {
            config: r.config.clone(),
            objective: [r.objective.0, r.objective.1],
            initial_objective: [r.initial_objective.0, r.initial_objective.1],
            initial_metrics: r.initial_report.clone(),
            candidates_evaluated: r.candidates_evaluated,
            independent_candidates: r.independent_candidates,
            total_candidates: r.total_candidates,
            complete: r.complete,
            budget_exhausted: r.budget_exhausted,
            nz_bound: r.nz_bound,
            nz_bound_attained: r.nz_bound_attained,
            code_first_fallback: r.code_first_fallback,
            target_met: r.target_met,
            reference_beaten: r.reference_beaten,
            sigma: r.sigma.to_codes(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceDocument {
    pub format: String,
    pub field: FieldSpec,
    pub curve: Model,
    pub q_place: PlaceId,
    pub divisor: Vec<DivisorTerm>,
    pub places: Vec<PlaceEntry>,
    pub basis_d: Vec<FunctionEntry>,
    pub supplement: Vec<FunctionEntry>,
    #[serde(default)]
    pub count_rule: CountRule,
    pub matrices: Matrices,
    pub grids: Grids,
    pub metrics: ComplexityReport,
    pub bounds: BoundsReport,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub search: Option<SearchSection>,
}

/// Rows of a matrix as space-separated element symbols.
pub fn grid(m: &Matrix, f: &Field) -> Vec<String> {
    (0..m.rows())
        .map(|i| m.row(i).iter().map(|&a| f.symbol(a)).collect::<Vec<_>>().join(" "))
        .collect()
}

impl InstanceDocument {
    pub fn new(inst: &CcmaInstance, rule: CountRule, search: Option<&OptimizationResult>) -> Result<InstanceDocument> {
        let f = inst.field();
        Ok(InstanceDocument {
            format: FORMAT.into(),
            field: FieldSpec::of(f),
            curve: inst.curve().model().clone(),
            q_place: inst.q().id().clone(),
            divisor: inst
                .divisor()
                .terms()
                .map(|(p, m)| DivisorTerm { place: p.id().clone(), multiplicity: m })
                .collect(),
            places: inst
                .places()
                .iter()
                .map(|p| PlaceEntry {
                    id: p.id().clone(),
                    point: if p.is_infinite() { None } else { p.point().map(|(x, y)| [x.0, y.0]) },
                })
                .collect(),
            basis_d: inst.basis_d().iter().map(|g| FunctionEntry::of(g, f)).collect(),
            supplement: inst.supplement().iter().map(|g| FunctionEntry::of(g, f)).collect(),
            count_rule: rule,
            matrices: Matrices {
                t2d: inst.t2d().to_codes(),
                td: inst.td().to_codes(),
                c: inst.c().to_codes(),
                r: inst.r().to_codes(),
                bq: inst.algorithm().bq().to_codes(),
            },
            grids: Grids {
                t2d: grid(inst.t2d(), f),
                td: grid(inst.td(), f),
                c: grid(inst.c(), f),
                r: grid(inst.r(), f),
            },
            metrics: inst.algorithm().metrics(rule),
            bounds: inst.bounds_check()?,
            search: search.map(SearchSection::of),
        })
    }

    pub fn from_json(text: &str) -> Result<InstanceDocument> {
        let doc: InstanceDocument = serde_json::from_str(text)?;
        if doc.format != FORMAT {
            return Err(Error::Document(format!("unknown format {:?}", doc.format)));
        }
        Ok(doc)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("document serializes")
    }

    /// Reconstruct the instance from the geometric data alone.
    pub fn rebuild(&self) -> Result<CcmaInstance> {
        let curve = Curve::from_model(self.field.build()?, self.curve.clone())?;
        let q = curve.place(&self.q_place)?;
        let mut divisor = Divisor::zero();
        for t in &self.divisor {
            divisor.add_term(curve.place(&t.place)?, t.multiplicity);
        }
        let places = self.places.iter().map(|p| curve.place(&p.id)).collect::<Result<Vec<_>>>()?;
        let bd = self.basis_d.iter().map(|g| g.build(&curve)).collect::<Result<Vec<_>>>()?;
        let sup = self.supplement.iter().map(|g| g.build(&curve)).collect::<Result<Vec<_>>>()?;
        CcmaInstance::build(&curve, &divisor, &q, &places, &bd, &sup)
    }

    /// The algorithm exactly as stored, without consulting the curve.
    pub fn stored_algorithm(&self) -> Result<Algorithm> {
        let field = self.field.build()?;
        let modulus = match &self.q_place {
            PlaceId::Finite { poly, .. } => poly.clone(),
            PlaceId::Infinity => return Err(Error::Document("Q cannot be the place at infinity".into())),
        };
        let m = |rows: &Vec<Vec<u32>>| -> Result<Matrix> {
            for c in rows.iter().flatten() {
                field.elem(*c)?;
            }
            Matrix::from_codes(rows)
        };
        Algorithm::new(field.clone(), modulus, m(&self.matrices.td)?, m(&self.matrices.r)?, m(&self.matrices.bq)?)
    }

    /// Differences between the stored data and a fresh rebuild; empty when consistent.
    pub fn verify(&self) -> Result<Vec<String>> {
        let inst = self.rebuild()?;
        let fresh = InstanceDocument::new(&inst, self.count_rule, None)?;
        let mut diffs = Vec::new();
        let mut check = |name: &str, stored: &Vec<Vec<u32>>, got: &Vec<Vec<u32>>| {
            if stored.len() != got.len() || stored.iter().zip(got).any(|(a, b)| a.len() != b.len()) {
                diffs.push(format!("matrix {name} has the wrong shape"));
                return;
            }
            for (i, (a, b)) in stored.iter().zip(got).enumerate() {
                if let Some(j) = (0..a.len()).find(|&j| a[j] != b[j]) {
                    diffs.push(format!("matrix {name} entry ({i}, {j}): stored {}, rebuilt {}", a[j], b[j]));
                    return;
                }
            }
        };
        check("t2d", &self.matrices.t2d, &fresh.matrices.t2d);
        check("td", &self.matrices.td, &fresh.matrices.td);
        check("c", &self.matrices.c, &fresh.matrices.c);
        check("r", &self.matrices.r, &fresh.matrices.r);
        check("bq", &self.matrices.bq, &fresh.matrices.bq);
        if self.grids != fresh.grids {
            diffs.push("printed grids differ from the rebuilt instance".into());
        }
        if self.metrics != fresh.metrics {
            diffs.push(format!("metrics differ: stored {:?}, rebuilt {:?}", self.metrics, fresh.metrics));
        }
        if self.bounds != fresh.bounds {
            diffs.push("bounds report differs from the rebuilt instance".into());
        }
        for (i, (s, g)) in self.basis_d.iter().zip(&fresh.basis_d).enumerate() {
            if s.text != g.text {
                diffs.push(format!("basis function {i} text {:?} does not match its structured form", s.text));
            }
        }
        Ok(diffs)
    }
}
