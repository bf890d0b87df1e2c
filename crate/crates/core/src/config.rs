//! JSON run configuration: field, curve, places, bases and search settings.
//! Field elements are integer codes throughout.

use serde::{Deserialize, Serialize};

use crate::algebra::{Elem, Field, Poly};
use crate::curve::{Curve, CurveFunction, Divisor, Model, Place, PlaceId, RatFn};
use crate::error::{Error, Result};
use crate::expr::{parse_defs, parse_function};
use crate::instance::{CcmaInstance, CountRule};
use crate::optimizer::SearchConfig;
use crate::riemann_roch::{kernel_supplement, rr_space};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldSpec {
    pub p: u32,
    #[serde(default = "one")]
    pub m: usize,
    /// Monic modulus over `F_p`, lowest degree first.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus: Option<Vec<u32>>,
}

fn one() -> usize {
    1
}

impl FieldSpec {
    pub fn build(&self) -> Result<Field> {
        let modulus = self.modulus.as_ref().map(|c| Poly::from_codes(c));
        Field::make_extension(self.p, self.m, modulus.as_ref())
    }

    pub fn of(field: &Field) -> FieldSpec {
        let m = field.degree();
        FieldSpec {
            p: field.characteristic(),
            m,
            modulus: (m > 1).then(|| field.modulus().codes()),
        }
    }
}

/// A place named in a configuration.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PlaceRef {
    Id(PlaceId),
    /// A rational point; on the projective line only the x-coordinate is used.
    Point { point: Vec<u32> },
}

impl PlaceRef {
    pub fn resolve(&self, curve: &Curve) -> Result<Place> {
        match self {
            PlaceRef::Id(id) => curve.place(id),
            PlaceRef::Point { point } => {
                let f = curve.field();
                let coord = |i: usize| -> Result<Elem> {
                    let c = point.get(i).ok_or_else(|| Error::InvalidArgument(format!("point {point:?} is too short")))?;
                    f.elem(*c)
                };
                let x = coord(0)?;
                if curve.is_line() {
                    let p = Poly::new(vec![f.neg(x), Elem::ONE]);
                    return Ok(curve.places_above(&p)?.remove(0));
                }
                curve.place_at(x, coord(1)?)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DivisorSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub place: Option<PlaceRef>,
    #[serde(default)]
    pub multiplicity: i64,
    /// Order at the place at infinity.
    #[serde(default)]
    pub infinity: i64,
}

impl DivisorSpec {
    pub fn build(&self, curve: &Curve) -> Result<Divisor> {
        let mut d = Divisor::zero();
        if let Some(p) = &self.place {
            d.add_term(p.resolve(curve)?, self.multiplicity);
        }
        if self.infinity != 0 {
            d.add_term(curve.infinity(), self.infinity);
        }
        Ok(d)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RatSpec {
    pub num: Vec<u32>,
    #[serde(default = "unit")]
    pub den: Vec<u32>,
}

fn unit() -> Vec<u32> {
    vec![1]
}

impl RatSpec {
    fn build(&self, f: &Field) -> Result<RatFn> {
        for c in self.num.iter().chain(&self.den) {
            f.elem(*c)?;
        }
        RatFn::new(Poly::from_codes(&self.num), Poly::from_codes(&self.den), f)
    }

    pub fn of(r: &RatFn) -> RatSpec {
        RatSpec { num: r.num().codes(), den: r.den().codes() }
    }
}

/// A function as text or as `a + b*y` with `a`, `b` in `F_q(x)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FunctionSpec {
    Text(String),
    Parts {
        a: RatSpec,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        b: Option<RatSpec>,
    },
}

impl FunctionSpec {
    pub fn build(&self, curve: &Curve, defs: &[(String, String)]) -> Result<CurveFunction> {
        let f = curve.field();
        let g = match self {
            FunctionSpec::Text(t) => parse_function(t, curve, &parse_defs(defs, curve)?)?,
            FunctionSpec::Parts { a, b } => CurveFunction::new(
                a.build(f)?,
                b.as_ref().map(|b| b.build(f)).transpose()?.unwrap_or_else(RatFn::zero),
            ),
        };
        curve.check_function(&g)?;
        Ok(g)
    }

    pub fn of(g: &CurveFunction) -> FunctionSpec {
        FunctionSpec::Parts {
            a: RatSpec::of(&g.a),
            b: (!g.b.is_zero()).then(|| RatSpec::of(&g.b)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PlacesSpec {
    /// `"auto"`: the first `N` rational places outside the support of `D`.
    Auto(AutoTag),
    List(Vec<PlaceRef>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AutoTag {
    Auto,
}

impl Default for PlacesSpec {
    fn default() -> Self {
        PlacesSpec::Auto(AutoTag::Auto)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BasisDSpec {
    Named(BasisDTag),
    List(Vec<FunctionSpec>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BasisDTag {
    AutoEchelon,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SupplementSpec {
    Named(SupplementTag),
    List(Vec<FunctionSpec>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SupplementTag {
    Kernel,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BasisSpec {
    /// Named helper expressions, e.g. `[["f", "x^2+x+w"]]`; later names may use earlier ones.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub defs: Vec<(String, String)>,
    #[serde(default = "auto_echelon")]
    pub d: BasisDSpec,
    #[serde(default = "kernel")]
    pub supplement: SupplementSpec,
}

fn auto_echelon() -> BasisDSpec {
    BasisDSpec::Named(BasisDTag::AutoEchelon)
}

fn kernel() -> SupplementSpec {
    SupplementSpec::Named(SupplementTag::Kernel)
}

impl Default for BasisSpec {
    fn default() -> Self {
        BasisSpec { defs: Vec::new(), d: auto_echelon(), supplement: kernel() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub field: FieldSpec,
    pub curve: Model,
    pub q_place: PlaceRef,
    pub divisor: DivisorSpec,
    #[serde(default)]
    pub places: PlacesSpec,
    #[serde(default)]
    pub basis: BasisSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub search: Option<SearchConfig>,
    #[serde(default)]
    pub free_minus_one: bool,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<RunConfig> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn count_rule(&self) -> CountRule {
        CountRule { free_minus_one: self.free_minus_one }
    }

    pub fn curve(&self) -> Result<Curve> {
        let field = self.field.build()?;
        Curve::from_model(field, self.curve.clone())
    }

    /// Assemble and check the instance this configuration describes.
    pub fn build(&self) -> Result<CcmaInstance> {
        let curve = self.curve()?;
        let q = self.q_place.resolve(&curve)?;
        let divisor = self.divisor.build(&curve)?;
        let n = q.degree();
        let big_n = 2 * n + curve.genus() as usize - 1;
        let places = match &self.places {
            PlacesSpec::Auto(_) => {
                let avail: Vec<Place> = curve
                    .rational_places()
                    .into_iter()
                    .filter(|p| divisor.order(p.id()) == 0)
                    .collect();
                if avail.len() < big_n {
                    return Err(Error::Hypothesis(format!(
                        "only {} rational places outside supp D, need {big_n}",
                        avail.len()
                    )));
                }
                avail[..big_n].to_vec()
            }
            PlacesSpec::List(list) => list.iter().map(|p| p.resolve(&curve)).collect::<Result<Vec<_>>>()?,
        };
        let defs = &self.basis.defs;
        let bd = match &self.basis.d {
            BasisDSpec::Named(BasisDTag::AutoEchelon) => rr_space(&curve, &divisor)?.functions,
            BasisDSpec::List(l) => l.iter().map(|g| g.build(&curve, defs)).collect::<Result<Vec<_>>>()?,
        };
        let sup = match &self.basis.supplement {
            SupplementSpec::Named(SupplementTag::Kernel) => {
                let b2d = rr_space(&curve, &divisor.scale(2))?;
                kernel_supplement(&curve, &q, &rr_space(&curve, &divisor)?.functions, &b2d.functions)?
            }
            SupplementSpec::List(l) => l.iter().map(|g| g.build(&curve, defs)).collect::<Result<Vec<_>>>()?,
        };
        CcmaInstance::build(&curve, &divisor, &q, &places, &bd, &sup)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const BASELINE: &str = r#"{
        "field": {"p": 2, "m": 2},
        "curve": {"model": "weierstrass", "a": [0, 0, 1, 0, 1]},
        "q_place": {"poly": [2, 2, 2, 1, 1], "branch": 1},
        "divisor": {"place": {"poly": [2, 1, 1]}, "multiplicity": 1}
    }"#;

    #[test]
    fn minimal_config_builds() {
        let cfg = RunConfig::from_json(BASELINE).unwrap();
        let inst = cfg.build().unwrap();
        assert_eq!(inst.n(), 4);
        assert_eq!(inst.big_n(), 8);
        assert!(inst.is_kernel_type());
        let again: RunConfig = serde_json::from_str(&serde_json::to_string(&cfg).unwrap()).unwrap();
        assert_eq!(again, cfg);
    }

    #[test]
    fn place_refs() {
        let cfg = RunConfig::from_json(BASELINE).unwrap();
        let c = cfg.curve().unwrap();
        let inf: PlaceRef = serde_json::from_str(r#""infinity""#).unwrap();
        assert!(inf.resolve(&c).unwrap().is_infinite());
        let pt: PlaceRef = serde_json::from_str(r#"{"point": [0, 2]}"#).unwrap();
        assert_eq!(pt.resolve(&c).unwrap().point(), Some((Elem(0), Elem(2))));
        let bad: PlaceRef = serde_json::from_str(r#"{"point": [0, 0]}"#).unwrap();
        assert!(bad.resolve(&c).is_err());
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let text = BASELINE.replace("\"q_place\"", "\"extra\": 1, \"q_place\"");
        assert!(RunConfig::from_json(&text).is_err());
    }

    #[test]
    fn structured_and_text_functions_agree() {
        let cfg = RunConfig::from_json(BASELINE).unwrap();
        let c = cfg.curve().unwrap();
        let defs = vec![("f".to_string(), "x^2+x+w".to_string())];
        let t = FunctionSpec::Text("w2*y/f".into()).build(&c, &defs).unwrap();
        let s = FunctionSpec::of(&t);
        assert_eq!(s.build(&c, &[]).unwrap(), t);
    }
}
