//! Chudnovsky-type interpolation algorithms for multiplication in `F_{q^n}`,
//! built from places on the projective line or an elliptic curve, and a search
//! over bases of the Riemann-Roch space that lowers their scalar complexity.

pub mod algebra;
pub mod config;
pub mod curve;
pub mod document;
mod error;
pub mod expr;
pub mod instance;
pub mod optimizer;
pub mod riemann_roch;

pub use algebra::{Elem, Field, Matrix, Poly};
pub use curve::{Curve, CurveFunction, Divisor, Place, PlaceId, RatFn};
pub use config::RunConfig;
pub use document::InstanceDocument;
pub use error::{Error, Result};
pub use instance::{CcmaInstance, ComplexityReport, CountRule};
pub use optimizer::{optimize, Criterion, OptimizationResult, Scope, SearchConfig, Strategy};

#[cfg(test)]
pub(crate) mod test_support {
    use crate::algebra::{Elem, Field};
    use crate::curve::Curve;

    pub fn f4() -> Field {
        Field::make_extension(2, 2, None).unwrap()
    }

    pub fn case_study_curve() -> Curve {
        Curve::weierstrass(f4(), [Elem(0), Elem(0), Elem(1), Elem(0), Elem(1)]).unwrap()
    }
}
