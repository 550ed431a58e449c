//! Exact fields, gradings and sparse polynomials.

pub mod field;
pub mod grading;
pub mod linalg;
pub mod poly;
pub mod upoly;

pub use field::{is_prime_u64, Field, FieldElem};
pub use grading::{
    Degree, GradingJson, GradingSpec, Involution, RConvention, TorusAction, VarSpec, MAX_VARS,
};
pub use linalg::Matrix;
pub use poly::{same_ring, Mono, MultiDegree, Poly, PolyJson, Ring, RingRef, TermJson};
pub use upoly::UPoly;
