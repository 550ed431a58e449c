//! Exact computer algebra for graded matrix factorizations of quadric-bundle
//! superpotentials, variation-of-GIT window combinatorics and Clifford algebras.

pub mod clifford;
pub mod error;
pub mod exactalg;
pub mod groebner;
pub mod homalg;
pub mod mf;
pub mod windows;

pub use error::{Error, Result};
pub use exactalg::{Degree, Field, FieldElem, GradingSpec, Mono, Poly, Ring, RingRef, VarSpec};
pub use mf::{
    DgModule, Generator, MatrixFactorization, SigmaStructure, ValidationReport, WeightMultiset,
};
