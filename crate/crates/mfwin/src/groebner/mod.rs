//! Gröbner bases, normal forms, syzygies and subquotient presentations.

mod gb;
pub mod hilbert;
pub mod order;
pub mod subquotient;
pub mod syz;

pub use gb::{buchberger, buchberger_with, GbOptions, GroebnerBasis, SubmoduleGens};
pub use hilbert::{for_each_standard_monomial, DEFAULT_DEGREE_CAP};
pub use order::{ModuleOrder, MonomialOrder, OrderKind};
pub use subquotient::{
    eliminate_units, present_span, prune_generators, subquotient, subquotient_labeled, BaseRing,
    GradedMatrix, PresentationJson, SubquotientPresentation,
};
pub use syz::{combine, element_degree, is_homogeneous_element, syzygies, syzygies_with};

use crate::error::Result;
use crate::exactalg::Poly;

/// Normal form of `v` with respect to `gb`.
pub fn normal_form(v: &[Poly], gb: &GroebnerBasis) -> Result<Vec<Poly>> {
    gb.normal_form(v)
}

#[cfg(test)]
mod tests;
