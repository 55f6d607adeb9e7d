//! Exact lattice geometry for empty lattice simplices in dimension 4.
//!
//! The crate is organised bottom-up:
//!
//! * [`exactalg`] integer matrices, Hermite/Smith normal forms, superlattices
//!   `Z^d ⊆ D ⊆ (1/M)Z^d` and their quotient groups.
//! * [`simplex`] simplex representations, standard form, the emptiness
//!   (terminality) test and canonical forms.
//! * [`width`] exact lattice width with optimality certificates.
//! * [`fpdigits`] digit sums over `Z_p` and exhaustive subspace checks.
//! * [`mmm`] the stable quintuple table, family instances and width-2
//!   certificates derived from linear relations.
//! * [`survey`] determinant-bounded enumeration of empty cyclic simplices.
//!
//! All arithmetic is exact. Fixed-size operations that could overflow are
//! checked and surface as [`Error::Overflow`].

pub mod arith;
pub mod error;
pub mod exactalg;
pub mod fpdigits;
pub mod mmm;
pub mod simplex;
pub mod survey;
pub mod width;

pub use error::{Error, Result};
pub use exactalg::{
    coset_representatives, dual_membership, group_structure, hermite_normal_form,
    smith_normal_form, FracVec, GroupStructure, IntMatrix, SuperLattice,
};
pub use fpdigits::{FpSubspace, FpVector, LemmaReport};
pub use mmm::{FamilyInstance, FamilySource, FamilyTag, ParametricFamily, Quintuple};
pub use simplex::{
    canonical_form, dim5_counterexample, is_empty, is_empty_general, to_standard_form,
    CanonicalForm, CyclicSimplexSpec, Emptiness, GeneralSimplex, StandardForm, Witness,
};
pub use survey::{SurveyConfig, SurveyRecord, SurveySummary};
pub use width::{functional_from_relation, width, width_general, WidthCertificate};
