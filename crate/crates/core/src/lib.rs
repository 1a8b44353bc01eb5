//! Canonical forms and separating invariants for pairs of matrices whose
//! first matrix has simple spectrum, over ℚ or a prime field.

pub mod canonical;
pub mod cli;
pub mod error;
pub mod field;
pub mod glenum;
pub mod idempotents;
pub mod io;
pub mod linalg;
pub mod ncpoly;
pub mod separators;
pub mod staircase;
pub mod stargraph;

pub use canonical::{canonicalize, orbit_eq_brute, orbit_eq_canonical, CanonResult, CanonicalPair, MatrixPair};
pub use error::{Error, Result};
pub use field::{FieldElem, FieldSpec};
pub use linalg::Mat;
pub use ncpoly::{NcExpr, NcPoly, Word};
pub use separators::{orbit_eq_by_ranks, type_separation, SeparationReport, Verdict};
