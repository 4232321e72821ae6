//! Reformulation of constrained polynomial integer programs into unconstrained
//! binary problems, and a statevector QAOA loop to solve them.
//!
//! - [`pbf`]: multilinear pseudo-Boolean polynomials.
//! - [`model`]: integer programs and their binary encoding.
//! - [`reformulate`]: penalty functions, quadratization and slack encodings.
//! - [`extbp`]: the extended bin packing problem and its two encodings.
//! - [`qaoa`]: cost tables, statevector evolution, sampling and the optimizer loop.
//! - [`harness`]: experiment batches, verification reports and file formats.

pub mod error;
pub mod extbp;
pub mod harness;
pub mod model;
pub mod pbf;
pub mod qaoa;
pub mod reformulate;

pub use error::{Error, Result};

pub use extbp::{Classification, EbpAssignment, EbpInstance, Encoding, Formulation};
pub use qaoa::{CostTable, QaoaConfig, RunRecord, StateVector};
pub use model::{BinCodec, Constraint, IntPolynomial, IntVar, Problem, Relation};
pub use pbf::{Monomial, Polynomial, VarId};

pub use reformulate::{PenaltyKind, PenaltyTerm, Reformulation, SubstitutionMap};
