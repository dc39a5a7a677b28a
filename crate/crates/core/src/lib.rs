//! Finiteness of `[S(K)_p : CC(K)_p]` for abelian number fields.
//!
//! `K` is described by its conductor `m` and the subgroup `H ≤ (Z/mZ)*`
//! fixing it. All Galois groups are modelled inside unit groups `(Z/nZ)*`,
//! so the whole decision reduces to finite computations with residues.

pub mod arith;
pub mod context;
pub mod corpus;
pub mod decision;
pub mod error;
pub mod field;
pub mod fixtures;
pub mod local;
pub mod report;
pub mod residue;

pub use error::{Error, Result};
pub use field::FieldSpec;
pub use residue::{ResidueSubgroup, UnitClass, UnitGroup};
