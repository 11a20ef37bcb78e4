//! Finite interpretations of clause sets: a clause checker, well-foundedness
//! utilities, witness construction from the finite-state truth, and an
//! exhaustive model search.

pub mod check;
pub mod enumerate;
pub mod relation;
pub(crate) mod search;
pub mod wf;
pub mod witness;

pub use check::{check_clause, check_clause_set, is_model, Countermodel, Failure};
pub use enumerate::{count_models, enumerate_interpretations, EnumOptions, Enumeration, ModelCount};
pub use relation::{Interpretation, Relation};
pub use wf::{check_dwf, is_well_founded, transitive_closure};
pub use witness::{compose_witness, compose_witness_from, problem_system, witness_rule6, witness_rule7};
