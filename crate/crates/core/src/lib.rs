//! Translation of CTL* verification and hole-filling synthesis problems for
//! fair transition systems into existential Horn clauses, together with a
//! finite-state toolkit to validate translations: an explicit-state fair
//! CTL* model checker, a finite-domain clause checker, witness builders and
//! an exhaustive interpretation enumerator.

pub mod compiled;
pub mod emit;
pub mod error;
pub mod fixtures;
pub mod frontend;
pub mod interp;
pub mod oracle;
pub mod syntax;
pub mod synthesis;
pub mod trans;

pub use error::{Error, Result};
