//! Domain types shared by every module: sorts, values, variables, terms,
//! assertions, programs, CTL* formulas and clauses.

pub mod clause;
pub mod ctl;
pub mod domain;
pub mod formula;
pub mod program;
pub mod term;
pub mod value;
pub mod var;

pub use clause::{Clause, ClauseSet, DwfClause, Provenance, RuleTag};
pub use ctl::{substitute_state_subformula, PathFormula, PathQuant, StateFormula};
pub use domain::Domains;
pub use formula::{Atom, Formula, PredSym};
pub use program::{Hole, PartialProgram, Program, VerificationProblem, PC};
pub use term::{CmpOp, Term};
pub use value::{fmt_rational, LocSort, Sort, Value};
pub use var::Var;
