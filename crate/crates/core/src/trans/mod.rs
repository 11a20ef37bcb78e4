//! The translation from verification problems to existential Horn clauses.
//!
//! [`translate`] applies the rules recursively with a fixed selection
//! order: the leftmost-outermost proper basic subformula is extracted
//! first (all of them before any subproblem is translated), and among
//! temporal operators with assertion operands the leftmost-innermost one is
//! eliminated first. The result is a pure function of its input, fresh
//! names included.
//!
//! After all extractions the remaining formula is a positive boolean
//! combination of assertions and `aux` atoms. It is translated like a bare
//! assertion, `init → combination`, with atoms in the head.

pub mod bound;
pub mod driver;
pub mod namer;
pub mod normalize;

pub use bound::clause_count_bound;
pub use driver::{
    eligible_temporal, extend_problem, proper_basic_subformula, rule1_split, rule2_defair, translate, Problem,
    Temporal, Trace, Translation, Translator,
};
pub use namer::{Family, FreshNamer};
pub use normalize::{atom_dnf, desugar_head_disjunction, ClauseBuilder, Conj, NegPair, RawClause, SelDef};
