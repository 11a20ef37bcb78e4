//! Finite-state ground truth: explicit expansion of programs over finite
//! domains and a fair CTL* model checker.

pub mod check;
pub mod gba;
pub mod lasso;
pub mod system;

pub use check::{
    check_fair_quantified, complement, fair_states, model_check, model_check_with, Checker, Engine, ModelCheck,
};
pub use system::{show_value, valuations, AtomEval, FiniteSystem, DEFAULT_STATE_CAP};
