//! Parsing and printing of programs, formulas and domains, plus negation
//! normal form.

pub mod convert;
pub mod expr;
pub mod json;
pub mod lexer;
pub mod nnf;
pub mod program;

pub use convert::Scope;
pub use nnf::{is_nnf, negate_path, path_to_nnf, to_nnf};
pub use program::{
    parse_domains, parse_partial_program, parse_program, print_domains, print_partial_program, print_program,
};

use crate::syntax::{Formula, StateFormula, Var};
use crate::Result;

/// Parse a CTL* state formula over the given program variables.
pub fn parse_formula(src: &str, vars: &[Var]) -> Result<StateFormula> {
    Scope::with_vars(vars, 0).state(&expr::parse_expr(src)?)
}

/// Parse an assertion over the given variables and up to `max_primes` primes.
pub fn parse_assertion(src: &str, vars: &[Var], max_primes: u8) -> Result<Formula> {
    Scope::with_vars(vars, max_primes).formula(&expr::parse_expr(src)?)
}
