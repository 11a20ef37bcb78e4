//! Negation normal form for CTL* formulas.
//!
//! Negations are pushed down to assertions, `F` is rewritten to `true U ·`,
//! and a negated until becomes `(¬b) U (¬a ∧ ¬b) ∨ G ¬b`, which stays
//! inside the grammar without a release operator.

use crate::syntax::{Formula, PathFormula, StateFormula};

/// Normalize a state formula.
pub fn to_nnf(s: &StateFormula) -> StateFormula {
    state(s, true)
}

/// Normalize a path formula.
pub fn path_to_nnf(p: &PathFormula) -> PathFormula {
    path(p, true)
}

/// The normal form of `¬p`.
pub fn negate_path(p: &PathFormula) -> PathFormula {
    path(p, false)
}

fn state(s: &StateFormula, pos: bool) -> StateFormula {
    match s {
        StateFormula::Assert(f) => StateFormula::Assert(if pos { f.clone() } else { Formula::not(f.clone()) }),
        StateFormula::And(a, b) if pos => StateFormula::and(state(a, true), state(b, true)),
        StateFormula::And(a, b) => StateFormula::or(state(a, false), state(b, false)),
        StateFormula::Or(a, b) if pos => StateFormula::or(state(a, true), state(b, true)),
        StateFormula::Or(a, b) => StateFormula::and(state(a, false), state(b, false)),
        StateFormula::Not(a) => state(a, !pos),
        StateFormula::Quant(q, p) if pos => StateFormula::quant(*q, path(p, true)),
        StateFormula::Quant(q, p) => StateFormula::quant(q.dual(), path(p, false)),
    }
}

fn tt() -> PathFormula {
    PathFormula::assertion(Formula::True)
}

fn path(p: &PathFormula, pos: bool) -> PathFormula {
    match p {
        PathFormula::State(s) => PathFormula::state(state(s, pos)),
        PathFormula::X(a) => PathFormula::x(path(a, pos)),
        PathFormula::G(a) if pos => PathFormula::g(path(a, true)),
        PathFormula::G(a) => PathFormula::u(tt(), path(a, false)),
        PathFormula::F(a) if pos => PathFormula::u(tt(), path(a, true)),
        PathFormula::F(a) => PathFormula::g(path(a, false)),
        PathFormula::U(a, b) if pos => PathFormula::u(path(a, true), path(b, true)),
        PathFormula::U(a, b) => {
            let (na, nb) = (path(a, false), path(b, false));
            PathFormula::or(PathFormula::u(nb.clone(), PathFormula::and(na, nb.clone())), PathFormula::g(nb))
        }
        PathFormula::And(a, b) if pos => PathFormula::and(path(a, true), path(b, true)),
        PathFormula::And(a, b) => PathFormula::or(path(a, false), path(b, false)),
        PathFormula::Or(a, b) if pos => PathFormula::or(path(a, true), path(b, true)),
        PathFormula::Or(a, b) => PathFormula::and(path(a, false), path(b, false)),
        PathFormula::Not(a) => path(a, !pos),
    }
}

/// True when the formula is in negation normal form without `F`.
pub fn is_nnf(s: &StateFormula) -> bool {
    match s {
        StateFormula::Assert(_) => true,
        StateFormula::And(a, b) | StateFormula::Or(a, b) => is_nnf(a) && is_nnf(b),
        StateFormula::Not(_) => false,
        StateFormula::Quant(_, p) => path_is_nnf(p),
    }
}

fn path_is_nnf(p: &PathFormula) -> bool {
    match p {
        PathFormula::State(s) => is_nnf(s),
        PathFormula::X(a) | PathFormula::G(a) => path_is_nnf(a),
        PathFormula::U(a, b) | PathFormula::And(a, b) | PathFormula::Or(a, b) => path_is_nnf(a) && path_is_nnf(b),
        PathFormula::F(_) | PathFormula::Not(_) => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontend::parse_formula;
    use crate::syntax::{Sort, Var};

    fn vars() -> Vec<Var> {
        vec![Var::new("c", Sort::Bool), Var::new("pro", Sort::Int)]
    }

    #[test]
    fn dualities() {
        let f = parse_formula("!(A G c)", &vars()).unwrap();
        assert_eq!(to_nnf(&f).to_string(), "E (true U !c)");
        let g = parse_formula("A F G pro > 50", &vars()).unwrap();
        assert_eq!(to_nnf(&g).to_string(), "A (true U G pro > 50)");
        let n = parse_formula("!c", &vars()).unwrap();
        assert_eq!(to_nnf(&n), StateFormula::Assert(Formula::not(Formula::Bool(vars()[0].clone()))));
    }

    #[test]
    fn negated_until() {
        let f = parse_formula("!E(c U pro > 0)", &vars()).unwrap();
        assert_eq!(to_nnf(&f).to_string(), "A (!(pro > 0) U (!c & !(pro > 0)) | G !(pro > 0))");
        assert!(is_nnf(&to_nnf(&f)));
    }
}
