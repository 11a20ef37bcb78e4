//! CTL* state and path formulas with fair and non-fair path quantifiers.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::formula::Formula;

/// Path quantifiers. `Ef`/`Af` range over fair paths only.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PathQuant {
    E,
    A,
    Ef,
    Af,
}

impl PathQuant {
    pub fn is_fair(self) -> bool {
        matches!(self, PathQuant::Ef | PathQuant::Af)
    }

    pub fn is_universal(self) -> bool {
        matches!(self, PathQuant::A | PathQuant::Af)
    }

    pub fn fair(self) -> PathQuant {
        match self {
            PathQuant::E | PathQuant::Ef => PathQuant::Ef,
            PathQuant::A | PathQuant::Af => PathQuant::Af,
        }
    }

    pub fn dual(self) -> PathQuant {
        match self {
            PathQuant::E => PathQuant::A,
            PathQuant::A => PathQuant::E,
            PathQuant::Ef => PathQuant::Af,
            PathQuant::Af => PathQuant::Ef,
        }
    }

    pub fn keyword(self) -> &'static str {
        match self {
            PathQuant::E => "E",
            PathQuant::A => "A",
            PathQuant::Ef => "Ef",
            PathQuant::Af => "Af",
        }
    }
}

/// A state formula.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum StateFormula {
    Assert(Formula),
    And(Box<StateFormula>, Box<StateFormula>),
    Or(Box<StateFormula>, Box<StateFormula>),
    /// Only present before normalization.
    Not(Box<StateFormula>),
    Quant(PathQuant, Arc<PathFormula>),
}

/// A path formula.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PathFormula {
    State(Box<StateFormula>),
    X(Box<PathFormula>),
    G(Box<PathFormula>),
    /// Surface sugar for `true U ψ`; removed by normalization.
    F(Box<PathFormula>),
    U(Box<PathFormula>, Box<PathFormula>),
    And(Box<PathFormula>, Box<PathFormula>),
    Or(Box<PathFormula>, Box<PathFormula>),
    /// Only present before normalization.
    Not(Box<PathFormula>),
}

impl StateFormula {
    pub fn assertion(f: Formula) -> Self {
        StateFormula::Assert(f)
    }

    pub fn and(a: StateFormula, b: StateFormula) -> Self {
        StateFormula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: StateFormula, b: StateFormula) -> Self {
        StateFormula::Or(Box::new(a), Box::new(b))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(a: StateFormula) -> Self {
        StateFormula::Not(Box::new(a))
    }

    pub fn quant(q: PathQuant, p: PathFormula) -> Self {
        StateFormula::Quant(q, Arc::new(p))
    }

    /// Collapse a quantifier-free boolean combination of assertions into one
    /// assertion. Returns `None` when a path quantifier occurs.
    pub fn as_assertion(&self) -> Option<Formula> {
        match self {
            StateFormula::Assert(f) => Some(f.clone()),
            StateFormula::And(a, b) => Some(Formula::and([a.as_assertion()?, b.as_assertion()?])),
            StateFormula::Or(a, b) => Some(Formula::or([a.as_assertion()?, b.as_assertion()?])),
            StateFormula::Not(a) => Some(Formula::not(a.as_assertion()?)),
            StateFormula::Quant(..) => None,
        }
    }

    pub fn has_quantifier(&self) -> bool {
        match self {
            StateFormula::Assert(_) => false,
            StateFormula::And(a, b) | StateFormula::Or(a, b) => a.has_quantifier() || b.has_quantifier(),
            StateFormula::Not(a) => a.has_quantifier(),
            StateFormula::Quant(..) => true,
        }
    }

    /// `Qψ` or `Q_f ψ` with no path quantifier inside `ψ`.
    pub fn is_basic(&self) -> bool {
        match self {
            StateFormula::Quant(_, p) => !p.has_quantifier(),
            _ => false,
        }
    }

    /// Number of path quantifiers.
    pub fn quantifier_count(&self) -> usize {
        match self {
            StateFormula::Assert(_) => 0,
            StateFormula::And(a, b) | StateFormula::Or(a, b) => a.quantifier_count() + b.quantifier_count(),
            StateFormula::Not(a) => a.quantifier_count(),
            StateFormula::Quant(_, p) => 1 + p.quantifier_count(),
        }
    }

    /// Number of temporal operators (X, G, F, U).
    pub fn temporal_count(&self) -> usize {
        match self {
            StateFormula::Assert(_) => 0,
            StateFormula::And(a, b) | StateFormula::Or(a, b) => a.temporal_count() + b.temporal_count(),
            StateFormula::Not(a) => a.temporal_count(),
            StateFormula::Quant(_, p) => p.temporal_count(),
        }
    }

    /// Number of AST nodes, counting each assertion leaf as one.
    pub fn size(&self) -> usize {
        match self {
            StateFormula::Assert(_) => 1,
            StateFormula::And(a, b) | StateFormula::Or(a, b) => 1 + a.size() + b.size(),
            StateFormula::Not(a) => 1 + a.size(),
            StateFormula::Quant(_, p) => 1 + p.size(),
        }
    }

    /// Pre-order (outermost first, left to right) search over state subformulas,
    /// including those nested in path formulas.
    pub fn find_preorder(&self, pred: &dyn Fn(&StateFormula) -> bool) -> Option<&StateFormula> {
        if pred(self) {
            return Some(self);
        }
        match self {
            StateFormula::Assert(_) => None,
            StateFormula::And(a, b) | StateFormula::Or(a, b) => a.find_preorder(pred).or_else(|| b.find_preorder(pred)),
            StateFormula::Not(a) => a.find_preorder(pred),
            StateFormula::Quant(_, p) => p.find_state_preorder(pred),
        }
    }

    pub fn contains(&self, target: &StateFormula) -> bool {
        self.find_preorder(&|s| s == target).is_some()
    }

    /// Replace every occurrence of `target` by `replacement`.
    pub fn substitute(&self, target: &StateFormula, replacement: &StateFormula) -> StateFormula {
        if self == target {
            return replacement.clone();
        }
        match self {
            StateFormula::Assert(_) => self.clone(),
            StateFormula::And(a, b) => {
                StateFormula::and(a.substitute(target, replacement), b.substitute(target, replacement))
            }
            StateFormula::Or(a, b) => {
                StateFormula::or(a.substitute(target, replacement), b.substitute(target, replacement))
            }
            StateFormula::Not(a) => StateFormula::not(a.substitute(target, replacement)),
            StateFormula::Quant(q, p) => StateFormula::quant(*q, p.substitute_state(target, replacement)),
        }
    }
}

impl PathFormula {
    pub fn state(s: StateFormula) -> Self {
        PathFormula::State(Box::new(s))
    }

    pub fn assertion(f: Formula) -> Self {
        PathFormula::State(Box::new(StateFormula::Assert(f)))
    }

    pub fn x(p: PathFormula) -> Self {
        PathFormula::X(Box::new(p))
    }

    pub fn g(p: PathFormula) -> Self {
        PathFormula::G(Box::new(p))
    }

    pub fn f(p: PathFormula) -> Self {
        PathFormula::F(Box::new(p))
    }

    pub fn u(a: PathFormula, b: PathFormula) -> Self {
        PathFormula::U(Box::new(a), Box::new(b))
    }

    pub fn and(a: PathFormula, b: PathFormula) -> Self {
        PathFormula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: PathFormula, b: PathFormula) -> Self {
        PathFormula::Or(Box::new(a), Box::new(b))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(a: PathFormula) -> Self {
        PathFormula::Not(Box::new(a))
    }

    /// Collapse a path formula without temporal operators or quantifiers
    /// into an assertion.
    pub fn as_assertion(&self) -> Option<Formula> {
        match self {
            PathFormula::State(s) => s.as_assertion(),
            PathFormula::And(a, b) => Some(Formula::and([a.as_assertion()?, b.as_assertion()?])),
            PathFormula::Or(a, b) => Some(Formula::or([a.as_assertion()?, b.as_assertion()?])),
            PathFormula::Not(a) => Some(Formula::not(a.as_assertion()?)),
            PathFormula::X(_) | PathFormula::G(_) | PathFormula::F(_) | PathFormula::U(..) => None,
        }
    }

    pub fn has_quantifier(&self) -> bool {
        match self {
            PathFormula::State(s) => s.has_quantifier(),
            PathFormula::X(a) | PathFormula::G(a) | PathFormula::F(a) | PathFormula::Not(a) => a.has_quantifier(),
            PathFormula::U(a, b) | PathFormula::And(a, b) | PathFormula::Or(a, b) => {
                a.has_quantifier() || b.has_quantifier()
            }
        }
    }

    pub fn quantifier_count(&self) -> usize {
        match self {
            PathFormula::State(s) => s.quantifier_count(),
            PathFormula::X(a) | PathFormula::G(a) | PathFormula::F(a) | PathFormula::Not(a) => a.quantifier_count(),
            PathFormula::U(a, b) | PathFormula::And(a, b) | PathFormula::Or(a, b) => {
                a.quantifier_count() + b.quantifier_count()
            }
        }
    }

    pub fn temporal_count(&self) -> usize {
        match self {
            PathFormula::State(s) => s.temporal_count(),
            PathFormula::X(a) | PathFormula::G(a) | PathFormula::F(a) => 1 + a.temporal_count(),
            PathFormula::Not(a) => a.temporal_count(),
            PathFormula::U(a, b) => 1 + a.temporal_count() + b.temporal_count(),
            PathFormula::And(a, b) | PathFormula::Or(a, b) => a.temporal_count() + b.temporal_count(),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            PathFormula::State(s) => s.size(),
            PathFormula::X(a) | PathFormula::G(a) | PathFormula::F(a) | PathFormula::Not(a) => 1 + a.size(),
            PathFormula::U(a, b) | PathFormula::And(a, b) | PathFormula::Or(a, b) => 1 + a.size() + b.size(),
        }
    }

    pub fn find_state_preorder(&self, pred: &dyn Fn(&StateFormula) -> bool) -> Option<&StateFormula> {
        match self {
            PathFormula::State(s) => s.find_preorder(pred),
            PathFormula::X(a) | PathFormula::G(a) | PathFormula::F(a) | PathFormula::Not(a) => {
                a.find_state_preorder(pred)
            }
            PathFormula::U(a, b) | PathFormula::And(a, b) | PathFormula::Or(a, b) => {
                a.find_state_preorder(pred).or_else(|| b.find_state_preorder(pred))
            }
        }
    }

    pub fn substitute_state(&self, target: &StateFormula, replacement: &StateFormula) -> PathFormula {
        let s = |p: &PathFormula| Box::new(p.substitute_state(target, replacement));
        match self {
            PathFormula::State(st) => PathFormula::State(Box::new(st.substitute(target, replacement))),
            PathFormula::X(a) => PathFormula::X(s(a)),
            PathFormula::G(a) => PathFormula::G(s(a)),
            PathFormula::F(a) => PathFormula::F(s(a)),
            PathFormula::Not(a) => PathFormula::Not(s(a)),
            PathFormula::U(a, b) => PathFormula::U(s(a), s(b)),
            PathFormula::And(a, b) => PathFormula::And(s(a), s(b)),
            PathFormula::Or(a, b) => PathFormula::Or(s(a), s(b)),
        }
    }

    /// Replace every occurrence of the path subformula `target`.
    pub fn substitute_path(&self, target: &PathFormula, replacement: &PathFormula) -> PathFormula {
        if self == target {
            return replacement.clone();
        }
        let s = |p: &PathFormula| Box::new(p.substitute_path(target, replacement));
        match self {
            PathFormula::State(_) => self.clone(),
            PathFormula::X(a) => PathFormula::X(s(a)),
            PathFormula::G(a) => PathFormula::G(s(a)),
            PathFormula::F(a) => PathFormula::F(s(a)),
            PathFormula::Not(a) => PathFormula::Not(s(a)),
            PathFormula::U(a, b) => PathFormula::U(s(a), s(b)),
            PathFormula::And(a, b) => PathFormula::And(s(a), s(b)),
            PathFormula::Or(a, b) => PathFormula::Or(s(a), s(b)),
        }
    }

    /// Post-order, left to right, search over path subformulas. A match that
    /// has no matching descendant is therefore innermost.
    pub fn find_postorder(&self, pred: &dyn Fn(&PathFormula) -> bool) -> Option<&PathFormula> {
        let inner = match self {
            PathFormula::State(_) => None,
            PathFormula::X(a) | PathFormula::G(a) | PathFormula::F(a) | PathFormula::Not(a) => a.find_postorder(pred),
            PathFormula::U(a, b) | PathFormula::And(a, b) | PathFormula::Or(a, b) => {
                a.find_postorder(pred).or_else(|| b.find_postorder(pred))
            }
        };
        inner.or_else(|| if pred(self) { Some(self) } else { None })
    }
}

/// Replace every occurrence of `target` in `phi`, failing when there is none.
pub fn substitute_state_subformula(
    phi: &StateFormula,
    target: &StateFormula,
    replacement: &StateFormula,
) -> crate::Result<StateFormula> {
    if !phi.contains(target) {
        return Err(crate::Error::Formula("substitution target does not occur in the formula".into()));
    }
    Ok(phi.substitute(target, replacement))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{Sort, Var};

    fn c(name: &str) -> Formula {
        Formula::Bool(Var::new(name, Sort::Bool))
    }

    #[test]
    fn basic_formulas() {
        let ag = StateFormula::quant(PathQuant::A, PathFormula::g(PathFormula::assertion(c("c"))));
        assert!(ag.is_basic());
        let nested = StateFormula::quant(
            PathQuant::A,
            PathFormula::g(PathFormula::state(StateFormula::quant(
                PathQuant::E,
                PathFormula::x(PathFormula::assertion(c("c"))),
            ))),
        );
        assert!(!nested.is_basic());
        assert!(!StateFormula::Assert(c("c")).is_basic());
    }

    #[test]
    fn substitution() {
        let ag = StateFormula::quant(PathQuant::A, PathFormula::g(PathFormula::assertion(c("c"))));
        let aux = StateFormula::Assert(c("aux"));
        assert_eq!(ag.substitute(&ag, &aux), aux);
        let both = StateFormula::and(aux.clone(), aux.clone());
        let cc = StateFormula::Assert(c("c"));
        assert_eq!(both.substitute(&aux, &cc), StateFormula::and(cc.clone(), cc));
        assert_eq!(both.substitute(&ag, &ag), both);
    }
}
