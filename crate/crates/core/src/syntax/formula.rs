//! Quantifier-free assertions, possibly mentioning predicate atoms.
//!
//! A formula without atoms is a plain assertion over program variables.
//! Atoms appear once the translation starts introducing auxiliary
//! predicates, and in synthesis where holes are predicates.

use std::collections::HashMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::term::{CmpOp, Term};
use super::value::Value;
use super::var::Var;

/// A predicate symbol with named, sorted parameter positions.
///
/// The parameters fix the arity, the sort of every position, and (through
/// their base names) the finite domain each position ranges over.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PredSym {
    pub name: Arc<str>,
    pub params: Vec<Var>,
}

impl PredSym {
    pub fn new(name: impl AsRef<str>, params: Vec<Var>) -> Arc<Self> {
        Arc::new(PredSym { name: Arc::from(name.as_ref()), params })
    }

    pub fn arity(&self) -> usize {
        self.params.len()
    }

    pub fn atom(self: &Arc<Self>, args: Vec<Var>) -> Atom {
        debug_assert_eq!(args.len(), self.params.len());
        Atom { pred: self.clone(), args }
    }

    /// The atom with the declared parameters as arguments.
    pub fn own_atom(self: &Arc<Self>) -> Atom {
        self.atom(self.params.clone())
    }
}

/// A predicate applied to variables.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Atom {
    pub pred: Arc<PredSym>,
    pub args: Vec<Var>,
}

impl Atom {
    pub fn map_vars(&self, f: &dyn Fn(&Var) -> Var) -> Atom {
        Atom { pred: self.pred.clone(), args: self.args.iter().map(f).collect() }
    }
}

/// An assertion.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Formula {
    True,
    False,
    /// A boolean variable used as a formula.
    Bool(Var),
    Cmp(CmpOp, Term, Term),
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    App(Atom),
}

impl Formula {
    pub fn cmp(op: CmpOp, a: Term, b: Term) -> Formula {
        Formula::Cmp(op, a, b)
    }

    pub fn eq(a: Term, b: Term) -> Formula {
        Formula::Cmp(CmpOp::Eq, a, b)
    }

    /// `a = b` for two variables of the same sort (boolean ones become `<->`).
    pub fn var_eq(a: &Var, b: &Var) -> Formula {
        if a.sort == super::value::Sort::Bool {
            Formula::iff(Formula::Bool(a.clone()), Formula::Bool(b.clone()))
        } else {
            Formula::eq(Term::Var(a.clone()), Term::Var(b.clone()))
        }
    }

    /// Conjunction that drops `true`, absorbs `false`, and avoids trivial nodes.
    pub fn and(parts: impl IntoIterator<Item = Formula>) -> Formula {
        let mut out = Vec::new();
        for p in parts {
            match p {
                Formula::True => {}
                Formula::False => return Formula::False,
                p => out.push(p),
            }
        }
        match out.len() {
            0 => Formula::True,
            1 => out.pop().unwrap(),
            _ => Formula::And(out),
        }
    }

    /// Disjunction that drops `false`, absorbs `true`, and avoids trivial nodes.
    pub fn or(parts: impl IntoIterator<Item = Formula>) -> Formula {
        let mut out = Vec::new();
        for p in parts {
            match p {
                Formula::False => {}
                Formula::True => return Formula::True,
                p => out.push(p),
            }
        }
        match out.len() {
            0 => Formula::False,
            1 => out.pop().unwrap(),
            _ => Formula::Or(out),
        }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        match f {
            Formula::True => Formula::False,
            Formula::False => Formula::True,
            Formula::Not(g) => *g,
            f => Formula::Not(Box::new(f)),
        }
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::Iff(Box::new(a), Box::new(b))
    }

    pub fn atom(a: Atom) -> Formula {
        Formula::App(a)
    }

    pub fn has_atoms(&self) -> bool {
        match self {
            Formula::App(_) => true,
            Formula::True | Formula::False | Formula::Bool(_) | Formula::Cmp(..) => false,
            Formula::Not(a) => a.has_atoms(),
            Formula::And(v) | Formula::Or(v) => v.iter().any(Formula::has_atoms),
            Formula::Implies(a, b) | Formula::Iff(a, b) => a.has_atoms() || b.has_atoms(),
        }
    }

    /// Free variables in order of first occurrence.
    pub fn vars(&self) -> Vec<Var> {
        let mut out = Vec::new();
        self.collect_vars(&mut out);
        out
    }

    pub fn collect_vars(&self, out: &mut Vec<Var>) {
        match self {
            Formula::True | Formula::False => {}
            Formula::Bool(v) => {
                if !out.contains(v) {
                    out.push(v.clone())
                }
            }
            Formula::Cmp(_, a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
            Formula::Not(a) => a.collect_vars(out),
            Formula::And(v) | Formula::Or(v) => v.iter().for_each(|f| f.collect_vars(out)),
            Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
            Formula::App(at) => {
                for v in &at.args {
                    if !out.contains(v) {
                        out.push(v.clone())
                    }
                }
            }
        }
    }

    pub fn collect_atoms<'a>(&'a self, out: &mut Vec<&'a Atom>) {
        match self {
            Formula::App(a) => out.push(a),
            Formula::True | Formula::False | Formula::Bool(_) | Formula::Cmp(..) => {}
            Formula::Not(a) => a.collect_atoms(out),
            Formula::And(v) | Formula::Or(v) => v.iter().for_each(|f| f.collect_atoms(out)),
            Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.collect_atoms(out);
                b.collect_atoms(out);
            }
        }
    }

    pub fn map_vars(&self, f: &dyn Fn(&Var) -> Var) -> Formula {
        match self {
            Formula::True | Formula::False => self.clone(),
            Formula::Bool(v) => Formula::Bool(f(v)),
            Formula::Cmp(op, a, b) => Formula::Cmp(*op, a.map_vars(f), b.map_vars(f)),
            Formula::Not(a) => Formula::Not(Box::new(a.map_vars(f))),
            Formula::And(v) => Formula::And(v.iter().map(|g| g.map_vars(f)).collect()),
            Formula::Or(v) => Formula::Or(v.iter().map(|g| g.map_vars(f)).collect()),
            Formula::Implies(a, b) => Formula::implies(a.map_vars(f), b.map_vars(f)),
            Formula::Iff(a, b) => Formula::iff(a.map_vars(f), b.map_vars(f)),
            Formula::App(at) => Formula::App(at.map_vars(f)),
        }
    }

    pub fn rename(&self, map: &HashMap<Var, Var>) -> Formula {
        self.map_vars(&|v| map.get(v).cloned().unwrap_or_else(|| v.clone()))
    }

    /// Add one prime to every variable: `c(v)` becomes `c(v')`.
    pub fn prime(&self) -> Formula {
        self.map_vars(&Var::primed)
    }

    /// Replace atoms for which `f` returns a formula.
    pub fn replace_atoms(&self, f: &dyn Fn(&Atom) -> Option<Formula>) -> Formula {
        match self {
            Formula::App(a) => f(a).unwrap_or_else(|| self.clone()),
            Formula::True | Formula::False | Formula::Bool(_) | Formula::Cmp(..) => self.clone(),
            Formula::Not(a) => Formula::Not(Box::new(a.replace_atoms(f))),
            Formula::And(v) => Formula::And(v.iter().map(|g| g.replace_atoms(f)).collect()),
            Formula::Or(v) => Formula::Or(v.iter().map(|g| g.replace_atoms(f)).collect()),
            Formula::Implies(a, b) => Formula::implies(a.replace_atoms(f), b.replace_atoms(f)),
            Formula::Iff(a, b) => Formula::iff(a.replace_atoms(f), b.replace_atoms(f)),
        }
    }

    /// Top-level conjuncts.
    pub fn conjuncts(&self) -> Vec<&Formula> {
        match self {
            Formula::And(v) => v.iter().flat_map(|f| f.conjuncts()).collect(),
            Formula::True => vec![],
            f => vec![f],
        }
    }

    /// Reference evaluator. `env` gives variable values, `atom` decides atoms.
    /// Arithmetic errors (division by zero) make the comparison false.
    pub fn eval(&self, env: &dyn Fn(&Var) -> Value, atom: &dyn Fn(&Atom) -> bool) -> bool {
        match self {
            Formula::True => true,
            Formula::False => false,
            Formula::Bool(v) => env(v) == Value::Bool(true),
            Formula::Cmp(op, a, b) => match (a.eval(env), b.eval(env)) {
                (Some(x), Some(y)) => op.holds(&x, &y),
                _ => false,
            },
            Formula::Not(a) => !a.eval(env, atom),
            Formula::And(v) => v.iter().all(|f| f.eval(env, atom)),
            Formula::Or(v) => v.iter().any(|f| f.eval(env, atom)),
            Formula::Implies(a, b) => !a.eval(env, atom) || b.eval(env, atom),
            Formula::Iff(a, b) => a.eval(env, atom) == b.eval(env, atom),
            Formula::App(a) => atom(a),
        }
    }

    /// Number of nodes, used for size bounds.
    pub fn size(&self) -> usize {
        match self {
            Formula::True | Formula::False | Formula::Bool(_) | Formula::Cmp(..) | Formula::App(_) => 1,
            Formula::Not(a) => 1 + a.size(),
            Formula::And(v) | Formula::Or(v) => 1 + v.iter().map(Formula::size).sum::<usize>(),
            Formula::Implies(a, b) | Formula::Iff(a, b) => 1 + a.size() + b.size(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::value::Sort;

    #[test]
    fn smart_constructors() {
        let b = Formula::Bool(Var::new("b", Sort::Bool));
        assert_eq!(Formula::and([Formula::True, b.clone()]), b);
        assert_eq!(Formula::and([Formula::False, b.clone()]), Formula::False);
        assert_eq!(Formula::or([]), Formula::False);
        assert_eq!(Formula::not(Formula::not(b.clone())), b);
    }

    #[test]
    fn priming_and_vars() {
        let x = Var::new("x", Sort::Int);
        let p = PredSym::new("p", vec![x.clone(), x.primed()]);
        let f = Formula::and([Formula::eq(Term::Var(x.clone()), Term::int(0)), Formula::App(p.own_atom())]);
        assert_eq!(f.vars(), vec![x.clone(), x.primed()]);
        assert_eq!(f.prime().vars(), vec![x.primed(), x.primed().primed()]);
        assert!(f.has_atoms());
    }
}
