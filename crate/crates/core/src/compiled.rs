//! Assertions compiled against a fixed variable layout.
//!
//! Variables are resolved to slots of a value array once, so that repeated
//! evaluation over many valuations does no name lookups. Atoms are kept in
//! a side table and decided by a caller-supplied function.

use std::sync::Arc;

use num_rational::Rational64;
use num_traits::{CheckedAdd, CheckedDiv, CheckedMul, CheckedSub, Zero};

use crate::syntax::{CmpOp, Formula, PredSym, Term, Value, Var};
use crate::{Error, Result};

#[derive(Clone, Debug)]
enum CTerm {
    Slot(usize),
    Const(Value),
    Neg(Box<CTerm>),
    Add(Box<CTerm>, Box<CTerm>),
    Sub(Box<CTerm>, Box<CTerm>),
    Mul(Box<CTerm>, Box<CTerm>),
    Div(Box<CTerm>, Box<CTerm>),
}

#[derive(Clone, Debug)]
enum Node {
    Const(bool),
    Bool(usize),
    Cmp(CmpOp, CTerm, CTerm),
    Not(Box<Node>),
    And(Vec<Node>),
    Or(Vec<Node>),
    Implies(Box<Node>, Box<Node>),
    Iff(Box<Node>, Box<Node>),
    App(usize),
}

/// An atom occurrence: the predicate and the slots of its arguments.
#[derive(Clone, Debug)]
pub struct CAtom {
    pub pred: Arc<PredSym>,
    pub slots: Vec<usize>,
}

/// A compiled assertion.
#[derive(Clone, Debug)]
pub struct Compiled {
    root: Node,
    pub atoms: Vec<CAtom>,
}

impl Compiled {
    /// Compile `f`, resolving every variable through `slot`.
    pub fn new(f: &Formula, slot: &dyn Fn(&Var) -> Option<usize>) -> Result<Self> {
        let mut atoms = Vec::new();
        let root = compile(f, slot, &mut atoms)?;
        Ok(Compiled { root, atoms })
    }

    /// Compile against an ordered variable list.
    pub fn over(f: &Formula, vars: &[Var]) -> Result<Self> {
        Self::new(f, &|v| vars.iter().position(|w| w == v))
    }

    pub fn has_atoms(&self) -> bool {
        !self.atoms.is_empty()
    }

    /// Evaluate. `atom(i, args)` decides atom `i` of [`Compiled::atoms`]
    /// applied to the given argument values.
    pub fn eval(&self, env: &[Value], atom: &dyn Fn(usize, &[Value]) -> bool) -> bool {
        self.node(&self.root, env, atom)
    }

    /// Evaluate a formula known to be atom-free.
    pub fn eval_pure(&self, env: &[Value]) -> bool {
        self.eval(env, &|_, _| unreachable!("atom in a pure formula"))
    }

    fn node(&self, n: &Node, env: &[Value], atom: &dyn Fn(usize, &[Value]) -> bool) -> bool {
        match n {
            Node::Const(b) => *b,
            Node::Bool(s) => env[*s] == Value::Bool(true),
            Node::Cmp(op, a, b) => match (term(a, env), term(b, env)) {
                (Some(x), Some(y)) => op.holds(&x, &y),
                _ => false,
            },
            Node::Not(a) => !self.node(a, env, atom),
            Node::And(v) => v.iter().all(|x| self.node(x, env, atom)),
            Node::Or(v) => v.iter().any(|x| self.node(x, env, atom)),
            Node::Implies(a, b) => !self.node(a, env, atom) || self.node(b, env, atom),
            Node::Iff(a, b) => self.node(a, env, atom) == self.node(b, env, atom),
            Node::App(i) => {
                let args: Vec<Value> = self.atoms[*i].slots.iter().map(|s| env[*s].clone()).collect();
                atom(*i, &args)
            }
        }
    }
}

fn compile(f: &Formula, slot: &dyn Fn(&Var) -> Option<usize>, atoms: &mut Vec<CAtom>) -> Result<Node> {
    let var = |v: &Var| slot(v).ok_or_else(|| Error::Formula(format!("variable `{v}` is not in scope")));
    Ok(match f {
        Formula::True => Node::Const(true),
        Formula::False => Node::Const(false),
        Formula::Bool(v) => Node::Bool(var(v)?),
        Formula::Cmp(op, a, b) => Node::Cmp(*op, cterm(a, &var)?, cterm(b, &var)?),
        Formula::Not(a) => Node::Not(Box::new(compile(a, slot, atoms)?)),
        Formula::And(v) => Node::And(v.iter().map(|x| compile(x, slot, atoms)).collect::<Result<_>>()?),
        Formula::Or(v) => Node::Or(v.iter().map(|x| compile(x, slot, atoms)).collect::<Result<_>>()?),
        Formula::Implies(a, b) => Node::Implies(Box::new(compile(a, slot, atoms)?), Box::new(compile(b, slot, atoms)?)),
        Formula::Iff(a, b) => Node::Iff(Box::new(compile(a, slot, atoms)?), Box::new(compile(b, slot, atoms)?)),
        Formula::App(a) => {
            let slots = a.args.iter().map(&var).collect::<Result<Vec<_>>>()?;
            atoms.push(CAtom { pred: a.pred.clone(), slots });
            Node::App(atoms.len() - 1)
        }
    })
}

fn cterm(t: &Term, var: &dyn Fn(&Var) -> Result<usize>) -> Result<CTerm> {
    let b = |t: &Term| cterm(t, var).map(Box::new);
    Ok(match t {
        Term::Var(v) => CTerm::Slot(var(v)?),
        Term::Const(q) => CTerm::Const(Value::Num(*q)),
        Term::Label(_, i) => CTerm::Const(Value::Loc(*i)),
        Term::Neg(a) => CTerm::Neg(b(a)?),
        Term::Add(x, y) => CTerm::Add(b(x)?, b(y)?),
        Term::Sub(x, y) => CTerm::Sub(b(x)?, b(y)?),
        Term::Mul(x, y) => CTerm::Mul(b(x)?, b(y)?),
        Term::Div(x, y) => CTerm::Div(b(x)?, b(y)?),
    })
}

fn term(t: &CTerm, env: &[Value]) -> Option<Value> {
    match t {
        CTerm::Slot(s) => Some(env[*s].clone()),
        CTerm::Const(v) => Some(v.clone()),
        _ => num(t, env).map(Value::Num),
    }
}

fn num(t: &CTerm, env: &[Value]) -> Option<Rational64> {
    Some(match t {
        CTerm::Slot(s) => match &env[*s] {
            Value::Num(q) => *q,
            _ => return None,
        },
        CTerm::Const(Value::Num(q)) => *q,
        CTerm::Const(_) => return None,
        CTerm::Neg(a) => -num(a, env)?,
        CTerm::Add(a, b) => num(a, env)?.checked_add(&num(b, env)?)?,
        CTerm::Sub(a, b) => num(a, env)?.checked_sub(&num(b, env)?)?,
        CTerm::Mul(a, b) => num(a, env)?.checked_mul(&num(b, env)?)?,
        CTerm::Div(a, b) => {
            let d = num(b, env)?;
            if d.is_zero() {
                return None;
            }
            num(a, env)?.checked_div(&d)?
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontend::parse_assertion;
    use crate::syntax::Sort;

    #[test]
    fn agrees_with_reference_evaluator() {
        let vars = vec![Var::new("x", Sort::Int), Var::new("b", Sort::Bool)];
        let f = parse_assertion("(x' = x + 1 | b') & (b -> x >= 2) & x / 2 != 1", &vars, 1).unwrap();
        let layout: Vec<Var> = vars.iter().cloned().chain(vars.iter().map(Var::primed)).collect();
        let c = Compiled::over(&f, &layout).unwrap();
        for x in -2..4 {
            for x1 in -2..4 {
                for (b, b1) in [(false, false), (false, true), (true, false), (true, true)] {
                    let env = vec![Value::int(x), Value::Bool(b), Value::int(x1), Value::Bool(b1)];
                    let reference = f.eval(&|v| env[layout.iter().position(|w| w == v).unwrap()].clone(), &|_| false);
                    assert_eq!(c.eval_pure(&env), reference);
                }
            }
        }
    }
}
