//! Linear arithmetic terms over program variables.

use std::collections::HashMap;
use std::fmt;

use num_rational::Rational64;
use num_traits::{CheckedAdd, CheckedDiv, CheckedMul, CheckedSub, Zero};
use serde::{Deserialize, Serialize};

use super::value::{LocSort, Value};
use super::var::Var;

/// A term. Products and quotients are linear: at least one factor of a
/// product, and every divisor, is variable-free.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Term {
    Var(Var),
    Const(Rational64),
    /// A location label, given by its sort and index.
    Label(LocSort, u32),
    Neg(Box<Term>),
    Add(Box<Term>, Box<Term>),
    Sub(Box<Term>, Box<Term>),
    Mul(Box<Term>, Box<Term>),
    Div(Box<Term>, Box<Term>),
}

/// Comparison operators.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CmpOp {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

impl CmpOp {
    pub fn symbol(self) -> &'static str {
        match self {
            CmpOp::Eq => "=",
            CmpOp::Ne => "!=",
            CmpOp::Lt => "<",
            CmpOp::Le => "<=",
            CmpOp::Gt => ">",
            CmpOp::Ge => ">=",
        }
    }

    pub fn negate(self) -> CmpOp {
        match self {
            CmpOp::Eq => CmpOp::Ne,
            CmpOp::Ne => CmpOp::Eq,
            CmpOp::Lt => CmpOp::Ge,
            CmpOp::Le => CmpOp::Gt,
            CmpOp::Gt => CmpOp::Le,
            CmpOp::Ge => CmpOp::Lt,
        }
    }

    pub fn holds(self, a: &Value, b: &Value) -> bool {
        match self {
            CmpOp::Eq => a == b,
            CmpOp::Ne => a != b,
            CmpOp::Lt => a < b,
            CmpOp::Le => a <= b,
            CmpOp::Gt => a > b,
            CmpOp::Ge => a >= b,
        }
    }
}

impl fmt::Display for CmpOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

impl Term {
    pub fn var(v: &Var) -> Term {
        Term::Var(v.clone())
    }

    pub fn int(i: i64) -> Term {
        Term::Const(Rational64::from_integer(i))
    }

    pub fn is_constant(&self) -> bool {
        match self {
            Term::Var(_) => false,
            Term::Const(_) | Term::Label(..) => true,
            Term::Neg(a) => a.is_constant(),
            Term::Add(a, b) | Term::Sub(a, b) | Term::Mul(a, b) | Term::Div(a, b) => a.is_constant() && b.is_constant(),
        }
    }

    /// Check the linearity restriction, returning the offending subterm.
    pub fn check_linear(&self) -> Result<(), Term> {
        match self {
            Term::Var(_) | Term::Const(_) | Term::Label(..) => Ok(()),
            Term::Neg(a) => a.check_linear(),
            Term::Add(a, b) | Term::Sub(a, b) => {
                a.check_linear()?;
                b.check_linear()
            }
            Term::Mul(a, b) => {
                a.check_linear()?;
                b.check_linear()?;
                if a.is_constant() || b.is_constant() {
                    Ok(())
                } else {
                    Err(self.clone())
                }
            }
            Term::Div(a, b) => {
                a.check_linear()?;
                b.check_linear()?;
                if b.is_constant() {
                    Ok(())
                } else {
                    Err(self.clone())
                }
            }
        }
    }

    pub fn collect_vars(&self, out: &mut Vec<Var>) {
        match self {
            Term::Var(v) => {
                if !out.contains(v) {
                    out.push(v.clone())
                }
            }
            Term::Const(_) | Term::Label(..) => {}
            Term::Neg(a) => a.collect_vars(out),
            Term::Add(a, b) | Term::Sub(a, b) | Term::Mul(a, b) | Term::Div(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
        }
    }

    pub fn map_vars(&self, f: &dyn Fn(&Var) -> Var) -> Term {
        match self {
            Term::Var(v) => Term::Var(f(v)),
            Term::Const(_) | Term::Label(..) => self.clone(),
            Term::Neg(a) => Term::Neg(Box::new(a.map_vars(f))),
            Term::Add(a, b) => Term::Add(Box::new(a.map_vars(f)), Box::new(b.map_vars(f))),
            Term::Sub(a, b) => Term::Sub(Box::new(a.map_vars(f)), Box::new(b.map_vars(f))),
            Term::Mul(a, b) => Term::Mul(Box::new(a.map_vars(f)), Box::new(b.map_vars(f))),
            Term::Div(a, b) => Term::Div(Box::new(a.map_vars(f)), Box::new(b.map_vars(f))),
        }
    }

    pub fn rename(&self, map: &HashMap<Var, Var>) -> Term {
        self.map_vars(&|v| map.get(v).cloned().unwrap_or_else(|| v.clone()))
    }

    /// Evaluate under a variable assignment. Returns `None` on division by zero
    /// or on arithmetic over a non-numeric value.
    pub fn eval(&self, env: &dyn Fn(&Var) -> Value) -> Option<Value> {
        match self {
            Term::Var(v) => Some(env(v)),
            Term::Const(q) => Some(Value::Num(*q)),
            Term::Label(_, i) => Some(Value::Loc(*i)),
            _ => self.eval_num(env).map(Value::Num),
        }
    }

    fn eval_num(&self, env: &dyn Fn(&Var) -> Value) -> Option<Rational64> {
        Some(match self {
            Term::Var(v) => match env(v) {
                Value::Num(q) => q,
                _ => return None,
            },
            Term::Const(q) => *q,
            Term::Label(..) => return None,
            Term::Neg(a) => -a.eval_num(env)?,
            Term::Add(a, b) => a.eval_num(env)?.checked_add(&b.eval_num(env)?)?,
            Term::Sub(a, b) => a.eval_num(env)?.checked_sub(&b.eval_num(env)?)?,
            Term::Mul(a, b) => a.eval_num(env)?.checked_mul(&b.eval_num(env)?)?,
            Term::Div(a, b) => {
                let d = b.eval_num(env)?;
                if d.is_zero() {
                    return None;
                }
                a.eval_num(env)?.checked_div(&d)?
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::value::Sort;

    #[test]
    fn linearity() {
        let x = Term::var(&Var::new("x", Sort::Int));
        let y = Term::var(&Var::new("y", Sort::Int));
        let ok = Term::Mul(Box::new(Term::int(2)), Box::new(x.clone()));
        assert!(ok.check_linear().is_ok());
        let bad = Term::Mul(Box::new(x.clone()), Box::new(y.clone()));
        assert!(bad.check_linear().is_err());
        let bad_div = Term::Div(Box::new(Term::int(1)), Box::new(y));
        assert!(bad_div.check_linear().is_err());
    }

    #[test]
    fn evaluation() {
        let x = Var::new("x", Sort::Rat);
        let t = Term::Sub(
            Box::new(Term::Var(x.clone())),
            Box::new(Term::Mul(Box::new(Term::Const(Rational64::new(3, 50))), Box::new(Term::int(10)))),
        );
        let v = t.eval(&|_| Value::int(1)).unwrap();
        assert_eq!(v, Value::Num(Rational64::new(2, 5)));
        let z = Term::Div(Box::new(Term::Var(x)), Box::new(Term::int(0)));
        assert!(z.eval(&|_| Value::int(1)).is_none());
    }
}
