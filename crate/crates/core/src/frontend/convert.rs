//! Typed conversion between untyped expressions and the syntax trees, in
//! both directions.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_traits::Zero;

use super::expr::Expr;
use crate::syntax::{Atom, Formula, LocSort, PathFormula, PredSym, Sort, StateFormula, Term, Var};
use crate::{Error, Result};

/// Names visible while converting an expression.
#[derive(Clone, Debug, Default)]
pub struct Scope {
    vars: HashMap<String, Var>,
    preds: HashMap<String, Arc<PredSym>>,
    locs: Vec<LocSort>,
}

impl Scope {
    pub fn new() -> Self {
        Self::default()
    }

    /// A scope with the given variables and their versions with up to
    /// `max_primes` primes.
    pub fn with_vars(vars: &[Var], max_primes: u8) -> Self {
        let mut s = Scope::new();
        for v in vars {
            for p in 0..=max_primes {
                s.add_var(v.with_primes(p));
            }
        }
        s
    }

    pub fn add_var(&mut self, v: Var) {
        if let Sort::Loc(l) = &v.sort {
            if !self.locs.contains(l) {
                self.locs.push(l.clone());
            }
        }
        self.vars.insert(v.to_string(), v);
    }

    pub fn add_pred(&mut self, p: Arc<PredSym>) {
        for v in &p.params {
            if let Sort::Loc(l) = &v.sort {
                if !self.locs.contains(l) {
                    self.locs.push(l.clone());
                }
            }
        }
        self.preds.insert(p.name.to_string(), p);
    }

    pub fn add_loc_sort(&mut self, l: LocSort) {
        if !self.locs.contains(&l) {
            self.locs.push(l);
        }
    }

    fn lookup(&self, name: &str, primes: u8) -> Option<&Var> {
        let mut key = name.to_string();
        for _ in 0..primes {
            key.push('\'');
        }
        self.vars.get(&key)
    }

    fn is_label(&self, name: &str) -> bool {
        self.locs.iter().any(|l| l.index_of(name).is_some())
    }
}

enum Typed {
    Num(Term),
    Loc(Term, LocSort),
    Label(String, usize, usize),
}

fn sort_err<T>(msg: String) -> Result<T> {
    Err(Error::Sort(msg))
}

fn undeclared(name: &str, primes: u8, line: usize, col: usize) -> Error {
    let p = "'".repeat(primes as usize);
    Error::Parse { line, col, msg: format!("undeclared variable `{name}{p}`") }
}

impl Scope {
    fn is_boolish(&self, e: &Expr) -> bool {
        match e {
            Expr::Bool(_)
            | Expr::Not(_)
            | Expr::And(_)
            | Expr::Or(_)
            | Expr::Implies(..)
            | Expr::Iff(..)
            | Expr::Cmp(..)
            | Expr::App { .. } => true,
            Expr::Ident { name, primes, .. } => {
                matches!(self.lookup(name, *primes), Some(v) if v.sort == Sort::Bool)
            }
            _ => false,
        }
    }

    fn term(&self, e: &Expr) -> Result<Typed> {
        let num = |t: Typed| -> Result<Term> {
            match t {
                Typed::Num(t) => Ok(t),
                Typed::Loc(t, _) => sort_err(format!("location term `{t}` used in arithmetic")),
                Typed::Label(l, ..) => sort_err(format!("location label `{l}` used in arithmetic")),
            }
        };
        let t = match e {
            Expr::Ident { name, primes, line, col } => match self.lookup(name, *primes) {
                Some(v) => match &v.sort {
                    Sort::Bool => return sort_err(format!("boolean variable `{v}` used as a term")),
                    Sort::Loc(l) => return Ok(Typed::Loc(Term::Var(v.clone()), l.clone())),
                    _ => Term::Var(v.clone()),
                },
                None if *primes == 0 && self.is_label(name) => return Ok(Typed::Label(name.clone(), *line, *col)),
                None => return Err(undeclared(name, *primes, *line, *col)),
            },
            Expr::Num(q) => Term::Const(*q),
            Expr::Neg(a) => match num(self.term(a)?)? {
                Term::Const(q) => Term::Const(-q),
                t => Term::Neg(Box::new(t)),
            },
            Expr::Add(a, b) => Term::Add(Box::new(num(self.term(a)?)?), Box::new(num(self.term(b)?)?)),
            Expr::Sub(a, b) => Term::Sub(Box::new(num(self.term(a)?)?), Box::new(num(self.term(b)?)?)),
            Expr::Mul(a, b) => {
                let t = Term::Mul(Box::new(num(self.term(a)?)?), Box::new(num(self.term(b)?)?));
                t.check_linear().map_err(|bad| Error::Nonlinear(bad.to_string()))?;
                t
            }
            Expr::Div(a, b) => {
                let (x, y) = (num(self.term(a)?)?, num(self.term(b)?)?);
                match (&x, &y) {
                    (_, Term::Const(d)) if d.is_zero() => return Err(Error::Nonlinear("division by zero".into())),
                    (Term::Const(n), Term::Const(d)) => Term::Const(n / d),
                    _ => {
                        let t = Term::Div(Box::new(x), Box::new(y));
                        t.check_linear().map_err(|bad| Error::Nonlinear(bad.to_string()))?;
                        t
                    }
                }
            }
            other => return sort_err(format!("expected a term, found `{}`", other.render())),
        };
        Ok(Typed::Num(t))
    }

    /// Convert to an assertion.
    pub fn formula(&self, e: &Expr) -> Result<Formula> {
        Ok(match e {
            Expr::Bool(true) => Formula::True,
            Expr::Bool(false) => Formula::False,
            Expr::Ident { name, primes, line, col } => match self.lookup(name, *primes) {
                Some(v) if v.sort == Sort::Bool => Formula::Bool(v.clone()),
                Some(v) => return sort_err(format!("variable `{v}` of sort {} used as a formula", v.sort)),
                None => return Err(undeclared(name, *primes, *line, *col)),
            },
            Expr::App { name, args, line, col } => {
                let pred = self.preds.get(name).ok_or_else(|| Error::UnknownPredicate(name.clone()))?;
                let mut vs = Vec::new();
                for a in args {
                    match a {
                        Expr::Ident { name, primes, line, col } => vs.push(
                            self.lookup(name, *primes)
                                .cloned()
                                .ok_or_else(|| undeclared(name, *primes, *line, *col))?,
                        ),
                        _ => {
                            return Err(Error::Parse {
                                line: *line,
                                col: *col,
                                msg: format!("arguments of `{name}` must be variables"),
                            })
                        }
                    }
                }
                let atom = Atom { pred: pred.clone(), args: vs };
                crate::syntax::clause::check_atom(&atom)?;
                Formula::App(atom)
            }
            Expr::Not(a) => Formula::Not(Box::new(self.formula(a)?)),
            Expr::And(v) => Formula::And(v.iter().map(|x| self.formula(x)).collect::<Result<_>>()?),
            Expr::Or(v) => Formula::Or(v.iter().map(|x| self.formula(x)).collect::<Result<_>>()?),
            Expr::Implies(a, b) => Formula::implies(self.formula(a)?, self.formula(b)?),
            Expr::Iff(a, b) => Formula::iff(self.formula(a)?, self.formula(b)?),
            Expr::Cmp(op, a, b) => {
                use crate::syntax::CmpOp;
                if self.is_boolish(a) || self.is_boolish(b) {
                    let f = Formula::iff(self.formula(a)?, self.formula(b)?);
                    return match op {
                        CmpOp::Eq => Ok(f),
                        CmpOp::Ne => Ok(Formula::Not(Box::new(f))),
                        _ => sort_err(format!("ordering comparison `{}` between booleans", e.render())),
                    };
                }
                let (x, y) = (self.term(a)?, self.term(b)?);
                let loc_op = || -> Result<()> {
                    if matches!(op, CmpOp::Eq | CmpOp::Ne) {
                        Ok(())
                    } else {
                        sort_err(format!("ordering comparison `{}` between locations", e.render()))
                    }
                };
                let label = |l: &LocSort, name: &str, line: usize, col: usize| -> Result<Term> {
                    match l.index_of(name) {
                        Some(i) => Ok(Term::Label(l.clone(), i)),
                        None => Err(Error::Parse {
                            line,
                            col,
                            msg: format!("`{name}` is not a label of this location sort"),
                        }),
                    }
                };
                match (x, y) {
                    (Typed::Num(x), Typed::Num(y)) => Formula::Cmp(*op, x, y),
                    (Typed::Loc(x, s1), Typed::Loc(y, s2)) => {
                        loc_op()?;
                        if s1 != s2 {
                            return sort_err(format!("comparison `{}` between different location sorts", e.render()));
                        }
                        Formula::Cmp(*op, x, y)
                    }
                    (Typed::Loc(x, s), Typed::Label(n, l, c)) => {
                        loc_op()?;
                        Formula::Cmp(*op, x, label(&s, &n, l, c)?)
                    }
                    (Typed::Label(n, l, c), Typed::Loc(y, s)) => {
                        loc_op()?;
                        Formula::Cmp(*op, label(&s, &n, l, c)?, y)
                    }
                    _ => return sort_err(format!("ill-sorted comparison `{}`", e.render())),
                }
            }
            Expr::Quant(..) | Expr::X(_) | Expr::G(_) | Expr::F(_) | Expr::U(..) => {
                return Err(Error::Formula(format!("temporal operator inside an assertion: `{}`", e.render())))
            }
            other => return sort_err(format!("expected a formula, found term `{}`", other.render())),
        })
    }

    /// Convert to a state formula. Maximal subtrees without temporal operators
    /// become single assertions.
    pub fn state(&self, e: &Expr) -> Result<StateFormula> {
        if !e.is_temporal() {
            return Ok(StateFormula::Assert(self.formula(e)?));
        }
        Ok(match e {
            Expr::And(v) => {
                let (init, last) = split_last(v);
                StateFormula::and(self.state(&init)?, self.state(last)?)
            }
            Expr::Or(v) => {
                let (init, last) = split_last_or(v);
                StateFormula::or(self.state(&init)?, self.state(last)?)
            }
            Expr::Not(a) => StateFormula::not(self.state(a)?),
            Expr::Implies(a, b) => StateFormula::or(StateFormula::not(self.state(a)?), self.state(b)?),
            Expr::Quant(q, a) => StateFormula::quant(*q, self.path(a)?),
            Expr::X(_) | Expr::G(_) | Expr::F(_) | Expr::U(..) => {
                return Err(Error::Formula(format!(
                    "path formula `{}` used where a state formula is required; add a path quantifier",
                    e.render()
                )))
            }
            other => {
                return Err(Error::Formula(format!(
                    "temporal operator in an unsupported position: `{}`",
                    other.render()
                )))
            }
        })
    }

    /// Convert to a path formula.
    pub fn path(&self, e: &Expr) -> Result<PathFormula> {
        if !e.has_free_temporal() {
            return Ok(PathFormula::state(self.state(e)?));
        }
        Ok(match e {
            Expr::X(a) => PathFormula::x(self.path(a)?),
            Expr::G(a) => PathFormula::g(self.path(a)?),
            Expr::F(a) => PathFormula::f(self.path(a)?),
            Expr::U(a, b) => PathFormula::u(self.path(a)?, self.path(b)?),
            Expr::And(v) => {
                let (init, last) = split_last(v);
                PathFormula::and(self.path(&init)?, self.path(last)?)
            }
            Expr::Or(v) => {
                let (init, last) = split_last_or(v);
                PathFormula::or(self.path(&init)?, self.path(last)?)
            }
            Expr::Not(a) => PathFormula::not(self.path(a)?),
            Expr::Implies(a, b) => PathFormula::or(PathFormula::not(self.path(a)?), self.path(b)?),
            other => {
                return Err(Error::Formula(format!(
                    "temporal operator in an unsupported position: `{}`",
                    other.render()
                )))
            }
        })
    }
}

fn split_last(v: &[Expr]) -> (Expr, &Expr) {
    let (last, init) = v.split_last().expect("n-ary node has children");
    let init = if init.len() == 1 { init[0].clone() } else { Expr::And(init.to_vec()) };
    (init, last)
}

fn split_last_or(v: &[Expr]) -> (Expr, &Expr) {
    let (last, init) = v.split_last().expect("n-ary node has children");
    let init = if init.len() == 1 { init[0].clone() } else { Expr::Or(init.to_vec()) };
    (init, last)
}

fn var_expr(v: &Var) -> Expr {
    let mut name = v.name.to_string();
    if let Some(c) = v.copy {
        name.push_str(&format!("_c{c}"));
    }
    Expr::ident(name, v.primes)
}

pub fn term_expr(t: &Term) -> Expr {
    let b = |t: &Term| Box::new(term_expr(t));
    match t {
        Term::Var(v) => var_expr(v),
        Term::Const(q) => Expr::Num(*q),
        Term::Label(l, i) => Expr::ident(l.labels()[*i as usize].clone(), 0),
        Term::Neg(a) => Expr::Neg(b(a)),
        Term::Add(x, y) => Expr::Add(b(x), b(y)),
        Term::Sub(x, y) => Expr::Sub(b(x), b(y)),
        Term::Mul(x, y) => Expr::Mul(b(x), b(y)),
        Term::Div(x, y) => Expr::Div(b(x), b(y)),
    }
}

pub fn atom_expr(a: &Atom) -> Expr {
    Expr::App { name: a.pred.name.to_string(), args: a.args.iter().map(var_expr).collect(), line: 0, col: 0 }
}

pub fn formula_expr(f: &Formula) -> Expr {
    let b = |f: &Formula| Box::new(formula_expr(f));
    match f {
        Formula::True => Expr::Bool(true),
        Formula::False => Expr::Bool(false),
        Formula::Bool(v) => var_expr(v),
        Formula::Cmp(op, x, y) => Expr::Cmp(*op, Box::new(term_expr(x)), Box::new(term_expr(y))),
        Formula::Not(a) => Expr::Not(b(a)),
        Formula::And(v) if v.is_empty() => Expr::Bool(true),
        Formula::And(v) if v.len() == 1 => formula_expr(&v[0]),
        Formula::And(v) => Expr::And(v.iter().map(formula_expr).collect()),
        Formula::Or(v) if v.is_empty() => Expr::Bool(false),
        Formula::Or(v) if v.len() == 1 => formula_expr(&v[0]),
        Formula::Or(v) => Expr::Or(v.iter().map(formula_expr).collect()),
        Formula::Implies(x, y) => Expr::Implies(b(x), b(y)),
        Formula::Iff(x, y) => Expr::Iff(b(x), b(y)),
        Formula::App(a) => atom_expr(a),
    }
}

pub fn state_expr(s: &StateFormula) -> Expr {
    match s {
        StateFormula::Assert(f) => formula_expr(f),
        StateFormula::And(a, b) => Expr::And(vec![state_expr(a), state_expr(b)]),
        StateFormula::Or(a, b) => Expr::Or(vec![state_expr(a), state_expr(b)]),
        StateFormula::Not(a) => Expr::Not(Box::new(state_expr(a))),
        StateFormula::Quant(q, p) => Expr::Quant(*q, Box::new(path_expr(p))),
    }
}

pub fn path_expr(p: &PathFormula) -> Expr {
    let b = |p: &PathFormula| Box::new(path_expr(p));
    match p {
        PathFormula::State(s) => state_expr(s),
        PathFormula::X(a) => Expr::X(b(a)),
        PathFormula::G(a) => Expr::G(b(a)),
        PathFormula::F(a) => Expr::F(b(a)),
        PathFormula::U(x, y) => Expr::U(b(x), b(y)),
        PathFormula::And(x, y) => Expr::And(vec![path_expr(x), path_expr(y)]),
        PathFormula::Or(x, y) => Expr::Or(vec![path_expr(x), path_expr(y)]),
        PathFormula::Not(a) => Expr::Not(b(a)),
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&term_expr(self).render())
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&formula_expr(self).render())
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&atom_expr(self).render())
    }
}

impl fmt::Display for StateFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&state_expr(self).render())
    }
}

impl fmt::Display for PathFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&path_expr(self).render())
    }
}
