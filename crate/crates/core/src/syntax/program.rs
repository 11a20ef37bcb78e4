//! Symbolic transition systems with fairness conditions.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use super::ctl::StateFormula;
use super::formula::Formula;
use super::value::Sort;
use super::var::Var;
use crate::{Error, Result};

/// Name of the distinguished program-counter variable.
pub const PC: &str = "pc";

/// A program: variables, initial condition, transition relation and an
/// ordered list of fairness conditions.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Program {
    pub vars: Vec<Var>,
    pub init: Formula,
    pub next: Formula,
    pub fairness: Vec<Formula>,
}

/// A program together with the state formula it should satisfy.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct VerificationProblem {
    pub program: Program,
    pub spec: StateFormula,
}

impl Program {
    pub fn new(vars: Vec<Var>, init: Formula, next: Formula, fairness: Vec<Formula>) -> Result<Self> {
        let p = Program { vars, init, next, fairness };
        p.validate()?;
        Ok(p)
    }

    pub fn var(&self, name: &str) -> Option<&Var> {
        self.vars.iter().find(|v| &*v.name == name)
    }

    /// The program counter, if the program has one.
    pub fn pc(&self) -> Option<&Var> {
        self.var(PC).filter(|v| matches!(v.sort, Sort::Loc(_)))
    }

    /// Primed copies of the program variables.
    pub fn primed_vars(&self) -> Vec<Var> {
        self.vars.iter().map(Var::primed).collect()
    }

    /// Check variable declarations and the scoping of every formula.
    pub fn validate(&self) -> Result<()> {
        let mut names = HashSet::new();
        for v in &self.vars {
            if v.primes != 0 || v.copy.is_some() {
                return Err(Error::Program(format!("declared variable `{v}` must be a plain name")));
            }
            if !names.insert(v.name.clone()) {
                return Err(Error::Program(format!("variable `{}` declared twice", v.name)));
            }
        }
        let cur: HashSet<&Var> = self.vars.iter().collect();
        let primed = self.primed_vars();
        let both: HashSet<&Var> = self.vars.iter().chain(primed.iter()).collect();
        check_scope("init", &self.init, &cur)?;
        check_scope("next", &self.next, &both)?;
        for (i, j) in self.fairness.iter().enumerate() {
            check_scope(&format!("fairness condition {}", i + 1), j, &cur)?;
        }
        Ok(())
    }
}

fn check_scope(what: &str, f: &Formula, allowed: &HashSet<&Var>) -> Result<()> {
    for v in f.vars() {
        if !allowed.contains(&v) {
            let msg = if v.is_primed() && allowed.contains(&v.unprimed()) {
                format!("{what} mentions primed variable `{v}`")
            } else {
                format!("{what} mentions undeclared variable `{v}` of sort {}", v.sort)
            };
            return Err(Error::Program(msg));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primed_in_init_rejected() {
        let b = Var::new("b", Sort::Bool);
        let err = Program::new(vec![b.clone()], Formula::Bool(b.primed()), Formula::True, vec![]).unwrap_err();
        assert!(err.to_string().contains("primed"));
        assert!(Program::new(vec![b.clone()], Formula::True, Formula::Bool(b.primed()), vec![]).is_ok());
    }

    #[test]
    fn duplicate_declaration_rejected() {
        let b = Var::new("b", Sort::Bool);
        assert!(Program::new(vec![b.clone(), b], Formula::True, Formula::True, vec![]).is_err());
    }
}

/// A hole of a partial program.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Hole {
    /// `⟨l, l_t, l_f⟩`: an unknown condition at `l` choosing between `l_t` and `l_f`.
    Cond { l: String, lt: String, lf: String },
    /// `⟨l, l'⟩`: an unknown assignment at `l` continuing at `l'`.
    Assign { l: String, next: String },
}

impl Hole {
    pub fn loc(&self) -> &str {
        match self {
            Hole::Cond { l, .. } | Hole::Assign { l, .. } => l,
        }
    }
}

/// A program with holes. The program must have a `pc` location variable.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PartialProgram {
    pub program: Program,
    pub holes: Vec<Hole>,
}

impl PartialProgram {
    pub fn new(program: Program, holes: Vec<Hole>) -> Result<Self> {
        let pp = PartialProgram { program, holes };
        pp.validate()?;
        Ok(pp)
    }

    pub fn validate(&self) -> Result<()> {
        self.program.validate()?;
        let pc = self
            .program
            .pc()
            .ok_or_else(|| Error::Hole("a partial program needs a `pc` variable of location sort".into()))?;
        let Sort::Loc(locs) = &pc.sort else { unreachable!() };
        let mut seen = HashSet::new();
        for h in &self.holes {
            let labels: Vec<&str> = match h {
                Hole::Cond { l, lt, lf } => {
                    if l == lt && l == lf {
                        return Err(Error::Hole(format!("condition hole at `{l}` loops to itself on both branches")));
                    }
                    vec![l, lt, lf]
                }
                Hole::Assign { l, next } => vec![l, next],
            };
            for x in labels {
                if locs.index_of(x).is_none() {
                    return Err(Error::Hole(format!("`{x}` is not a label of pc")));
                }
            }
            if !seen.insert(h.loc().to_string()) {
                return Err(Error::Hole(format!("two holes at location `{}`", h.loc())));
            }
        }
        Ok(())
    }

    /// The program variables other than `pc`.
    pub fn data_vars(&self) -> Vec<Var> {
        self.program.vars.iter().filter(|v| &*v.name != PC).cloned().collect()
    }
}
