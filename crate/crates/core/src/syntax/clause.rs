//! Existential Horn clauses, dwf declarations and clause sets.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::formula::{Atom, Formula, PredSym};
use super::var::Var;
use crate::{Error, Result};

/// The translation step a clause came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RuleTag {
    /// Existential initial-guess clause of the next-operator rule.
    R3,
    /// Existential initial-guess clause of the globally rule.
    R4,
    /// Existential initial-guess clause of the until rule.
    R5,
    /// Universal fair-assertion rule.
    R6,
    /// Existential fair-assertion rule.
    R7,
    /// Bare assertion rule.
    R8,
    /// Complement pairing for a negated predicate.
    Neg,
    /// Totality of an assignment hole.
    DeltaA,
}

impl RuleTag {
    pub fn name(self) -> &'static str {
        match self {
            RuleTag::R3 => "r3",
            RuleTag::R4 => "r4",
            RuleTag::R5 => "r5",
            RuleTag::R6 => "r6",
            RuleTag::R7 => "r7",
            RuleTag::R8 => "r8",
            RuleTag::Neg => "neg",
            RuleTag::DeltaA => "da",
        }
    }

    pub fn from_name(s: &str) -> Option<RuleTag> {
        Some(match s {
            "r3" => RuleTag::R3,
            "r4" => RuleTag::R4,
            "r5" => RuleTag::R5,
            "r6" => RuleTag::R6,
            "r7" => RuleTag::R7,
            "r8" => RuleTag::R8,
            "neg" => RuleTag::Neg,
            "da" => RuleTag::DeltaA,
            _ => return None,
        })
    }
}

/// Rule tag plus the fresh-name counter at the time the clause was emitted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Provenance {
    pub rule: RuleTag,
    pub counter: u32,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.rule.name(), self.counter)
    }
}

/// `forall all_vars. body_constraint ∧ body_atoms → ∃ exist_vars. head_constraint ∧ head_atoms`
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Clause {
    pub all_vars: Vec<Var>,
    pub body_constraint: Formula,
    pub body_atoms: Vec<Atom>,
    pub exist_vars: Vec<Var>,
    pub head_constraint: Formula,
    pub head_atoms: Vec<Atom>,
}

impl Clause {
    /// Build a clause, computing the universally quantified variables as all
    /// free variables outside `exist_vars` in order of first occurrence.
    pub fn new(
        body_constraint: Formula,
        body_atoms: Vec<Atom>,
        exist_vars: Vec<Var>,
        head_constraint: Formula,
        head_atoms: Vec<Atom>,
    ) -> Result<Self> {
        let mut vars = Vec::new();
        body_constraint.collect_vars(&mut vars);
        for a in &body_atoms {
            Formula::App(a.clone()).collect_vars(&mut vars);
        }
        head_constraint.collect_vars(&mut vars);
        for a in &head_atoms {
            Formula::App(a.clone()).collect_vars(&mut vars);
        }
        let all_vars = vars.into_iter().filter(|v| !exist_vars.contains(v)).collect();
        let c = Clause { all_vars, body_constraint, body_atoms, exist_vars, head_constraint, head_atoms };
        c.validate()?;
        Ok(c)
    }

    pub fn body_vars(&self) -> Vec<Var> {
        let mut vars = Vec::new();
        self.body_constraint.collect_vars(&mut vars);
        for a in &self.body_atoms {
            Formula::App(a.clone()).collect_vars(&mut vars);
        }
        vars
    }

    pub fn head_vars(&self) -> Vec<Var> {
        let mut vars = Vec::new();
        self.head_constraint.collect_vars(&mut vars);
        for a in &self.head_atoms {
            Formula::App(a.clone()).collect_vars(&mut vars);
        }
        vars
    }

    pub fn body_formula(&self) -> Formula {
        Formula::and(
            std::iter::once(self.body_constraint.clone()).chain(self.body_atoms.iter().cloned().map(Formula::App)),
        )
    }

    pub fn head_formula(&self) -> Formula {
        Formula::and(
            std::iter::once(self.head_constraint.clone()).chain(self.head_atoms.iter().cloned().map(Formula::App)),
        )
    }

    /// Variable containment conditions and atom arities.
    pub fn validate(&self) -> Result<()> {
        let all: HashSet<&Var> = self.all_vars.iter().collect();
        let ex: HashSet<&Var> = self.exist_vars.iter().collect();
        if all.len() != self.all_vars.len() || ex.len() != self.exist_vars.len() {
            return Err(Error::Clause("duplicate quantified variable".into()));
        }
        if let Some(v) = self.exist_vars.iter().find(|v| all.contains(v)) {
            return Err(Error::Clause(format!("`{v}` is both universal and existential")));
        }
        for v in self.body_vars() {
            if !all.contains(&v) {
                return Err(Error::Clause(format!("body variable `{v}` is not universally quantified")));
            }
        }
        let head = self.head_vars();
        for v in &head {
            if !all.contains(v) && !ex.contains(v) {
                return Err(Error::Clause(format!("head variable `{v}` is not quantified")));
            }
        }
        if let Some(v) = self.exist_vars.iter().find(|v| !head.contains(v)) {
            return Err(Error::Clause(format!("existential variable `{v}` does not occur in the head")));
        }
        if self.body_constraint.has_atoms() || self.head_constraint.has_atoms() {
            return Err(Error::Clause("constraints must not contain predicate atoms".into()));
        }
        for a in self.body_atoms.iter().chain(&self.head_atoms) {
            check_atom(a)?;
        }
        Ok(())
    }

    /// All atoms, body first.
    pub fn atoms(&self) -> impl Iterator<Item = &Atom> {
        self.body_atoms.iter().chain(self.head_atoms.iter())
    }
}

pub(crate) fn check_atom(a: &Atom) -> Result<()> {
    if a.args.len() != a.pred.params.len() {
        return Err(Error::Clause(format!(
            "predicate `{}` has arity {} but is applied to {} arguments",
            a.pred.name,
            a.pred.params.len(),
            a.args.len()
        )));
    }
    for (arg, p) in a.args.iter().zip(&a.pred.params) {
        if arg.sort != p.sort {
            return Err(Error::Clause(format!(
                "argument `{arg}` of `{}` has sort {} but the position expects {}",
                a.pred.name, arg.sort, p.sort
            )));
        }
    }
    Ok(())
}

/// `dwf(pred)`: the relation of `pred` is disjunctively well-founded.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DwfClause {
    pub pred: Arc<PredSym>,
}

impl DwfClause {
    pub fn validate(&self) -> Result<()> {
        let n = self.pred.params.len();
        if !n.is_multiple_of(2) {
            return Err(Error::Clause(format!("dwf predicate `{}` has odd arity {n}", self.pred.name)));
        }
        let (a, b) = self.pred.params.split_at(n / 2);
        if a.iter().zip(b).any(|(x, y)| x.sort != y.sort) {
            return Err(Error::Clause(format!("dwf predicate `{}` has halves of different sorts", self.pred.name)));
        }
        Ok(())
    }
}

/// A set of clauses with predicate declarations, in generation order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClauseSet {
    pub preds: Vec<Arc<PredSym>>,
    pub clauses: Vec<Clause>,
    pub provenance: Vec<Provenance>,
    pub dwf: Vec<DwfClause>,
}

impl ClauseSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Number of clauses including dwf clauses.
    pub fn len(&self) -> usize {
        self.clauses.len() + self.dwf.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn declare(&mut self, p: &Arc<PredSym>) {
        if !self.preds.iter().any(|q| q.name == p.name) {
            self.preds.push(p.clone());
        }
    }

    pub fn push(&mut self, clause: Clause, prov: Provenance) {
        self.clauses.push(clause);
        self.provenance.push(prov);
    }

    pub fn push_dwf(&mut self, pred: &Arc<PredSym>) {
        self.dwf.push(DwfClause { pred: pred.clone() });
    }

    pub fn pred(&self, name: &str) -> Option<&Arc<PredSym>> {
        self.preds.iter().find(|p| &*p.name == name)
    }

    pub fn is_dwf(&self, name: &str) -> bool {
        self.dwf.iter().any(|d| &*d.pred.name == name)
    }

    /// Append another clause set, sharing declarations by name.
    pub fn extend(&mut self, other: ClauseSet) {
        for p in &other.preds {
            self.declare(p);
        }
        self.clauses.extend(other.clauses);
        self.provenance.extend(other.provenance);
        self.dwf.extend(other.dwf);
    }

    /// Re-check every well-formedness condition.
    pub fn validate(&self) -> Result<()> {
        let mut by_name: HashMap<&str, &Arc<PredSym>> = HashMap::new();
        for p in &self.preds {
            if by_name.insert(&p.name, p).is_some() {
                return Err(Error::Clause(format!("predicate `{}` declared twice", p.name)));
            }
        }
        if self.provenance.len() != self.clauses.len() {
            return Err(Error::Clause("provenance list does not match the clause list".into()));
        }
        let known = |p: &Arc<PredSym>| -> Result<()> {
            match by_name.get(&*p.name) {
                Some(q) if **q == *p => Ok(()),
                Some(_) => Err(Error::Clause(format!("predicate `{}` used with a different signature", p.name))),
                None => Err(Error::UnknownPredicate(p.name.to_string())),
            }
        };
        for c in &self.clauses {
            c.validate()?;
            for a in c.atoms() {
                known(&a.pred)?;
            }
        }
        for d in &self.dwf {
            d.validate()?;
            known(&d.pred)?;
        }
        Ok(())
    }

    /// True when no clause head contains a disjunction of atoms.
    pub fn heads_disjunction_free(&self) -> bool {
        self.clauses.iter().all(|c| !c.head_constraint.has_atoms())
    }
}
