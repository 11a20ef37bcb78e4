//! Deciding whether a finite interpretation satisfies clauses.

use serde::Serialize;

use super::relation::{Interpretation, Relation};
use super::search::Search;
use super::wf::{check_dwf, transitive_closure};
use crate::oracle::system::{branches, BRANCH_LIMIT};
use crate::syntax::{Clause, ClauseSet, Domains, Formula, Provenance, Value, Var};
use crate::{Error, Result};

/// An assignment to the universal variables under which the body holds and
/// no choice of the existential variables satisfies the head.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Countermodel {
    pub assignment: Vec<(String, Value)>,
}

impl std::fmt::Display for Countermodel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.assignment.iter().map(|(v, x)| format!("{v}={x}")).collect();
        write!(f, "{}", parts.join(", "))
    }
}

fn relation<'a>(interp: &'a Interpretation, name: &str) -> Result<&'a Relation> {
    interp.get(name).ok_or_else(|| Error::Interpretation(format!("no relation given for `{name}`")))
}

/// Check one clause. Returns a countermodel when it is violated.
pub fn check_clause(clause: &Clause, interp: &Interpretation, domains: &Domains) -> Result<Option<Countermodel>> {
    let layout: Vec<Var> = clause.all_vars.iter().chain(&clause.exist_vars).cloned().collect();
    let nall = clause.all_vars.len();
    let all_slots: Vec<usize> = (0..nall).collect();
    let ex_slots: Vec<usize> = (nall..layout.len()).collect();
    let body_atoms =
        clause.body_atoms.iter().map(|a| Ok((relation(interp, &a.pred.name)?, a))).collect::<Result<Vec<_>>>()?;
    let head_atoms =
        clause.head_atoms.iter().map(|a| Ok((relation(interp, &a.pred.name)?, a))).collect::<Result<Vec<_>>>()?;
    let head = Search::plan(&layout, &all_slots, &ex_slots, &head_atoms, &clause.head_constraint, domains)?;
    let mut witness = None;
    // A disjunctive body constraint is searched one branch at a time, so
    // that the equalities of each branch prune the enumeration.
    for branch in branches(&clause.body_constraint, BRANCH_LIMIT) {
        let body = Search::plan(&layout, &[], &all_slots, &body_atoms, &Formula::and(branch), domains)?;
        let mut env = vec![Value::Bool(false); layout.len()];
        body.run(&mut env, &mut |env| {
            let mut scratch = env.to_vec();
            let satisfied = !head.run(&mut scratch, &mut |_| false);
            if !satisfied {
                witness = Some(env[..nall].to_vec());
            }
            satisfied
        });
        if witness.is_some() {
            break;
        }
    }
    Ok(witness
        .map(|vals| Countermodel { assignment: clause.all_vars.iter().map(|v| v.to_string()).zip(vals).collect() }))
}

/// A reason an interpretation is not a model of a clause set.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Failure {
    Clause { index: usize, provenance: String, countermodel: Countermodel },
    NotWellFounded { pred: String },
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Clause { index, provenance, countermodel } => {
                write!(f, "clause {index} ({provenance}) is violated at {countermodel}")
            }
            Failure::NotWellFounded { pred } => write!(f, "`{pred}` is not disjunctively well-founded"),
        }
    }
}

/// Check every clause and dwf declaration. With `first_only` the check
/// stops at the first failure.
pub fn check_clause_set(
    cs: &ClauseSet,
    interp: &Interpretation,
    domains: &Domains,
    first_only: bool,
) -> Result<Vec<Failure>> {
    for p in &cs.preds {
        let r = relation(interp, &p.name)?;
        if r.pred.params.len() != p.params.len() || r.pred.params.iter().zip(&p.params).any(|(a, b)| a.sort != b.sort) {
            return Err(Error::Interpretation(format!("relation for `{}` has the wrong signature", p.name)));
        }
    }
    let mut out = Vec::new();
    for (i, (c, prov)) in cs.clauses.iter().zip(&cs.provenance).enumerate() {
        if let Some(cm) = check_clause(c, interp, domains)? {
            out.push(Failure::Clause { index: i, provenance: show_prov(prov), countermodel: cm });
            if first_only {
                return Ok(out);
            }
        }
    }
    for d in &cs.dwf {
        let r = relation(interp, &d.pred.name)?;
        if !check_dwf(&transitive_closure(r)?)? {
            out.push(Failure::NotWellFounded { pred: d.pred.name.to_string() });
            if first_only {
                return Ok(out);
            }
        }
    }
    Ok(out)
}

/// Whether `interp` satisfies every clause and dwf declaration.
pub fn is_model(cs: &ClauseSet, interp: &Interpretation, domains: &Domains) -> Result<bool> {
    Ok(check_clause_set(cs, interp, domains, true)?.is_empty())
}

fn show_prov(p: &Provenance) -> String {
    p.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{Formula, PredSym, Sort, Term};

    #[test]
    fn existential_head_and_countermodel() {
        let x = Var::new("x", Sort::Int);
        let y = x.primed();
        let d = Domains::new().with_int_range(0, 3);
        let p = PredSym::new("p", vec![x.clone()]);
        // p(x) → ∃x'. x' = x + 1 ∧ p(x')
        let c = Clause::new(
            Formula::True,
            vec![p.own_atom()],
            vec![y.clone()],
            Formula::eq(Term::Var(y.clone()), Term::Add(Box::new(Term::Var(x.clone())), Box::new(Term::int(1)))),
            vec![p.atom(vec![y.clone()])],
        )
        .unwrap();
        let mut i = Interpretation::new();
        i.insert(Relation::from_tuples(&p, &d, [&[Value::int(1)][..], &[Value::int(2)]]).unwrap());
        let cm = check_clause(&c, &i, &d).unwrap().unwrap();
        assert_eq!(cm.assignment, vec![("x".to_string(), Value::int(2))]);
        i.insert(Relation::from_tuples(&p, &d, [&[Value::int(2)][..], &[Value::int(3)]]).unwrap());
        assert!(check_clause(&c, &i, &d).unwrap().is_some());
        i.insert(Relation::empty(&p, &d).unwrap());
        assert!(check_clause(&c, &i, &d).unwrap().is_none());
    }
}
