//! Building models of translated clause sets from the finite-state truth.
//!
//! Every predicate a translation introduces gets the relation that the
//! completeness argument for its rule suggests, computed on the explicit
//! system of the problem at that point of the derivation.

use std::collections::VecDeque;
use std::sync::Arc;

use fixedbitset::FixedBitSet;

use super::relation::{Interpretation, Relation};
use super::search::Search;
use super::wf::transitive_closure;
use crate::oracle::system::{branches, BRANCH_LIMIT};
use crate::oracle::{complement, fair_states, Checker, FiniteSystem, DEFAULT_STATE_CAP};
use crate::syntax::{Atom, Domains, Formula, PredSym, Value, Var};
use crate::trans::{atom_dnf, Problem, Trace, Translation};
use crate::Result;

/// Explicit system of a problem, deciding its atoms with `interp`.
pub fn problem_system(
    pb: &Problem,
    init: &Formula,
    interp: &Interpretation,
    domains: &Domains,
) -> Result<FiniteSystem> {
    let eval = interp.atom_eval();
    FiniteSystem::expand_formulas(&pb.vars, init, &pb.next, &pb.fairness, domains, Some(&eval), DEFAULT_STATE_CAP)
}

fn state_relation(sys: &FiniteSystem, set: &FixedBitSet, pred: &Arc<PredSym>, domains: &Domains) -> Result<Relation> {
    Relation::from_tuples(pred, domains, set.ones().map(|i| sys.states[i].as_slice()))
}

fn pair_relation(sys: &FiniteSystem, rows: &[FixedBitSet], pred: &Arc<PredSym>, domains: &Domains) -> Result<Relation> {
    let mut r = Relation::empty(pred, domains)?;
    for (a, row) in rows.iter().enumerate() {
        for b in row.ones() {
            let t: Vec<Value> = sys.states[a].iter().chain(&sys.states[b]).cloned().collect();
            r.insert(&t)?;
        }
    }
    Ok(r)
}

fn closure_rows(sys: &FiniteSystem) -> Vec<FixedBitSet> {
    let n = sys.len();
    let mut rows = vec![FixedBitSet::with_capacity(n); n];
    for (a, ss) in sys.succ.iter().enumerate() {
        for &b in ss {
            rows[a].insert(b as usize);
        }
    }
    for k in 0..n {
        let rk = rows[k].clone();
        for row in rows.iter_mut() {
            if row.contains(k) {
                row.union_with(&rk);
            }
        }
    }
    rows
}

/// Relations for `p`, `t` and `r` of the universal fair-assertion rule:
/// `p` holds at states without fair paths, `t` is the transitive closure of
/// the transition relation and `r` relates a `p`-state to the end of every
/// chain of `t`-steps that visits the fairness conditions in order.
pub fn witness_rule6(
    sys: &FiniteSystem,
    p: &Arc<PredSym>,
    t: &Arc<PredSym>,
    r: &Arc<PredSym>,
    domains: &Domains,
) -> Result<(Relation, Relation, Relation)> {
    let n = sys.len();
    let pset = complement(&fair_states(sys));
    let tc = closure_rows(sys);
    let rrows: Vec<FixedBitSet> = if sys.fairness.is_empty() {
        (0..n).map(|a| if pset.contains(a) { tc[a].clone() } else { FixedBitSet::with_capacity(n) }).collect()
    } else {
        let mut cur: Vec<FixedBitSet> = (0..n)
            .map(|a| {
                let mut row = FixedBitSet::with_capacity(n);
                if pset.contains(a) {
                    row.insert(a);
                }
                row
            })
            .collect();
        for j in &sys.fairness {
            cur = cur
                .iter()
                .map(|row| {
                    let mut next = FixedBitSet::with_capacity(n);
                    for b in row.ones() {
                        next.union_with(&tc[b]);
                    }
                    next.intersect_with(j);
                    next
                })
                .collect();
        }
        cur
    };
    Ok((
        state_relation(sys, &pset, p, domains)?,
        pair_relation(sys, &tc, t, domains)?,
        pair_relation(sys, &rrows, r, domains)?,
    ))
}

/// Relations for the existential fair-assertion rule: every `q_i` holds at
/// the states with a fair path, and `r_i` is the transitive closure of a
/// shortest-path step relation from fair states outside `J_i` toward fair
/// states in `J_i`.
pub fn witness_rule7(
    sys: &FiniteSystem,
    qs: &[Arc<PredSym>],
    rs: &[Arc<PredSym>],
    domains: &Domains,
) -> Result<(Vec<Relation>, Vec<Relation>)> {
    let n = sys.len();
    let fair = fair_states(sys);
    let q = qs.iter().map(|p| state_relation(sys, &fair, p, domains)).collect::<Result<Vec<_>>>()?;
    let preds = sys.predecessors();
    let mut out = Vec::new();
    for (j, r) in sys.fairness.iter().zip(rs) {
        let mut dist = vec![usize::MAX; n];
        let mut queue = VecDeque::new();
        for s in fair.ones() {
            if j.contains(s) {
                dist[s] = 0;
                queue.push_back(s);
            }
        }
        while let Some(b) = queue.pop_front() {
            for &a in &preds[b] {
                let a = a as usize;
                if fair.contains(a) && dist[a] == usize::MAX {
                    dist[a] = dist[b] + 1;
                    queue.push_back(a);
                }
            }
        }
        let mut step = vec![FixedBitSet::with_capacity(n); n];
        for a in fair.ones() {
            if dist[a] == 0 || dist[a] == usize::MAX {
                continue;
            }
            if let Some(&b) = sys.succ[a].iter().find(|&&b| dist[b as usize] == dist[a] - 1) {
                step[a].insert(b as usize);
            }
        }
        out.push(transitive_closure(&pair_relation(sys, &step, r, domains)?)?);
    }
    Ok((q, out))
}

/// A candidate model of a translation's clause set. It is a model when the
/// translated property holds on the finite expansion of the program.
pub fn compose_witness(tr: &Translation, domains: &Domains) -> Result<Interpretation> {
    compose_witness_from(tr, Interpretation::new(), domains)
}

/// As [`compose_witness`], starting from given relations for predicates
/// that the problem itself mentions, such as hole predicates.
pub fn compose_witness_from(tr: &Translation, base: Interpretation, domains: &Domains) -> Result<Interpretation> {
    let mut interp = base;
    walk(&tr.trace, &mut interp, domains)?;
    for n in &tr.negs {
        let base = match interp.get(&n.base.name) {
            Some(r) => r.clone(),
            None => Relation::empty(&n.base, domains)?,
        };
        interp.insert(base.complement().renamed(&n.neg));
    }
    for s in &tr.sels {
        let args = &s.pred.params[..s.pred.params.len() - 1];
        let mut rel = Relation::empty(&s.pred, domains)?;
        select_into(&mut rel, &s.left, args, false, &interp, domains)?;
        select_into(&mut rel, &s.right, args, true, &interp, domains)?;
        interp.insert(rel);
    }
    for p in &tr.clauses.preds {
        if interp.get(&p.name).is_none() {
            interp.insert(Relation::empty(p, domains)?);
        }
    }
    Ok(interp)
}

/// Add `vals ++ [bit]` to `rel` for every assignment `vals` of `args` that
/// satisfies `f` under `interp`. Each disjunct is searched separately with
/// its positive atoms as joins, so only satisfying tuples are visited.
fn select_into(
    rel: &mut Relation,
    f: &Formula,
    args: &[Var],
    bit: bool,
    interp: &Interpretation,
    domains: &Domains,
) -> Result<()> {
    let targets: Vec<usize> = (0..args.len()).collect();
    for conj in atom_dnf(f) {
        let mut joins = Vec::new();
        let mut missing = false;
        for (a, _) in conj.lits.iter().filter(|(_, pos)| *pos) {
            match interp.get(&a.pred.name) {
                Some(r) => joins.push((r, a)),
                None => missing = true,
            }
        }
        if missing {
            continue;
        }
        let negs: Vec<(&Atom, Vec<usize>)> = conj
            .lits
            .iter()
            .filter(|(_, pos)| !*pos)
            .map(|(a, _)| {
                (a, a.args.iter().map(|v| args.iter().position(|w| w == v).expect("selector argument")).collect())
            })
            .collect();
        for branch in branches(&conj.constraint, BRANCH_LIMIT) {
            let search = Search::plan(args, &[], &targets, &joins, &Formula::and(branch), domains)?;
            let mut env = vec![Value::Bool(false); args.len()];
            let mut failed = None;
            search.run(&mut env, &mut |vals| {
                let excluded = negs.iter().any(|(a, slots)| {
                    let t: Vec<Value> = slots.iter().map(|&i| vals[i].clone()).collect();
                    interp.holds(&a.pred, &t)
                });
                if !excluded {
                    let mut t = vals.to_vec();
                    t.push(Value::Bool(bit));
                    if let Err(e) = rel.insert(&t) {
                        failed = Some(e);
                        return false;
                    }
                }
                true
            });
            if let Some(e) = failed {
                return Err(e);
            }
        }
    }
    Ok(())
}

fn walk(tr: &Trace, interp: &mut Interpretation, domains: &Domains) -> Result<()> {
    match tr {
        Trace::Split { problem, parts, subs, residual } => {
            let sys = problem_system(problem, &problem.init, interp, domains)?;
            for (aux, phi) in parts {
                let labels = {
                    let eval = interp.atom_eval();
                    Checker::new(&sys).with_atoms(&eval).label(phi)?
                };
                interp.insert(state_relation(&sys, &labels, aux, domains)?);
            }
            for s in subs {
                walk(s, interp, domains)?;
            }
            walk(residual, interp, domains)
        }
        Trace::Defair { then, .. } => walk(then, interp, domains),
        Trace::Extend { aux, then, .. } => {
            if let Some(aux) = aux {
                let ext = then.problem();
                let sys = problem_system(ext, &Formula::True, interp, domains)?;
                let labels = {
                    let eval = interp.atom_eval();
                    Checker::new(&sys).with_atoms(&eval).label(&ext.spec)?
                };
                interp.insert(state_relation(&sys, &labels, aux, domains)?);
            }
            walk(then, interp, domains)
        }
        Trace::Universal { problem, p, t, r, .. } => {
            let sys = problem_system(problem, &problem.init, interp, domains)?;
            let (pr, tr, rr) = witness_rule6(&sys, p, t, r, domains)?;
            interp.insert(pr);
            interp.insert(tr);
            interp.insert(rr);
            Ok(())
        }
        Trace::Existential { problem, qs, rs, .. } => {
            let sys = problem_system(problem, &problem.init, interp, domains)?;
            let (q, r) = witness_rule7(&sys, qs, rs, domains)?;
            q.into_iter().chain(r).for_each(|x| interp.insert(x));
            Ok(())
        }
        Trace::Assertion { .. } => Ok(()),
    }
}
