//! Enumeration of variable assignments that satisfy a conjunction of
//! constraint conjuncts and interpreted atoms.
//!
//! Atoms are joined first, binding their arguments from the tuples of the
//! relation; the remaining variables range over their domains. Every
//! conjunct is evaluated at the earliest step where all its variables are
//! bound.

use std::sync::Arc;

use crate::compiled::Compiled;
use crate::syntax::{Atom, Domains, Formula, Value, Var};
use crate::Result;

use super::relation::Relation;

enum Step<'a> {
    /// Iterate the relation's tuples, binding the positions marked fresh
    /// and checking the others.
    /// The leading `prefix` positions are bound beforehand and select a
    /// contiguous block of the tuple space.
    Join {
        rel: &'a Relation,
        slots: Vec<usize>,
        fresh: Vec<bool>,
        prefix: usize,
    },
    /// All arguments are bound; test membership.
    Member {
        rel: &'a Relation,
        slots: Vec<usize>,
    },
    Var(usize),
}

pub(crate) struct Search<'a> {
    doms: Vec<Option<Arc<[Value]>>>,
    steps: Vec<Step<'a>>,
    pre: Vec<usize>,
    after: Vec<Vec<usize>>,
    conjs: Vec<Compiled>,
}

impl<'a> Search<'a> {
    /// Plan a search over `layout` that binds the `targets` slots, given that
    /// the `bound` slots are already set.
    pub fn plan(
        layout: &[Var],
        bound: &[usize],
        targets: &[usize],
        atoms: &[(&'a Relation, &Atom)],
        constraint: &Formula,
        domains: &Domains,
    ) -> Result<Self> {
        let slot = |v: &Var| layout.iter().position(|w| w == v).expect("atom argument outside the layout");
        let mut is_bound = vec![false; layout.len()];
        for &b in bound {
            is_bound[b] = true;
        }
        let mut steps = Vec::new();
        let mut after_bind: Vec<Vec<usize>> = Vec::new();
        for (rel, atom) in atoms {
            let slots: Vec<usize> = atom.args.iter().map(slot).collect();
            let mut fresh = Vec::with_capacity(slots.len());
            for &s in &slots {
                fresh.push(!is_bound[s]);
                is_bound[s] = true;
            }
            after_bind.push(slots.clone());
            if fresh.iter().any(|&f| f) {
                let prefix = fresh.iter().take_while(|&&f| !f).count();
                steps.push(Step::Join { rel, slots, fresh, prefix });
            } else {
                steps.push(Step::Member { rel, slots });
            }
        }
        let mut doms = vec![None; layout.len()];
        for &t in targets {
            if !is_bound[t] {
                is_bound[t] = true;
                doms[t] = Some(domains.values(&layout[t])?);
                steps.push(Step::Var(t));
                after_bind.push(vec![t]);
            }
        }
        let mut conjs = Vec::new();
        let mut needs = Vec::new();
        for c in constraint.conjuncts() {
            if *c == Formula::True {
                continue;
            }
            conjs.push(Compiled::over(c, layout)?);
            needs.push(c.vars().iter().map(slot).collect::<Vec<_>>());
        }
        let mut avail = vec![false; layout.len()];
        for &b in bound {
            avail[b] = true;
        }
        let ready = |avail: &[bool], n: &[usize]| n.iter().all(|&s| avail[s]);
        let mut done = vec![false; conjs.len()];
        let mut pre = Vec::new();
        for (i, n) in needs.iter().enumerate() {
            if ready(&avail, n) {
                done[i] = true;
                pre.push(i);
            }
        }
        let mut after = Vec::new();
        for newly in &after_bind {
            for &s in newly {
                avail[s] = true;
            }
            let mut now = Vec::new();
            for (i, n) in needs.iter().enumerate() {
                if !done[i] && ready(&avail, n) {
                    done[i] = true;
                    now.push(i);
                }
            }
            after.push(now);
        }
        debug_assert!(done.iter().all(|&d| d), "every conjunct must become evaluable");
        Ok(Search { doms, steps, pre, after, conjs })
    }

    fn checks(&self, which: &[usize], env: &[Value]) -> bool {
        which.iter().all(|&i| self.conjs[i].eval_pure(env))
    }

    /// Call `visit` on every solution until it returns `false`. Returns
    /// `false` when stopped early.
    pub fn run(&self, env: &mut [Value], visit: &mut dyn FnMut(&[Value]) -> bool) -> bool {
        if !self.checks(&self.pre, env) {
            return true;
        }
        self.go(0, env, visit)
    }

    fn go(&self, k: usize, env: &mut [Value], visit: &mut dyn FnMut(&[Value]) -> bool) -> bool {
        if k == self.steps.len() {
            return visit(env);
        }
        match &self.steps[k] {
            Step::Member { rel, slots } => {
                let t: Vec<Value> = slots.iter().map(|&s| env[s].clone()).collect();
                if rel.contains(&t) && self.checks(&self.after[k], env) {
                    return self.go(k + 1, env, visit);
                }
                true
            }
            Step::Join { rel, slots, fresh, prefix } => {
                let key: Vec<Value> = slots[..*prefix].iter().map(|&s| env[s].clone()).collect();
                'tuples: for i in rel.ones_in(rel.prefix_range(&key)) {
                    let t = rel.tuple(i);
                    // Repeated fresh arguments must agree; bind in order and
                    // compare against earlier bindings within the tuple.
                    let mut seen: Vec<usize> = Vec::new();
                    for (pos, (&s, &f)) in slots.iter().zip(fresh).enumerate() {
                        if f && !seen.contains(&s) {
                            env[s] = t[pos].clone();
                            seen.push(s);
                        } else if env[s] != t[pos] {
                            continue 'tuples;
                        }
                    }
                    if self.checks(&self.after[k], env) && !self.go(k + 1, env, visit) {
                        return false;
                    }
                }
                true
            }
            Step::Var(s) => {
                let dom = self.doms[*s].as_ref().expect("domain planned");
                for v in dom.iter() {
                    env[*s] = v.clone();
                    if self.checks(&self.after[k], env) && !self.go(k + 1, env, visit) {
                        return false;
                    }
                }
                true
            }
        }
    }
}
