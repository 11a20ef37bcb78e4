//! Explicit finite transition systems.

use std::collections::HashMap;
use std::sync::Arc;

use fixedbitset::FixedBitSet;

use crate::compiled::Compiled;
use crate::syntax::{Domains, Formula, PredSym, Program, Sort, Value, Var};
use crate::{Error, Result};

/// Decides an uninterpreted predicate on concrete argument values.
pub type AtomEval<'a> = &'a dyn Fn(&Arc<PredSym>, &[Value]) -> bool;

/// Default bound on the number of states an expansion may produce.
pub const DEFAULT_STATE_CAP: usize = 4096;

/// States are total valuations of `vars`. Dead ends are kept: a state
/// without successors starts no infinite path.
#[derive(Clone, Debug, PartialEq)]
pub struct FiniteSystem {
    pub vars: Vec<Var>,
    pub states: Vec<Vec<Value>>,
    pub init: FixedBitSet,
    pub succ: Vec<Vec<u32>>,
    pub fairness: Vec<FixedBitSet>,
    index: HashMap<Vec<Value>, u32>,
}

impl FiniteSystem {
    /// Build from explicit parts.
    pub fn from_parts(
        vars: Vec<Var>,
        states: Vec<Vec<Value>>,
        init: Vec<usize>,
        transitions: Vec<(usize, usize)>,
        fairness: Vec<Vec<usize>>,
    ) -> Result<Self> {
        let n = states.len();
        for s in &states {
            if s.len() != vars.len() {
                return Err(Error::Domain(format!("state has {} values for {} variables", s.len(), vars.len())));
            }
            for (v, x) in vars.iter().zip(s) {
                if !v.sort.admits(x) {
                    return Err(Error::Domain(format!("value {x} is not of sort {} required by `{v}`", v.sort)));
                }
            }
        }
        let set = |idx: &[usize]| -> Result<FixedBitSet> {
            let mut b = FixedBitSet::with_capacity(n);
            for &i in idx {
                if i >= n {
                    return Err(Error::Domain(format!("state index {i} out of range")));
                }
                b.insert(i);
            }
            Ok(b)
        };
        let mut succ = vec![Vec::new(); n];
        for &(a, b) in &transitions {
            if a >= n || b >= n {
                return Err(Error::Domain(format!("transition ({a}, {b}) out of range")));
            }
            if !succ[a].contains(&(b as u32)) {
                succ[a].push(b as u32);
            }
        }
        for s in &mut succ {
            s.sort_unstable();
        }
        let init = set(&init)?;
        let fairness = fairness.iter().map(|f| set(f)).collect::<Result<Vec<_>>>()?;
        let index: HashMap<Vec<Value>, u32> = states.iter().cloned().enumerate().map(|(i, s)| (s, i as u32)).collect();
        if index.len() != n {
            return Err(Error::Domain("duplicate state".into()));
        }
        Ok(FiniteSystem { vars, states, init, succ, fairness, index })
    }

    /// Expand a program over finite domains.
    pub fn expand(program: &Program, domains: &Domains) -> Result<Self> {
        Self::expand_formulas(
            &program.vars,
            &program.init,
            &program.next,
            &program.fairness,
            domains,
            None,
            DEFAULT_STATE_CAP,
        )
    }

    /// Expand a system given by formulas that may mention predicate atoms,
    /// decided by `atoms`.
    pub fn expand_formulas(
        vars: &[Var],
        init: &Formula,
        next: &Formula,
        fairness: &[Formula],
        domains: &Domains,
        atoms: Option<AtomEval>,
        cap: usize,
    ) -> Result<Self> {
        let estimate = domains.product_size(vars)?;
        if estimate > cap as u128 {
            return Err(Error::StateCap { estimate, cap });
        }
        let states = valuations(vars, domains)?;
        let n = states.len();
        let layout: Vec<Var> = vars.iter().cloned().chain(vars.iter().map(Var::primed)).collect();
        let cnext = Compiled::over(next, &layout)?;
        if atoms.is_none() && cnext.has_atoms() {
            return Err(Error::Formula(
                "the transition relation mentions predicates but no interpretation was given".into(),
            ));
        }
        let half = vars.len();
        let doms = vars.iter().map(|v| domains.values(v)).collect::<Result<Vec<_>>>()?;
        let plans = branches(next, BRANCH_LIMIT)
            .into_iter()
            .map(|conjs| Branch::plan(&conjs, &layout, half))
            .collect::<Result<Vec<_>>>()?;
        let mut env = vec![Value::Bool(false); 2 * half];
        let mut succ = vec![Vec::new(); n];
        for (i, s) in states.iter().enumerate() {
            env[..half].clone_from_slice(s);
            for b in &plans {
                b.run(&mut env, &doms, atoms, &mut succ[i]);
            }
            succ[i].sort_unstable();
            succ[i].dedup();
        }
        let index = states.iter().cloned().enumerate().map(|(i, s)| (s, i as u32)).collect();
        let mut sys = FiniteSystem {
            vars: vars.to_vec(),
            states,
            init: FixedBitSet::with_capacity(n),
            succ,
            fairness: vec![],
            index,
        };
        sys.init = sys.label(init, atoms)?;
        sys.fairness = fairness.iter().map(|j| sys.label(j, atoms)).collect::<Result<_>>()?;
        Ok(sys)
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn transition_count(&self) -> usize {
        self.succ.iter().map(Vec::len).sum()
    }

    pub fn index_of(&self, vals: &[Value]) -> Option<usize> {
        self.index.get(vals).map(|&i| i as usize)
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.succ[a].binary_search(&(b as u32)).is_ok()
    }

    pub fn predecessors(&self) -> Vec<Vec<u32>> {
        let mut pred = vec![Vec::new(); self.len()];
        for (a, ss) in self.succ.iter().enumerate() {
            for &b in ss {
                pred[b as usize].push(a as u32);
            }
        }
        pred
    }

    /// The states satisfying an assertion over `vars`.
    pub fn label(&self, f: &Formula, atoms: Option<AtomEval>) -> Result<FixedBitSet> {
        let c = Compiled::over(f, &self.vars)?;
        if atoms.is_none() && c.has_atoms() {
            return Err(Error::Formula(format!("`{f}` mentions predicates but no interpretation was given")));
        }
        let decide = |i: usize, args: &[Value]| atoms.map(|a| a(&c.atoms[i].pred, args)).unwrap_or(false);
        let mut out = FixedBitSet::with_capacity(self.len());
        for (i, s) in self.states.iter().enumerate() {
            if c.eval(s, &decide) {
                out.insert(i);
            }
        }
        Ok(out)
    }

    /// The same system with different fairness conditions.
    pub fn with_fairness(&self, fairness: Vec<FixedBitSet>) -> Self {
        FiniteSystem { fairness, ..self.clone() }
    }

    /// Render a state as `x=1, b=true`.
    pub fn show_state(&self, i: usize) -> String {
        self.vars
            .iter()
            .zip(&self.states[i])
            .map(|(v, x)| format!("{v}={}", show_value(&v.sort, x)))
            .collect::<Vec<_>>()
            .join(", ")
    }
}

/// Render a value, using labels for locations.
pub fn show_value(sort: &Sort, x: &Value) -> String {
    match (sort, x) {
        (Sort::Loc(l), Value::Loc(i)) => l.labels().get(*i as usize).cloned().unwrap_or_else(|| x.to_string()),
        _ => x.to_string(),
    }
}

/// All valuations of `vars`, the last variable varying fastest.
/// Upper bound on the number of conjunctive branches a transition relation
/// is split into before successor search.
pub(crate) const BRANCH_LIMIT: usize = 64;

/// Split a formula into a disjunction of conjunct lists, distributing
/// conjunctions over disjunctions while the branch count stays within
/// `limit`.
pub(crate) fn branches(f: &Formula, limit: usize) -> Vec<Vec<Formula>> {
    match f {
        Formula::Or(v) if !v.is_empty() => {
            let out: Vec<Vec<Formula>> = v.iter().flat_map(|d| branches(d, limit)).collect();
            if out.len() <= limit {
                out
            } else {
                vec![vec![f.clone()]]
            }
        }
        Formula::And(v) => {
            let mut out: Vec<Vec<Formula>> = vec![vec![]];
            for part in v {
                let bs = branches(part, limit);
                if out.len() * bs.len() > limit {
                    out.iter_mut().for_each(|b| b.push(part.clone()));
                    continue;
                }
                out =
                    out.iter().flat_map(|pre| bs.iter().map(move |b| pre.iter().chain(b).cloned().collect())).collect();
            }
            out
        }
        Formula::True => vec![vec![]],
        _ => vec![vec![f.clone()]],
    }
}

/// One conjunctive branch of a transition relation. Conjunct `i` is
/// checked once the first `levels[i]` primed variables are bound.
struct Branch {
    conjs: Vec<Compiled>,
    by_level: Vec<Vec<usize>>,
}

impl Branch {
    fn plan(conjs: &[Formula], layout: &[Var], half: usize) -> Result<Self> {
        let mut by_level = vec![Vec::new(); half + 1];
        let mut compiled = Vec::new();
        for c in conjs {
            let level = c
                .vars()
                .iter()
                .filter_map(|v| layout.iter().position(|w| w == v))
                .map(|s| if s >= half { s - half + 1 } else { 0 })
                .max()
                .unwrap_or(0);
            by_level[level].push(compiled.len());
            compiled.push(Compiled::over(c, layout)?);
        }
        Ok(Branch { conjs: compiled, by_level })
    }

    fn holds(&self, level: usize, env: &[Value], atoms: Option<AtomEval>) -> bool {
        self.by_level[level].iter().all(|&i| {
            let c = &self.conjs[i];
            c.eval(env, &|k, args| atoms.is_some_and(|f| f(&c.atoms[k].pred, args)))
        })
    }

    fn run(&self, env: &mut [Value], doms: &[Arc<[Value]>], atoms: Option<AtomEval>, out: &mut Vec<u32>) {
        if self.holds(0, env, atoms) {
            self.go(0, 0, env, doms, atoms, out);
        }
    }

    fn go(
        &self,
        k: usize,
        index: usize,
        env: &mut [Value],
        doms: &[Arc<[Value]>],
        atoms: Option<AtomEval>,
        out: &mut Vec<u32>,
    ) {
        let half = doms.len();
        if k == half {
            out.push(index as u32);
            return;
        }
        for (pos, v) in doms[k].iter().enumerate() {
            env[half + k] = v.clone();
            if self.holds(k + 1, env, atoms) {
                self.go(k + 1, index * doms[k].len() + pos, env, doms, atoms, out);
            }
        }
    }
}

pub fn valuations(vars: &[Var], domains: &Domains) -> Result<Vec<Vec<Value>>> {
    let doms = vars.iter().map(|v| domains.values(v)).collect::<Result<Vec<_>>>()?;
    let mut out = vec![Vec::with_capacity(vars.len())];
    for d in &doms {
        let mut next = Vec::with_capacity(out.len() * d.len());
        for prefix in &out {
            for x in d.iter() {
                let mut p = prefix.clone();
                p.push(x.clone());
                next.push(p);
            }
        }
        out = next;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontend::parse_program;

    #[test]
    fn toggle_has_two_states_and_two_transitions() {
        let p = parse_program("vars { b: Bool; } init { !b } next { b' = !b }").unwrap();
        let s = FiniteSystem::expand(&p, &Domains::new()).unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(s.transition_count(), 2);
        assert_eq!(s.init.count_ones(..), 1);
    }

    #[test]
    fn empty_next_has_no_transitions() {
        let p = parse_program("vars { x: Int; } init { x = 0 } next { false }").unwrap();
        let s = FiniteSystem::expand(&p, &Domains::new().with_int_range(0, 2)).unwrap();
        assert_eq!(s.len(), 3);
        assert_eq!(s.transition_count(), 0);
    }

    #[test]
    fn cap_reports_estimate() {
        let p = parse_program("vars { x: Int; y: Int; } init { true } next { true }").unwrap();
        let err = FiniteSystem::expand_formulas(
            &p.vars,
            &p.init,
            &p.next,
            &[],
            &Domains::new().with_int_range(0, 99),
            None,
            100,
        )
        .unwrap_err();
        assert!(matches!(err, Error::StateCap { estimate: 10000, cap: 100 }));
    }
}
