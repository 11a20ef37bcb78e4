//! Exhaustive search for finite models of a clause set.
//!
//! Every clause is grounded over the finite domains into constraints of the
//! form `b₁ ∧ … ∧ bₙ → A₁ ∨ … ∨ Aₘ` where each `bᵢ` is a ground atom and
//! each `Aⱼ` a conjunction of ground atoms (one per choice of the
//! existential variables). The search assigns ground atoms in predicate
//! declaration order and ascending tuple order, trying false first, with
//! unit propagation and an incremental cycle check for dwf predicates.
//! Atoms that occur in no ground constraint stay false.

use std::collections::BTreeSet;

use super::relation::{Interpretation, Relation};
use super::search::Search;
use crate::syntax::{ClauseSet, Domains, Value, Var};
use crate::{Error, Result};

/// Limits for [`enumerate_interpretations`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnumOptions {
    /// Maximum number of decisions.
    pub max_decisions: u64,
    /// Maximum number of ground constraints.
    pub max_ground: usize,
}

impl Default for EnumOptions {
    fn default() -> Self {
        EnumOptions { max_decisions: 1_000_000, max_ground: 2_000_000 }
    }
}

/// Verdict of the exhaustive search.
#[derive(Clone, Debug, PartialEq)]
pub enum Enumeration {
    Sat(Interpretation),
    Unsat,
    CapExceeded(String),
}

impl Enumeration {
    pub fn is_sat(&self) -> bool {
        matches!(self, Enumeration::Sat(_))
    }

    pub fn is_unsat(&self) -> bool {
        matches!(self, Enumeration::Unsat)
    }

    pub fn label(&self) -> &'static str {
        match self {
            Enumeration::Sat(_) => "SAT",
            Enumeration::Unsat => "UNSAT",
            Enumeration::CapExceeded(_) => "CAP_EXCEEDED",
        }
    }
}

/// Number of models found, and whether the count is exact.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ModelCount {
    pub count: u64,
    pub complete: bool,
}

struct Ground {
    body: Vec<u32>,
    alts: Vec<Vec<u32>>,
}

enum Status {
    Done,
    Open,
    Conflict,
    Unit(Vec<(u32, bool)>),
}

struct DwfBlock {
    offset: usize,
    m: usize,
}

struct Problem {
    rels: Vec<Relation>,
    offsets: Vec<usize>,
    nv: usize,
    cons: Vec<Ground>,
    dwf: Vec<DwfBlock>,
    var_dwf: Vec<Option<usize>>,
    decision_vars: Vec<u32>,
}

fn ground(cs: &ClauseSet, domains: &Domains, opts: &EnumOptions) -> Result<std::result::Result<Problem, String>> {
    cs.validate()?;
    let rels = cs.preds.iter().map(|p| Relation::empty(p, domains)).collect::<Result<Vec<_>>>()?;
    let mut offsets = Vec::with_capacity(rels.len());
    let mut nv = 0usize;
    for r in &rels {
        offsets.push(nv);
        nv += r.space();
    }
    if nv > u32::MAX as usize {
        return Ok(Err(format!("{nv} ground atoms")));
    }
    let pos = |name: &str| cs.preds.iter().position(|p| &*p.name == name).expect("validated");
    let mut cons = Vec::new();
    for c in &cs.clauses {
        let layout: Vec<Var> = c.all_vars.iter().chain(&c.exist_vars).cloned().collect();
        let nall = c.all_vars.len();
        let all_slots: Vec<usize> = (0..nall).collect();
        let ex_slots: Vec<usize> = (nall..layout.len()).collect();
        let body = Search::plan(&layout, &[], &all_slots, &[], &c.body_constraint, domains)?;
        let head = Search::plan(&layout, &all_slots, &ex_slots, &[], &c.head_constraint, domains)?;
        let atom_id = |a: &crate::syntax::Atom, env: &[Value]| -> u32 {
            let k = pos(&a.pred.name);
            let t: Vec<Value> =
                a.args.iter().map(|v| env[layout.iter().position(|w| w == v).unwrap()].clone()).collect();
            (offsets[k] + rels[k].index(&t).expect("values come from the domains")) as u32
        };
        let mut env = vec![Value::Bool(false); layout.len()];
        let mut overflow = false;
        body.run(&mut env, &mut |env| {
            let b: BTreeSet<u32> = c.body_atoms.iter().map(|a| atom_id(a, env)).collect();
            let mut alts: BTreeSet<Vec<u32>> = BTreeSet::new();
            let mut trivial = false;
            let mut scratch = env.to_vec();
            head.run(&mut scratch, &mut |henv| {
                let alt: BTreeSet<u32> = c.head_atoms.iter().map(|a| atom_id(a, henv)).collect();
                if alt.is_empty() || alt.is_subset(&b) {
                    trivial = true;
                    return false;
                }
                alts.insert(alt.into_iter().collect());
                true
            });
            if !trivial {
                cons.push(Ground { body: b.into_iter().collect(), alts: alts.into_iter().collect() });
                if cons.len() > opts.max_ground {
                    overflow = true;
                    return false;
                }
            }
            true
        });
        if overflow {
            return Ok(Err(format!("more than {} ground constraints", opts.max_ground)));
        }
    }
    let mut var_dwf = vec![None; nv];
    let mut dwf = Vec::new();
    for d in &cs.dwf {
        let k = pos(&d.pred.name);
        let m = rels[k].half_space()?;
        for v in offsets[k]..offsets[k] + rels[k].space() {
            var_dwf[v] = Some(dwf.len());
        }
        dwf.push(DwfBlock { offset: offsets[k], m });
    }
    let mut used = vec![false; nv];
    for g in &cons {
        for &v in g.body.iter().chain(g.alts.iter().flatten()) {
            used[v as usize] = true;
        }
    }
    let decision_vars = (0..nv as u32).filter(|&v| used[v as usize]).collect();
    Ok(Ok(Problem { rels, offsets, nv, cons, dwf, var_dwf, decision_vars }))
}

struct Solver<'p> {
    pb: &'p Problem,
    val: Vec<i8>,
    watch: Vec<Vec<u32>>,
    trail: Vec<u32>,
}

impl<'p> Solver<'p> {
    fn new(pb: &'p Problem) -> Self {
        let mut watch = vec![Vec::new(); pb.nv];
        for (i, g) in pb.cons.iter().enumerate() {
            let mut vs: Vec<u32> = g.body.iter().chain(g.alts.iter().flatten()).copied().collect();
            vs.sort_unstable();
            vs.dedup();
            for v in vs {
                watch[v as usize].push(i as u32);
            }
        }
        Solver { pb, val: vec![-1; pb.nv], watch, trail: Vec::new() }
    }

    fn status(&self, g: &Ground) -> Status {
        let mut unknown_body = None;
        let mut n_unknown_body = 0;
        for &b in &g.body {
            match self.val[b as usize] {
                0 => return Status::Done,
                -1 => {
                    n_unknown_body += 1;
                    unknown_body = Some(b);
                }
                _ => {}
            }
        }
        let mut live = Vec::new();
        for alt in &g.alts {
            let mut dead = false;
            let mut all_true = true;
            for &a in alt {
                match self.val[a as usize] {
                    0 => {
                        dead = true;
                        break;
                    }
                    -1 => all_true = false,
                    _ => {}
                }
            }
            if all_true && !dead {
                return Status::Done;
            }
            if !dead {
                live.push(alt);
                if live.len() > 1 {
                    return Status::Open;
                }
            }
        }
        match (n_unknown_body, live.len()) {
            (0, 0) => Status::Conflict,
            (0, 1) => {
                Status::Unit(live[0].iter().filter(|&&a| self.val[a as usize] == -1).map(|&a| (a, true)).collect())
            }
            (1, 0) => Status::Unit(vec![(unknown_body.unwrap(), false)]),
            _ => Status::Open,
        }
    }

    /// Whether setting `v` true closes a cycle in its dwf relation.
    fn closes_cycle(&self, v: usize, d: usize) -> bool {
        let DwfBlock { offset, m } = self.pb.dwf[d];
        let idx = v - offset;
        let (a, b) = (idx / m, idx % m);
        let mut seen = vec![false; m];
        let mut stack = vec![b];
        while let Some(x) = stack.pop() {
            if x == a {
                return true;
            }
            if seen[x] {
                continue;
            }
            seen[x] = true;
            for y in 0..m {
                if self.val[offset + x * m + y] == 1 && !seen[y] {
                    stack.push(y);
                }
            }
        }
        false
    }

    fn assign(&mut self, v: u32, b: bool) {
        self.val[v as usize] = b as i8;
        self.trail.push(v);
    }

    fn propagate(&mut self, mut qi: usize) -> bool {
        while qi < self.trail.len() {
            let v = self.trail[qi] as usize;
            qi += 1;
            if self.val[v] == 1 {
                if let Some(d) = self.pb.var_dwf[v] {
                    if self.closes_cycle(v, d) {
                        return false;
                    }
                }
            }
            for k in 0..self.watch[v].len() {
                let c = self.watch[v][k] as usize;
                match self.status(&self.pb.cons[c]) {
                    Status::Conflict => return false,
                    Status::Unit(lits) => {
                        for (u, b) in lits {
                            match self.val[u as usize] {
                                -1 => self.assign(u, b),
                                x if (x == 1) != b => return false,
                                _ => {}
                            }
                        }
                    }
                    _ => {}
                }
            }
        }
        true
    }

    fn initial(&mut self) -> bool {
        for c in 0..self.pb.cons.len() {
            match self.status(&self.pb.cons[c]) {
                Status::Conflict => return false,
                Status::Unit(lits) => {
                    let start = self.trail.len();
                    for (u, b) in lits {
                        match self.val[u as usize] {
                            -1 => self.assign(u, b),
                            x if (x == 1) != b => return false,
                            _ => {}
                        }
                    }
                    if !self.propagate(start) {
                        return false;
                    }
                }
                _ => {}
            }
        }
        true
    }

    fn undo_to(&mut self, len: usize) {
        while self.trail.len() > len {
            let v = self.trail.pop().unwrap();
            self.val[v as usize] = -1;
        }
    }

    /// Run the search, calling `on_model` for each model found until it
    /// returns false. Returns `Ok(true)` when the space was exhausted and
    /// `Err` with a message when the decision cap was hit.
    fn run(
        &mut self,
        max_decisions: u64,
        on_model: &mut dyn FnMut(&[i8]) -> bool,
    ) -> std::result::Result<bool, String> {
        if !self.initial() {
            return Ok(true);
        }
        // (trail length before the decision, variable, already flipped)
        let mut levels: Vec<(usize, u32, bool)> = Vec::new();
        let mut decisions = 0u64;
        loop {
            let next = self.pb.decision_vars.iter().copied().find(|&v| self.val[v as usize] == -1);
            let ok = match next {
                None => {
                    if !on_model(&self.val) {
                        return Ok(false);
                    }
                    false
                }
                Some(v) => {
                    decisions += 1;
                    if decisions > max_decisions {
                        return Err(format!("more than {max_decisions} decisions"));
                    }
                    let start = self.trail.len();
                    levels.push((start, v, false));
                    self.assign(v, false);
                    self.propagate(start)
                }
            };
            if ok {
                continue;
            }
            loop {
                let Some((start, v, flipped)) = levels.pop() else { return Ok(true) };
                self.undo_to(start);
                if flipped {
                    continue;
                }
                levels.push((start, v, true));
                self.assign(v, true);
                if self.propagate(start) {
                    break;
                }
            }
        }
    }
}

fn to_interpretation(pb: &Problem, val: &[i8]) -> Interpretation {
    let mut out = Interpretation::new();
    for (r, &off) in pb.rels.iter().zip(&pb.offsets) {
        let mut r = r.clone();
        for i in 0..r.space() {
            if val[off + i] == 1 {
                r.bits.insert(i);
            }
        }
        out.insert(r);
    }
    out
}

/// Search for a model of `cs` over `domains`.
pub fn enumerate_interpretations(cs: &ClauseSet, domains: &Domains, opts: EnumOptions) -> Result<Enumeration> {
    let pb = match ground(cs, domains, &opts)? {
        Ok(pb) => pb,
        Err(msg) => return Ok(Enumeration::CapExceeded(msg)),
    };
    let mut solver = Solver::new(&pb);
    let mut found = None;
    match solver.run(opts.max_decisions, &mut |val| {
        found = Some(to_interpretation(&pb, val));
        false
    }) {
        Err(msg) => Ok(Enumeration::CapExceeded(msg)),
        Ok(_) => Ok(found.map(Enumeration::Sat).unwrap_or(Enumeration::Unsat)),
    }
}

/// Count models of `cs`, up to `limit`. Ground atoms that occur in no
/// ground constraint are fixed to false and do not multiply the count.
pub fn count_models(cs: &ClauseSet, domains: &Domains, opts: EnumOptions, limit: u64) -> Result<ModelCount> {
    let pb = ground(cs, domains, &opts)?.map_err(Error::CapExceeded)?;
    let mut solver = Solver::new(&pb);
    let mut count = 0u64;
    match solver.run(opts.max_decisions, &mut |_| {
        count += 1;
        count < limit
    }) {
        Err(msg) => Err(Error::CapExceeded(msg)),
        Ok(complete) => Ok(ModelCount { count, complete }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interp::is_model;
    use crate::syntax::{Clause, Formula, PredSym, Provenance, RuleTag, Sort, Term};

    fn prov() -> Provenance {
        Provenance { rule: RuleTag::R8, counter: 0 }
    }

    #[test]
    fn chain_needs_every_successor() {
        let x = Var::new("x", Sort::Int);
        let y = x.primed();
        let d = Domains::new().with_int_range(0, 2);
        let p = PredSym::new("p", vec![x.clone()]);
        let mut cs = ClauseSet::new();
        cs.declare(&p);
        let eq = |v: &Var, k| Formula::eq(Term::Var(v.clone()), Term::int(k));
        cs.push(Clause::new(eq(&x, 0), vec![], vec![], Formula::True, vec![p.own_atom()]).unwrap(), prov());
        let step = Formula::eq(Term::Var(y.clone()), Term::Add(Box::new(Term::Var(x.clone())), Box::new(Term::int(1))));
        cs.push(
            Clause::new(step, vec![p.own_atom()], vec![], Formula::True, vec![p.atom(vec![y.clone()])]).unwrap(),
            prov(),
        );
        let Enumeration::Sat(m) = enumerate_interpretations(&cs, &d, EnumOptions::default()).unwrap() else { panic!() };
        assert_eq!(m.get("p").unwrap().count(), 3);
        assert!(is_model(&cs, &m, &d).unwrap());
        cs.push(Clause::new(eq(&x, 2), vec![p.own_atom()], vec![], Formula::False, vec![]).unwrap(), prov());
        assert!(enumerate_interpretations(&cs, &d, EnumOptions::default()).unwrap().is_unsat());
    }

    #[test]
    fn dwf_forbids_cycles() {
        let x = Var::new("x", Sort::Int);
        let y = x.primed();
        let d = Domains::new().with_int_range(0, 1);
        let r = PredSym::new("r", vec![x.clone(), y.clone()]);
        let mut cs = ClauseSet::new();
        cs.declare(&r);
        let ne = Formula::Not(Box::new(Formula::var_eq(&x, &y)));
        cs.push(Clause::new(ne, vec![], vec![], Formula::True, vec![r.own_atom()]).unwrap(), prov());
        assert!(enumerate_interpretations(&cs, &d, EnumOptions::default()).unwrap().is_sat());
        cs.push_dwf(&r);
        assert!(enumerate_interpretations(&cs, &d, EnumOptions::default()).unwrap().is_unsat());
    }

    #[test]
    fn counting_free_choice() {
        let b = Var::new("b", Sort::Bool);
        let p = PredSym::new("p", vec![b.clone()]);
        let q = PredSym::new("q", vec![b.clone()]);
        let mut cs = ClauseSet::new();
        cs.declare(&p);
        cs.declare(&q);
        // p(b) → q(b): three models per tuple, two tuples.
        cs.push(
            Clause::new(Formula::True, vec![p.own_atom()], vec![], Formula::True, vec![q.own_atom()]).unwrap(),
            prov(),
        );
        let n = count_models(&cs, &Domains::new(), EnumOptions::default(), 100).unwrap();
        assert_eq!(n, ModelCount { count: 9, complete: true });
    }
}
