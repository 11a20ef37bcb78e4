//! Path formulas as generalized Büchi automata and the emptiness check on
//! their product with a finite system.
//!
//! Path formulas are put in negation normal form over `U` and `R`, with
//! maximal state subformulas as propositions. A tableau node is a set of
//! obligations; expanding it yields choices, each with the propositional
//! literals it needs now, the obligations for the next step, and the
//! `U` formulas it postpones. Acceptance sits on transitions: bit `j` of an
//! edge mask is set when the edge does not postpone the `j`-th `U` formula,
//! and bit `nu + i` when the source state satisfies fairness condition `i`.
//! A path exists iff the product reaches a nontrivial SCC whose internal
//! edges together cover every bit.

use std::collections::{BTreeSet, HashMap};

use fixedbitset::FixedBitSet;
use petgraph::algo::tarjan_scc;
use petgraph::graph::{DiGraph, NodeIndex};

use super::system::FiniteSystem;
use crate::syntax::{PathFormula, StateFormula};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Ltl {
    True,
    False,
    /// Proposition `id`, positive when the flag is set.
    Prop(usize, bool),
    And(u32, u32),
    Or(u32, u32),
    X(u32),
    U(u32, u32),
    R(u32, u32),
}

/// Hash-consed LTL formulas in negation normal form.
#[derive(Clone, Debug, Default)]
pub struct Arena {
    pub nodes: Vec<Ltl>,
    memo: HashMap<Ltl, u32>,
}

impl Arena {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn mk(&mut self, l: Ltl) -> u32 {
        if let Some(&i) = self.memo.get(&l) {
            return i;
        }
        let i = self.nodes.len() as u32;
        self.nodes.push(l.clone());
        self.memo.insert(l, i);
        i
    }

    /// Convert a path formula, negated when `negate` is set. State
    /// subformulas become propositions numbered by `prop`.
    pub fn convert(&mut self, p: &PathFormula, negate: bool, prop: &mut dyn FnMut(&StateFormula) -> usize) -> u32 {
        match p {
            PathFormula::State(s) => {
                let id = prop(s);
                self.mk(Ltl::Prop(id, !negate))
            }
            PathFormula::Not(a) => self.convert(a, !negate, prop),
            PathFormula::X(a) => {
                let a = self.convert(a, negate, prop);
                self.mk(Ltl::X(a))
            }
            PathFormula::And(a, b) | PathFormula::Or(a, b) => {
                let a = self.convert(a, negate, prop);
                let b = self.convert(b, negate, prop);
                if matches!(p, PathFormula::And(..)) != negate {
                    self.mk(Ltl::And(a, b))
                } else {
                    self.mk(Ltl::Or(a, b))
                }
            }
            PathFormula::G(a) | PathFormula::F(a) => {
                let a = self.convert(a, negate, prop);
                let always = matches!(p, PathFormula::G(_)) != negate;
                if always {
                    let f = self.mk(Ltl::False);
                    self.mk(Ltl::R(f, a))
                } else {
                    let t = self.mk(Ltl::True);
                    self.mk(Ltl::U(t, a))
                }
            }
            PathFormula::U(a, b) => {
                let a = self.convert(a, negate, prop);
                let b = self.convert(b, negate, prop);
                if negate {
                    self.mk(Ltl::R(a, b))
                } else {
                    self.mk(Ltl::U(a, b))
                }
            }
        }
    }

    fn until_nodes(&self) -> Vec<u32> {
        (0..self.nodes.len() as u32).filter(|&i| matches!(self.nodes[i as usize], Ltl::U(..))).collect()
    }
}

#[derive(Clone, Debug, Default)]
struct Choice {
    lits: BTreeSet<(usize, bool)>,
    next: BTreeSet<u32>,
    postponed: BTreeSet<u32>,
    seen: BTreeSet<u32>,
}

fn expand(arena: &Arena, mut todo: Vec<u32>, mut cur: Choice, out: &mut Vec<Choice>) {
    while let Some(f) = todo.pop() {
        if !cur.seen.insert(f) {
            continue;
        }
        match arena.nodes[f as usize] {
            Ltl::True => {}
            Ltl::False => return,
            Ltl::Prop(i, pol) => {
                if cur.lits.contains(&(i, !pol)) {
                    return;
                }
                cur.lits.insert((i, pol));
            }
            Ltl::And(a, b) => {
                todo.push(a);
                todo.push(b);
            }
            Ltl::X(a) => {
                cur.next.insert(a);
            }
            Ltl::Or(a, b) => {
                let mut t = todo.clone();
                t.push(a);
                expand(arena, t, cur.clone(), out);
                todo.push(b);
            }
            Ltl::U(a, b) => {
                let mut t = todo.clone();
                t.push(b);
                expand(arena, t, cur.clone(), out);
                todo.push(a);
                cur.next.insert(f);
                cur.postponed.insert(f);
            }
            Ltl::R(a, b) => {
                let mut t = todo.clone();
                t.push(a);
                t.push(b);
                expand(arena, t, cur.clone(), out);
                todo.push(b);
                cur.next.insert(f);
            }
        }
    }
    out.push(cur);
}

/// States from which some path satisfies `root`, restricted to paths that
/// visit every set of `fair` infinitely often.
pub fn exists(
    sys: &FiniteSystem,
    arena: &Arena,
    root: u32,
    props: &[FixedBitSet],
    fair: &[FixedBitSet],
) -> Result<FixedBitSet> {
    let untils = arena.until_nodes();
    let bits = untils.len() + fair.len();
    if bits > 64 {
        return Err(Error::Formula(format!("{bits} acceptance conditions exceed the supported 64")));
    }
    let full: u64 = if bits == 64 { u64::MAX } else { (1u64 << bits) - 1 };
    let ubit: HashMap<u32, usize> = untils.iter().enumerate().map(|(j, &u)| (u, j)).collect();

    // Tableau nodes and their choices, with the postponement mask folded in.
    let mut tnodes: Vec<Vec<u32>> = Vec::new();
    let mut tindex: HashMap<Vec<u32>, u32> = HashMap::new();
    let mut tchoices: Vec<Vec<(Vec<(usize, bool)>, u32, u64)>> = Vec::new();
    let mut intern = |obl: Vec<u32>, tnodes: &mut Vec<Vec<u32>>| -> u32 {
        if let Some(&i) = tindex.get(&obl) {
            return i;
        }
        let i = tnodes.len() as u32;
        tindex.insert(obl.clone(), i);
        tnodes.push(obl);
        i
    };
    let t0 = intern(vec![root], &mut tnodes);
    let mut k = 0;
    while k < tnodes.len() {
        let mut raw = Vec::new();
        expand(arena, tnodes[k].clone(), Choice::default(), &mut raw);
        let mut cs = Vec::new();
        for c in raw {
            let mut mask = 0u64;
            for (&u, &j) in &ubit {
                if !c.postponed.contains(&u) {
                    mask |= 1 << j;
                }
            }
            let succ = intern(c.next.into_iter().collect(), &mut tnodes);
            cs.push((c.lits.into_iter().collect(), succ, mask));
        }
        tchoices.push(cs);
        k += 1;
    }

    let mut graph: DiGraph<(), u64> = DiGraph::new();
    let mut pindex: HashMap<(u32, u32), NodeIndex> = HashMap::new();
    let mut work = Vec::new();
    let mut starts = Vec::with_capacity(sys.len());
    for s in 0..sys.len() as u32 {
        let n = graph.add_node(());
        pindex.insert((s, t0), n);
        work.push((s, t0, n));
        starts.push(n);
    }
    while let Some((s, t, n)) = work.pop() {
        let mut fmask = 0u64;
        for (i, j) in fair.iter().enumerate() {
            if j.contains(s as usize) {
                fmask |= 1 << (untils.len() + i);
            }
        }
        for (lits, tnext, umask) in &tchoices[t as usize] {
            if !lits.iter().all(|&(p, pol)| props[p].contains(s as usize) == pol) {
                continue;
            }
            for &s2 in &sys.succ[s as usize] {
                let m = match pindex.get(&(s2, *tnext)) {
                    Some(&m) => m,
                    None => {
                        let m = graph.add_node(());
                        pindex.insert((s2, *tnext), m);
                        work.push((s2, *tnext, m));
                        m
                    }
                };
                graph.add_edge(n, m, umask | fmask);
            }
        }
    }

    let sccs = tarjan_scc(&graph);
    let mut comp = vec![0usize; graph.node_count()];
    for (c, nodes) in sccs.iter().enumerate() {
        for n in nodes {
            comp[n.index()] = c;
        }
    }
    let mut acc = vec![(false, 0u64); sccs.len()];
    for e in graph.raw_edges() {
        let (a, b) = (e.source().index(), e.target().index());
        if comp[a] == comp[b] {
            acc[comp[a]].0 = true;
            acc[comp[a]].1 |= e.weight;
        }
    }
    let mut good = FixedBitSet::with_capacity(graph.node_count());
    let mut stack = Vec::new();
    for n in 0..graph.node_count() {
        let (nontrivial, mask) = acc[comp[n]];
        if nontrivial && mask == full {
            good.insert(n);
            stack.push(NodeIndex::new(n));
        }
    }
    while let Some(n) = stack.pop() {
        for m in graph.neighbors_directed(n, petgraph::Direction::Incoming) {
            if !good.contains(m.index()) {
                good.insert(m.index());
                stack.push(m);
            }
        }
    }
    let mut out = FixedBitSet::with_capacity(sys.len());
    for (s, n) in starts.iter().enumerate() {
        if good.contains(n.index()) {
            out.insert(s);
        }
    }
    Ok(out)
}
