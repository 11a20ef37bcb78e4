//! A bounded lasso enumerator, used to cross-check the automaton-based
//! checker on very small systems.
//!
//! A lasso is a finite path `s0 .. s(n-1)` plus an edge from `s(n-1)` back
//! to some `sj`. Path formulas are evaluated directly on the resulting
//! ultimately periodic word, without any normal form. On a finite system
//! every satisfiable path formula has a lasso witness of bounded length, so
//! the result is exact once `bound` is large enough; it is exponential in
//! `bound`.

use fixedbitset::FixedBitSet;

use super::system::FiniteSystem;
use crate::syntax::{PathFormula, StateFormula};

struct Lasso<'a> {
    states: &'a [u32],
    loop_start: usize,
}

impl Lasso<'_> {
    fn succ(&self, i: usize) -> usize {
        if i + 1 < self.states.len() {
            i + 1
        } else {
            self.loop_start
        }
    }

    /// Positions visited from `i` on, each once, in path order.
    fn from(&self, i: usize) -> Vec<usize> {
        let mut out = vec![i];
        let mut k = self.succ(i);
        while !out.contains(&k) {
            out.push(k);
            k = self.succ(k);
        }
        out
    }

    fn eval(&self, p: &PathFormula, i: usize, state: &dyn Fn(&StateFormula, u32) -> bool) -> bool {
        match p {
            PathFormula::State(s) => state(s, self.states[i]),
            PathFormula::Not(a) => !self.eval(a, i, state),
            PathFormula::And(a, b) => self.eval(a, i, state) && self.eval(b, i, state),
            PathFormula::Or(a, b) => self.eval(a, i, state) || self.eval(b, i, state),
            PathFormula::X(a) => self.eval(a, self.succ(i), state),
            PathFormula::G(a) => self.from(i).into_iter().all(|k| self.eval(a, k, state)),
            PathFormula::F(a) => self.from(i).into_iter().any(|k| self.eval(a, k, state)),
            PathFormula::U(a, b) => {
                for k in self.from(i) {
                    if self.eval(b, k, state) {
                        return true;
                    }
                    if !self.eval(a, k, state) {
                        return false;
                    }
                }
                false
            }
        }
    }
}

/// States that start a lasso of at most `bound` distinct positions whose
/// loop meets every set of `fair` and that satisfies `p`.
pub fn exists_lasso(
    sys: &FiniteSystem,
    p: &PathFormula,
    state: &dyn Fn(&StateFormula, u32) -> bool,
    fair: &[FixedBitSet],
    bound: usize,
) -> FixedBitSet {
    let mut out = FixedBitSet::with_capacity(sys.len());
    for s in 0..sys.len() as u32 {
        let mut path = vec![s];
        if search(sys, p, state, fair, bound, &mut path) {
            out.insert(s as usize);
        }
    }
    out
}

fn search(
    sys: &FiniteSystem,
    p: &PathFormula,
    state: &dyn Fn(&StateFormula, u32) -> bool,
    fair: &[FixedBitSet],
    bound: usize,
    path: &mut Vec<u32>,
) -> bool {
    let last = *path.last().unwrap() as usize;
    for j in 0..path.len() {
        if !sys.has_edge(last, path[j] as usize) {
            continue;
        }
        let fair_loop = fair.iter().all(|f| path[j..].iter().any(|&s| f.contains(s as usize)));
        if fair_loop && (Lasso { states: path, loop_start: j }).eval(p, 0, state) {
            return true;
        }
    }
    if path.len() >= bound {
        return false;
    }
    for &t in &sys.succ[last] {
        path.push(t);
        let found = search(sys, p, state, fair, bound, path);
        path.pop();
        if found {
            return true;
        }
    }
    false
}
