//! Fair CTL* labelling of finite systems.

use std::collections::HashMap;

use fixedbitset::FixedBitSet;

use super::gba::{self, Arena};
use super::lasso::exists_lasso;
use super::system::{AtomEval, FiniteSystem};
use crate::syntax::{PathFormula, PathQuant, StateFormula};
use crate::Result;

/// How path quantifiers are decided.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Engine {
    /// Tableau automaton and SCC analysis. Exact.
    Tableau,
    /// Bounded lasso enumeration. Exact only for a large enough bound.
    Lasso { bound: usize },
}

/// Computes and caches the set of states satisfying each state formula.
pub struct Checker<'a> {
    sys: &'a FiniteSystem,
    atoms: Option<AtomEval<'a>>,
    engine: Engine,
    cache: HashMap<StateFormula, FixedBitSet>,
}

impl<'a> Checker<'a> {
    pub fn new(sys: &'a FiniteSystem) -> Self {
        Checker { sys, atoms: None, engine: Engine::Tableau, cache: HashMap::new() }
    }

    pub fn with_atoms(mut self, atoms: AtomEval<'a>) -> Self {
        self.atoms = Some(atoms);
        self
    }

    pub fn with_engine(mut self, engine: Engine) -> Self {
        self.engine = engine;
        self
    }

    pub fn label(&mut self, phi: &StateFormula) -> Result<FixedBitSet> {
        if let Some(b) = self.cache.get(phi) {
            return Ok(b.clone());
        }
        let out = match phi {
            StateFormula::Assert(f) => self.sys.label(f, self.atoms)?,
            StateFormula::And(a, b) => {
                let mut x = self.label(a)?;
                x.intersect_with(&self.label(b)?);
                x
            }
            StateFormula::Or(a, b) => {
                let mut x = self.label(a)?;
                x.union_with(&self.label(b)?);
                x
            }
            StateFormula::Not(a) => complement(&self.label(a)?),
            StateFormula::Quant(q, p) => self.quantified(*q, p)?,
        };
        self.cache.insert(phi.clone(), out.clone());
        Ok(out)
    }

    fn quantified(&mut self, q: PathQuant, p: &PathFormula) -> Result<FixedBitSet> {
        let fair: Vec<FixedBitSet> = if q.is_fair() { self.sys.fairness.clone() } else { vec![] };
        let universal = q.is_universal();
        let exists = match self.engine {
            Engine::Tableau => {
                let mut subs: Vec<StateFormula> = Vec::new();
                let mut arena = Arena::new();
                let root = arena.convert(p, universal, &mut |s| match subs.iter().position(|t| t == s) {
                    Some(i) => i,
                    None => {
                        subs.push(s.clone());
                        subs.len() - 1
                    }
                });
                let props = subs.iter().map(|s| self.label(s)).collect::<Result<Vec<_>>>()?;
                gba::exists(self.sys, &arena, root, &props, &fair)?
            }
            Engine::Lasso { bound } => {
                let mut subs = Vec::new();
                collect_state_subformulas(p, &mut subs);
                let mut labels = HashMap::new();
                for s in subs {
                    let l = self.label(&s)?;
                    labels.insert(s, l);
                }
                let target = if universal { PathFormula::Not(Box::new(p.clone())) } else { p.clone() };
                exists_lasso(self.sys, &target, &|s, i| labels[s].contains(i as usize), &fair, bound)
            }
        };
        Ok(if universal { complement(&exists) } else { exists })
    }

    /// Every state formula labelled so far.
    pub fn labels(&self) -> &HashMap<StateFormula, FixedBitSet> {
        &self.cache
    }
}

fn collect_state_subformulas(p: &PathFormula, out: &mut Vec<StateFormula>) {
    match p {
        PathFormula::State(s) => {
            if !out.contains(s) {
                out.push((**s).clone());
            }
        }
        PathFormula::X(a) | PathFormula::G(a) | PathFormula::F(a) | PathFormula::Not(a) => {
            collect_state_subformulas(a, out)
        }
        PathFormula::U(a, b) | PathFormula::And(a, b) | PathFormula::Or(a, b) => {
            collect_state_subformulas(a, out);
            collect_state_subformulas(b, out);
        }
    }
}

pub fn complement(b: &FixedBitSet) -> FixedBitSet {
    let mut c = b.clone();
    c.toggle_range(..);
    c
}

/// Outcome of model checking: the verdict, the initial states that violate
/// the formula, and the label set of every state subformula evaluated.
#[derive(Clone, Debug)]
pub struct ModelCheck {
    pub holds: bool,
    pub violations: Vec<usize>,
    pub labels: Vec<(StateFormula, FixedBitSet)>,
}

/// Decide whether every initial state satisfies `phi`.
pub fn model_check(sys: &FiniteSystem, phi: &StateFormula) -> Result<ModelCheck> {
    run(Checker::new(sys), sys, phi)
}

/// As [`model_check`], deciding predicate atoms with `atoms`.
pub fn model_check_with(sys: &FiniteSystem, phi: &StateFormula, atoms: AtomEval) -> Result<ModelCheck> {
    run(Checker::new(sys).with_atoms(atoms), sys, phi)
}

fn run(mut c: Checker, sys: &FiniteSystem, phi: &StateFormula) -> Result<ModelCheck> {
    let l = c.label(phi)?;
    let violations: Vec<usize> = sys.init.ones().filter(|&s| !l.contains(s)).collect();
    let mut labels: Vec<(StateFormula, FixedBitSet)> = c.cache.into_iter().collect();
    labels.sort_by_key(|(f, _)| f.size());
    Ok(ModelCheck { holds: violations.is_empty(), violations, labels })
}

/// The states satisfying `Q p`, with `Q` a fair or non-fair quantifier.
pub fn check_fair_quantified(sys: &FiniteSystem, q: PathQuant, p: &PathFormula) -> Result<FixedBitSet> {
    Checker::new(sys).label(&StateFormula::Quant(q, p.clone().into()))
}

/// States with at least one fair path.
pub fn fair_states(sys: &FiniteSystem) -> FixedBitSet {
    check_fair_quantified(sys, PathQuant::Ef, &PathFormula::assertion(crate::syntax::Formula::True))
        .expect("a constant formula always labels")
}
