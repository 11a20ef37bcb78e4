//! Hole-filling synthesis for partial programs.
//!
//! Every hole is filled with an uninterpreted predicate over the data
//! variables `v_r` (all variables except `pc`): `u_c_<l>(v_r)` for a
//! condition hole at `l` and `u_a_<l>(v_r, v_r')` for an assignment hole.
//! The program with these predicates in its transition relation is then
//! translated like any other, and one extra clause per assignment hole
//! forces the assignment to be defined everywhere.
//!
//! Negated condition predicates stay as `¬u_c_<l>` inside the transition
//! formula; the translation realizes them through complement pairs when the
//! formula lands in a clause.

mod resolving;

use std::sync::Arc;

pub use resolving::{
    apply_formulas, apply_resolving, enumerate_resolving, extract_resolving, next_psi, relation_formula,
    ResolvingFunction,
};

use crate::frontend::to_nnf;
use crate::syntax::var::primed;
use crate::syntax::{
    Clause, ClauseSet, Formula, Hole, PartialProgram, PredSym, Provenance, RuleTag, StateFormula, Term, Var,
};
use crate::trans::{FreshNamer, Problem, Translation, Translator};
use crate::{Error, Result};

/// A hole with its predicate.
#[derive(Clone, Debug, PartialEq)]
pub struct HolePred {
    pub hole: Hole,
    pub pred: Arc<PredSym>,
}

/// The name of a hole's predicate.
pub fn hole_pred_name(h: &Hole) -> String {
    match h {
        Hole::Cond { l, .. } => format!("u_c_{l}"),
        Hole::Assign { l, .. } => format!("u_a_{l}"),
    }
}

/// One predicate per hole, in file order.
pub fn make_hole_predicates(pp: &PartialProgram) -> Result<Vec<HolePred>> {
    pp.validate()?;
    let vr = pp.data_vars();
    let pair: Vec<Var> = vr.iter().cloned().chain(primed(&vr)).collect();
    let mut out: Vec<HolePred> = Vec::new();
    for h in &pp.holes {
        let name = hole_pred_name(h);
        if out.iter().any(|o| *o.pred.name == *name) {
            return Err(Error::Hole(format!("duplicate hole location `{}`", h.loc())));
        }
        let params = match h {
            Hole::Cond { .. } => vr.clone(),
            Hole::Assign { .. } => pair.clone(),
        };
        out.push(HolePred { hole: h.clone(), pred: PredSym::new(name, params) });
    }
    Ok(out)
}

/// `⊤ → ∃v_r'. u_a_<l>(v_r, v_r')` for every assignment hole.
pub fn delta_a(holes: &[HolePred]) -> Result<ClauseSet> {
    let mut cs = ClauseSet::new();
    for (i, hp) in holes.iter().enumerate() {
        cs.declare(&hp.pred);
        if let Hole::Assign { .. } = hp.hole {
            let n = hp.pred.params.len() / 2;
            let exist = hp.pred.params[n..].to_vec();
            let c = Clause::new(Formula::True, vec![], exist, Formula::True, vec![hp.pred.own_atom()])?;
            cs.push(c, Provenance { rule: RuleTag::DeltaA, counter: i as u32 });
        }
    }
    Ok(cs)
}

fn pc_is(pc: &Var, label: &str) -> Result<Formula> {
    let crate::syntax::Sort::Loc(sort) = &pc.sort else { unreachable!("pc has location sort") };
    let i = sort.index_of(label).ok_or_else(|| Error::Hole(format!("`{label}` is not a label of pc")))?;
    Ok(Formula::eq(Term::Var(pc.clone()), Term::Label(sort.clone(), i)))
}

fn unchanged(vr: &[Var]) -> Formula {
    Formula::and(vr.iter().map(|v| Formula::var_eq(&v.primed(), v)))
}

/// The hole disjuncts given a way to fill condition and assignment holes,
/// in the order: conditions taken, conditions not taken, assignments.
pub(crate) fn hole_disjuncts(
    pp: &PartialProgram,
    holes: &[HolePred],
    fill: &dyn Fn(&HolePred) -> Result<Formula>,
) -> Result<Vec<Formula>> {
    let pc = pp.program.pc().ok_or_else(|| Error::Hole("missing pc".into()))?.clone();
    let vr = pp.data_vars();
    let mut taken = Vec::new();
    let mut not_taken = Vec::new();
    let mut assigns = Vec::new();
    for hp in holes {
        match &hp.hole {
            Hole::Cond { l, lt, lf } => {
                let c = fill(hp)?;
                taken.push(Formula::and([pc_is(&pc, l)?, pc_is(&pc.primed(), lt)?, c.clone(), unchanged(&vr)]));
                not_taken.push(Formula::and([
                    pc_is(&pc, l)?,
                    pc_is(&pc.primed(), lf)?,
                    Formula::not(c),
                    unchanged(&vr),
                ]));
            }
            Hole::Assign { l, next } => {
                assigns.push(Formula::and([pc_is(&pc, l)?, pc_is(&pc.primed(), next)?, fill(hp)?]));
            }
        }
    }
    Ok(taken.into_iter().chain(not_taken).chain(assigns).collect())
}

/// `next_U`: the original transition relation or a step through a hole.
pub fn build_next_u(pp: &PartialProgram, holes: &[HolePred]) -> Result<Formula> {
    let parts = hole_disjuncts(pp, holes, &|hp| Ok(Formula::App(hp.pred.own_atom())))?;
    if parts.is_empty() {
        return Ok(pp.program.next.clone());
    }
    Ok(Formula::or(std::iter::once(pp.program.next.clone()).chain(parts)))
}

/// Clauses of a synthesis problem together with the hole predicates.
#[derive(Clone, Debug)]
pub struct SynthTranslation {
    pub holes: Vec<HolePred>,
    pub translation: Translation,
}

impl SynthTranslation {
    pub fn clauses(&self) -> &ClauseSet {
        &self.translation.clauses
    }
}

/// `Δ(P, H, φ)`: the totality clauses of the assignment holes followed by
/// the translation of `P_U`. With no holes this is exactly the translation
/// of `P`.
pub fn delta_synth(pp: &PartialProgram, spec: &StateFormula) -> Result<SynthTranslation> {
    let holes = make_hole_predicates(pp)?;
    let next_u = build_next_u(pp, &holes)?;
    let reserved =
        pp.program.vars.iter().map(|v| v.name.to_string()).chain(holes.iter().map(|h| h.pred.name.to_string()));
    let mut tr = Translator::new(FreshNamer::with_reserved(reserved));
    tr.builder.out = delta_a(&holes)?;
    let pb = Problem {
        vars: pp.program.vars.clone(),
        init: pp.program.init.clone(),
        next: next_u,
        fairness: pp.program.fairness.clone(),
        spec: to_nnf(spec),
    };
    let trace = tr.run(pb)?;
    Ok(SynthTranslation { holes, translation: tr.finish(trace) })
}
