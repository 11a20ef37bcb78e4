//! The eight translation rules and the deterministic driver.

use std::sync::Arc;

use super::namer::{Family, FreshNamer};
use super::normalize::{ClauseBuilder, NegPair, RawClause, SelDef};
use crate::frontend::to_nnf;
use crate::syntax::var::{copies, primed};
use crate::syntax::{ClauseSet, Formula, PathFormula, PathQuant, PredSym, Program, RuleTag, StateFormula, Var};
use crate::{Error, Result};

/// A verification problem `(v, init, next, J, φ)` as it evolves during
/// translation. Unlike [`Program`], its formulas may mention predicate atoms
/// and its variables include introduced booleans.
#[derive(Clone, Debug, PartialEq)]
pub struct Problem {
    pub vars: Vec<Var>,
    pub init: Formula,
    pub next: Formula,
    pub fairness: Vec<Formula>,
    pub spec: StateFormula,
}

impl Problem {
    pub fn new(program: &Program, spec: StateFormula) -> Self {
        Problem {
            vars: program.vars.clone(),
            init: program.init.clone(),
            next: program.next.clone(),
            fairness: program.fairness.clone(),
            spec,
        }
    }

    fn with_spec(&self, spec: StateFormula) -> Self {
        Problem { spec, ..self.clone() }
    }
}

/// Which temporal operator an extension step removed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Temporal {
    X,
    G,
    U,
}

impl Temporal {
    pub fn rule(self) -> RuleTag {
        match self {
            Temporal::X => RuleTag::R3,
            Temporal::G => RuleTag::R4,
            Temporal::U => RuleTag::R5,
        }
    }
}

/// The tree of rule applications, one node per recursive call.
#[derive(Clone, Debug, PartialEq)]
pub enum Trace {
    /// Rule 1, applied to every proper basic subformula in turn. `parts`
    /// pairs each aux predicate with the subformula it stands for; `subs`
    /// translate those subformulas, `residual` the rewritten formula.
    Split { problem: Problem, parts: Vec<(Arc<PredSym>, StateFormula)>, subs: Vec<Trace>, residual: Box<Trace> },
    /// Rule 2.
    Defair { problem: Problem, then: Box<Trace> },
    /// Rules 3, 4, 5. `aux` is present for the existential case.
    Extend { problem: Problem, op: Temporal, x: Var, aux: Option<Arc<PredSym>>, then: Box<Trace> },
    /// Rule 6.
    Universal { problem: Problem, c: Formula, p: Arc<PredSym>, t: Arc<PredSym>, r: Arc<PredSym> },
    /// Rule 7. With empty fairness `qs` has one element and `rs` is empty.
    Existential { problem: Problem, c: Formula, qs: Vec<Arc<PredSym>>, rs: Vec<Arc<PredSym>> },
    /// Rule 8.
    Assertion { problem: Problem, c: Formula },
}

impl Trace {
    pub fn problem(&self) -> &Problem {
        match self {
            Trace::Split { problem, .. }
            | Trace::Defair { problem, .. }
            | Trace::Extend { problem, .. }
            | Trace::Universal { problem, .. }
            | Trace::Existential { problem, .. }
            | Trace::Assertion { problem, .. } => problem,
        }
    }

    /// Rule numbers in application order (pre-order).
    pub fn rules(&self) -> Vec<u8> {
        let mut out = Vec::new();
        self.collect_rules(&mut out);
        out
    }

    fn collect_rules(&self, out: &mut Vec<u8>) {
        match self {
            Trace::Split { subs, residual, .. } => {
                out.push(1);
                subs.iter().for_each(|s| s.collect_rules(out));
                residual.collect_rules(out);
            }
            Trace::Defair { then, .. } => {
                out.push(2);
                then.collect_rules(out);
            }
            Trace::Extend { op, then, .. } => {
                out.push(match op {
                    Temporal::X => 3,
                    Temporal::G => 4,
                    Temporal::U => 5,
                });
                then.collect_rules(out);
            }
            Trace::Universal { .. } => out.push(6),
            Trace::Existential { .. } => out.push(7),
            Trace::Assertion { .. } => out.push(8),
        }
    }
}

/// Output of the driver.
#[derive(Clone, Debug)]
pub struct Translation {
    pub clauses: ClauseSet,
    pub trace: Trace,
    pub negs: Vec<NegPair>,
    pub sels: Vec<SelDef>,
}

/// `Clauses(D, φ)` for a program and a CTL* state formula. The formula is
/// brought into negation normal form first.
pub fn translate(program: &Program, spec: &StateFormula) -> Result<Translation> {
    let mut tr = Translator::for_program(program);
    let trace = tr.run(Problem::new(program, to_nnf(spec)))?;
    Ok(tr.finish(trace))
}

/// Stateful driver; exposed so that synthesis can share names and
/// complement pairs with the translation.
#[derive(Clone, Debug)]
pub struct Translator {
    pub builder: ClauseBuilder,
}

impl Translator {
    pub fn new(namer: FreshNamer) -> Self {
        Translator { builder: ClauseBuilder::new(namer) }
    }

    pub fn for_program(program: &Program) -> Self {
        Self::new(FreshNamer::with_reserved(program.vars.iter().map(|v| v.name.to_string())))
    }

    pub fn finish(self, trace: Trace) -> Translation {
        let b = self.builder;
        Translation { clauses: b.out, trace, negs: b.negs, sels: b.sels }
    }

    /// Translate one problem, appending its clauses.
    pub fn run(&mut self, pb: Problem) -> Result<Trace> {
        check_spec_scope(&pb)?;
        if let Some(c) = pb.spec.as_assertion() {
            return self.rule8(pb, c);
        }
        if !pb.spec.is_basic() {
            return self.rule1(pb);
        }
        let StateFormula::Quant(q, path) = &pb.spec else { unreachable!("basic formulas are quantified") };
        if !q.is_fair() {
            let next = rule2_defair(&pb);
            let then = self.run(next)?;
            return Ok(Trace::Defair { problem: pb, then: Box::new(then) });
        }
        if let Some(c) = path.as_assertion() {
            return if q.is_universal() { self.rule6(pb, c) } else { self.rule7(pb, c) };
        }
        let node = eligible_temporal(path).ok_or_else(|| {
            Error::Formula(format!("no eliminable temporal operator in `{}`; is the formula in NNF?", pb.spec))
        })?;
        self.extend(pb.clone(), *q, path, &node)
    }

    fn rule1(&mut self, pb: Problem) -> Result<Trace> {
        let mut spec = pb.spec.clone();
        let mut parts = Vec::new();
        while let Some(phi1) = proper_basic_subformula(&spec) {
            let aux = self.builder.fresh_pred(Family::Aux, pb.vars.clone());
            let atom = StateFormula::Assert(Formula::App(aux.own_atom()));
            spec = spec.substitute(&phi1, &atom);
            parts.push((aux, phi1));
        }
        let mut subs = Vec::new();
        for (aux, phi1) in &parts {
            let sub = Problem { init: Formula::App(aux.own_atom()), ..pb.with_spec(phi1.clone()) };
            subs.push(self.run(sub)?);
        }
        let residual = self.run(pb.with_spec(spec))?;
        Ok(Trace::Split { problem: pb, parts, subs, residual: Box::new(residual) })
    }

    fn extend(&mut self, pb: Problem, q: PathQuant, path: &PathFormula, node: &PathFormula) -> Result<Trace> {
        let (op, family) = match node {
            PathFormula::X(_) => (Temporal::X, Family::XNext),
            PathFormula::G(_) => (Temporal::G, Family::XGlobally),
            PathFormula::U(..) => (Temporal::U, Family::XUntil),
            _ => unreachable!(),
        };
        let x = self.builder.fresh_bool(family);
        let ext = extend_problem(&pb, node, &x)?;
        let (ext, aux) = if q.is_universal() {
            (ext, None)
        } else {
            let aux = self.builder.fresh_pred(Family::Aux, ext.vars.clone());
            let raw = RawClause::new(pb.init.clone(), vec![x.clone()], Formula::App(aux.own_atom()), op.rule());
            self.builder.emit(raw)?;
            (Problem { init: Formula::App(aux.own_atom()), ..ext }, Some(aux))
        };
        let spec =
            StateFormula::quant(q, path.substitute_path(node, &PathFormula::assertion(Formula::Bool(x.clone()))));
        let then = self.run(ext.with_spec(spec))?;
        Ok(Trace::Extend { problem: pb, op, x, aux, then: Box::new(then) })
    }

    fn rule6(&mut self, pb: Problem, c: Formula) -> Result<Trace> {
        let v = pb.vars.clone();
        let v1 = primed(&v);
        let v2 = primed(&v1);
        let pair: Vec<Var> = v.iter().chain(&v1).cloned().collect();
        let p = self.builder.fresh_pred(Family::P, v.clone());
        let t = self.builder.fresh_pred(Family::T, pair.clone());
        let r = self.builder.fresh_pred(Family::R, pair.clone());
        let app = |s: &Arc<PredSym>, args: Vec<Var>| Formula::App(s.atom(args));
        let cat = |a: &[Var], b: &[Var]| a.iter().chain(b).cloned().collect::<Vec<_>>();
        let b = &mut self.builder;
        b.emit(RawClause::new(
            Formula::and([pb.init.clone(), Formula::not(c.clone())]),
            vec![],
            app(&p, v.clone()),
            RuleTag::R6,
        ))?;
        b.emit(RawClause::new(
            Formula::and([pb.next.clone(), app(&p, v.clone())]),
            vec![],
            app(&p, v1.clone()),
            RuleTag::R6,
        ))?;
        let r_body = if pb.fairness.is_empty() {
            Formula::and([app(&p, v.clone()), app(&t, pair.clone())])
        } else {
            let mut parts = vec![app(&p, copies(&v, 0))];
            for (i, j) in pb.fairness.iter().enumerate() {
                let (a, z) = (copies(&v, i as u32), copies(&v, i as u32 + 1));
                parts.push(app(&t, cat(&a, &z)));
                let k = i as u32 + 1;
                parts.push(j.map_vars(&|x| x.with_copy(k)));
            }
            Formula::and(parts)
        };
        let r_head = if pb.fairness.is_empty() {
            app(&r, pair.clone())
        } else {
            app(&r, cat(&copies(&v, 0), &copies(&v, pb.fairness.len() as u32)))
        };
        b.emit(RawClause::new(r_body, vec![], r_head, RuleTag::R6))?;
        b.push_dwf(&r);
        b.emit(RawClause::new(pb.next.clone(), vec![], app(&t, pair.clone()), RuleTag::R6))?;
        b.emit(RawClause::new(
            Formula::and([app(&t, pair.clone()), pb.next.prime()]),
            vec![],
            app(&t, cat(&v, &v2)),
            RuleTag::R6,
        ))?;
        Ok(Trace::Universal { problem: pb, c, p, t, r })
    }

    fn rule7(&mut self, pb: Problem, c: Formula) -> Result<Trace> {
        let v = pb.vars.clone();
        let v1 = primed(&v);
        let v2 = primed(&v1);
        let pair: Vec<Var> = v.iter().chain(&v1).cloned().collect();
        let app = |s: &Arc<PredSym>, args: Vec<Var>| Formula::App(s.atom(args));
        let k = pb.fairness.len().max(1);
        let qs: Vec<_> = (0..k).map(|_| self.builder.fresh_pred(Family::Q, v.clone())).collect();
        let rs: Vec<_> = if pb.fairness.is_empty() {
            vec![]
        } else {
            (0..k).map(|_| self.builder.fresh_pred(Family::R, pair.clone())).collect()
        };
        let b = &mut self.builder;
        b.emit(RawClause::new(
            pb.init.clone(),
            vec![],
            Formula::and([c.clone(), app(&qs[0], v.clone())]),
            RuleTag::R7,
        ))?;
        if pb.fairness.is_empty() {
            b.emit(RawClause::new(
                app(&qs[0], v.clone()),
                v1.clone(),
                Formula::and([pb.next.clone(), app(&qs[0], v1.clone())]),
                RuleTag::R7,
            ))?;
        } else {
            for (i, j) in pb.fairness.iter().enumerate() {
                let succ = &qs[(i + 1) % k];
                let head = Formula::and([
                    pb.next.clone(),
                    Formula::or([
                        Formula::and([j.clone(), app(succ, v1.clone())]),
                        Formula::and([app(&rs[i], pair.clone()), app(&qs[i], v1.clone())]),
                    ]),
                ]);
                b.emit(RawClause::new(app(&qs[i], v.clone()), v1.clone(), head, RuleTag::R7))?;
                b.push_dwf(&rs[i]);
                let body =
                    Formula::and([app(&rs[i], pair.clone()), app(&rs[i], v1.iter().chain(&v2).cloned().collect())]);
                let head = app(&rs[i], v.iter().chain(&v2).cloned().collect());
                b.emit(RawClause::new(body, vec![], head, RuleTag::R7))?;
            }
        }
        Ok(Trace::Existential { problem: pb, c, qs, rs })
    }

    fn rule8(&mut self, pb: Problem, c: Formula) -> Result<Trace> {
        self.builder.emit(RawClause::new(pb.init.clone(), vec![], c.clone(), RuleTag::R8))?;
        Ok(Trace::Assertion { problem: pb, c })
    }
}

fn check_spec_scope(pb: &Problem) -> Result<()> {
    let mut vars = Vec::new();
    collect_state_vars(&pb.spec, &mut vars);
    if let Some(v) = vars.iter().find(|v| !pb.vars.contains(v)) {
        return Err(Error::Formula(format!("specification mentions `{v}`, which is not a program variable")));
    }
    Ok(())
}

fn collect_state_vars(s: &StateFormula, out: &mut Vec<Var>) {
    match s {
        StateFormula::Assert(f) => f.collect_vars(out),
        StateFormula::And(a, b) | StateFormula::Or(a, b) => {
            collect_state_vars(a, out);
            collect_state_vars(b, out);
        }
        StateFormula::Not(a) => collect_state_vars(a, out),
        StateFormula::Quant(_, p) => collect_path_vars(p, out),
    }
}

fn collect_path_vars(p: &PathFormula, out: &mut Vec<Var>) {
    match p {
        PathFormula::State(s) => collect_state_vars(s, out),
        PathFormula::X(a) | PathFormula::G(a) | PathFormula::F(a) | PathFormula::Not(a) => collect_path_vars(a, out),
        PathFormula::U(a, b) | PathFormula::And(a, b) | PathFormula::Or(a, b) => {
            collect_path_vars(a, out);
            collect_path_vars(b, out);
        }
    }
}

/// Leftmost-outermost basic state subformula other than the whole formula.
pub fn proper_basic_subformula(spec: &StateFormula) -> Option<StateFormula> {
    spec.find_preorder(&|s| s.is_basic() && s != spec).cloned()
}

/// Rule 1 for a single subformula: the subproblem `(v, aux(v), next, J, φ₁)`
/// and the residual problem with every occurrence of `φ₁` replaced by
/// `aux(v)`.
pub fn rule1_split(pb: &Problem, phi1: &StateFormula, aux: &Arc<PredSym>) -> Result<(Problem, Problem)> {
    if !phi1.is_basic() || phi1 == &pb.spec {
        return Err(Error::Formula(format!("`{phi1}` is not a proper basic subformula")));
    }
    let atom = StateFormula::Assert(Formula::App(aux.own_atom()));
    let residual = crate::syntax::substitute_state_subformula(&pb.spec, phi1, &atom)?;
    let sub = Problem { init: Formula::App(aux.own_atom()), ..pb.with_spec(phi1.clone()) };
    Ok((sub, pb.with_spec(residual)))
}

/// Rule 2: drop the fairness conditions and make the quantifier fair.
pub fn rule2_defair(pb: &Problem) -> Problem {
    let spec = match &pb.spec {
        StateFormula::Quant(q, p) => StateFormula::Quant(q.fair(), p.clone()),
        s => s.clone(),
    };
    Problem { fairness: vec![], ..pb.with_spec(spec) }
}

/// Leftmost-innermost `X c`, `G c` or `c₁ U c₂` with assertion operands.
pub fn eligible_temporal(path: &PathFormula) -> Option<PathFormula> {
    path.find_postorder(&|p| match p {
        PathFormula::X(a) | PathFormula::G(a) => a.as_assertion().is_some(),
        PathFormula::U(a, b) => a.as_assertion().is_some() && b.as_assertion().is_some(),
        _ => false,
    })
    .cloned()
}

/// The program part of Rules 3, 4, 5: add `x`, constrain it in `next`, and
/// for G and U add a fairness condition. Init and spec are left unchanged.
pub fn extend_problem(pb: &Problem, node: &PathFormula, x: &Var) -> Result<Problem> {
    let xf = Formula::Bool(x.clone());
    let xp = Formula::Bool(x.primed());
    let assertion =
        |p: &PathFormula| p.as_assertion().ok_or_else(|| Error::Formula(format!("operand `{p}` is not an assertion")));
    let (constraint, fair) = match node {
        PathFormula::X(a) => (Formula::iff(xf, assertion(a)?.prime()), None),
        PathFormula::G(a) => {
            let c = assertion(a)?;
            (Formula::iff(xf.clone(), Formula::and([c.clone(), xp])), Some(Formula::or([xf, Formula::not(c)])))
        }
        PathFormula::U(a, b) => {
            let (c1, c2) = (assertion(a)?, assertion(b)?);
            (
                Formula::iff(xf.clone(), Formula::or([c2.clone(), Formula::and([c1, xp])])),
                Some(Formula::or([Formula::not(xf), c2])),
            )
        }
        other => return Err(Error::Formula(format!("`{other}` is not an X, G or U node"))),
    };
    let mut vars = pb.vars.clone();
    vars.push(x.clone());
    let mut fairness = pb.fairness.clone();
    fairness.extend(fair);
    Ok(Problem { vars, next: Formula::and([pb.next.clone(), constraint]), fairness, ..pb.clone() })
}
