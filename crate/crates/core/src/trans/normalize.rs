//! Turning rule output into clauses of the required shape.
//!
//! Rules produce [`RawClause`]s whose body and head are assertions that may
//! mention predicate atoms anywhere, including under negation and
//! disjunction. A clause body must be a constraint plus a list of atoms, and
//! a head must be a constraint plus a list of atoms under existential
//! quantifiers. Normalization computes a disjunctive normal form in which
//! atom-free subformulas stay opaque, then:
//!
//! * body disjuncts become separate clauses with the same head,
//! * negated atoms are replaced by a complement predicate `n_p` constrained
//!   by `p ∧ n_p → ⊥` and `⊤ → p ∨ n_p`,
//! * head disjunctions are encoded with a selector predicate and a boolean
//!   selector bit, nesting to the right for more than two disjuncts.

use std::sync::Arc;

use super::namer::{Family, FreshNamer};
use crate::syntax::{Atom, Clause, ClauseSet, Formula, PredSym, Provenance, RuleTag, Sort, Var};
use crate::Result;

/// A clause before normalization.
#[derive(Clone, Debug, PartialEq)]
pub struct RawClause {
    pub body: Formula,
    pub exist: Vec<Var>,
    pub head: Formula,
    pub rule: RuleTag,
}

impl RawClause {
    pub fn new(body: Formula, exist: Vec<Var>, head: Formula, rule: RuleTag) -> Self {
        RawClause { body, exist, head, rule }
    }
}

/// One disjunct: an atom-free constraint and signed atoms.
#[derive(Clone, Debug, PartialEq)]
pub struct Conj {
    pub constraint: Formula,
    pub lits: Vec<(Atom, bool)>,
}

impl Conj {
    fn pure(f: Formula) -> Self {
        Conj { constraint: f, lits: vec![] }
    }

    fn lit(a: &Atom, pos: bool) -> Self {
        Conj { constraint: Formula::True, lits: vec![(a.clone(), pos)] }
    }

    fn contradictory(&self) -> bool {
        self.constraint == Formula::False
            || self.lits.iter().any(|(a, s)| self.lits.iter().any(|(b, t)| a == b && s != t))
    }

    /// The conjunct as a formula, negative literals as `¬atom`.
    pub fn to_formula(&self) -> Formula {
        Formula::and(std::iter::once(self.constraint.clone()).chain(self.lits.iter().map(|(a, pos)| {
            if *pos {
                Formula::App(a.clone())
            } else {
                Formula::not(Formula::App(a.clone()))
            }
        })))
    }
}

fn product(xs: Vec<Conj>, ys: Vec<Conj>) -> Vec<Conj> {
    let mut out = Vec::new();
    for x in &xs {
        for y in &ys {
            let mut lits = x.lits.clone();
            for l in &y.lits {
                if !lits.contains(l) {
                    lits.push(l.clone());
                }
            }
            let c = Conj { constraint: Formula::and([x.constraint.clone(), y.constraint.clone()]), lits };
            if !c.contradictory() {
                out.push(c);
            }
        }
    }
    out
}

fn products(parts: Vec<Vec<Conj>>) -> Vec<Conj> {
    parts.into_iter().fold(vec![Conj::pure(Formula::True)], product)
}

fn dnf_pos(f: &Formula) -> Vec<Conj> {
    if !f.has_atoms() {
        return vec![Conj::pure(f.clone())];
    }
    match f {
        Formula::App(a) => vec![Conj::lit(a, true)],
        Formula::Not(g) => dnf_neg(g),
        Formula::And(v) => products(v.iter().map(dnf_pos).collect()),
        Formula::Or(v) => v.iter().flat_map(dnf_pos).collect(),
        Formula::Implies(a, b) => dnf_neg(a).into_iter().chain(dnf_pos(b)).collect(),
        Formula::Iff(a, b) => {
            let mut out = product(dnf_pos(a), dnf_pos(b));
            out.extend(product(dnf_neg(a), dnf_neg(b)));
            out
        }
        Formula::True | Formula::False | Formula::Bool(_) | Formula::Cmp(..) => unreachable!(),
    }
}

fn dnf_neg(f: &Formula) -> Vec<Conj> {
    if !f.has_atoms() {
        return vec![Conj::pure(Formula::not(f.clone()))];
    }
    match f {
        Formula::App(a) => vec![Conj::lit(a, false)],
        Formula::Not(g) => dnf_pos(g),
        Formula::And(v) => v.iter().flat_map(dnf_neg).collect(),
        Formula::Or(v) => products(v.iter().map(dnf_neg).collect()),
        Formula::Implies(a, b) => product(dnf_pos(a), dnf_neg(b)),
        Formula::Iff(a, b) => {
            let mut out = product(dnf_pos(a), dnf_neg(b));
            out.extend(product(dnf_neg(a), dnf_pos(b)));
            out
        }
        Formula::True | Formula::False | Formula::Bool(_) | Formula::Cmp(..) => unreachable!(),
    }
}

/// Disjunctive normal form over atoms. Disjuncts with the same literal set
/// are merged by joining their constraints, so an atom-free formula yields
/// exactly one disjunct. An unsatisfiable formula yields `[False]`.
pub fn atom_dnf(f: &Formula) -> Vec<Conj> {
    let mut groups: Vec<Conj> = Vec::new();
    for c in dnf_pos(f) {
        let same = |g: &Conj| g.lits.len() == c.lits.len() && g.lits.iter().all(|l| c.lits.contains(l));
        match groups.iter_mut().find(|g| same(g)) {
            Some(g) => g.constraint = Formula::or([g.constraint.clone(), c.constraint.clone()]),
            None => groups.push(c),
        }
    }
    if groups.is_empty() {
        groups.push(Conj::pure(Formula::False));
    }
    groups
}

/// A complement pair created by negation encoding.
#[derive(Clone, Debug, PartialEq)]
pub struct NegPair {
    pub base: Arc<PredSym>,
    pub neg: Arc<PredSym>,
}

/// A selector predicate from head-disjunction encoding. `sel(args, bit)`
/// with the bit false commits to `left`, with the bit true to `right`.
/// Both formulas are in terms of the original atoms (negations included).
#[derive(Clone, Debug, PartialEq)]
pub struct SelDef {
    pub pred: Arc<PredSym>,
    pub bit: Var,
    pub left: Formula,
    pub right: Formula,
}

/// Accumulates normalized clauses together with everything needed to
/// interpret the predicates it introduced.
#[derive(Clone, Debug)]
pub struct ClauseBuilder {
    pub namer: FreshNamer,
    pub out: ClauseSet,
    pub negs: Vec<NegPair>,
    pub sels: Vec<SelDef>,
}

impl ClauseBuilder {
    pub fn new(namer: FreshNamer) -> Self {
        ClauseBuilder { namer, out: ClauseSet::new(), negs: vec![], sels: vec![] }
    }

    fn prov(&self, rule: RuleTag) -> Provenance {
        Provenance { rule, counter: self.namer.issued() }
    }

    pub fn fresh_pred(&mut self, family: Family, params: Vec<Var>) -> Arc<PredSym> {
        let p = PredSym::new(self.namer.fresh(family), params);
        self.out.declare(&p);
        p
    }

    pub fn fresh_bool(&mut self, family: Family) -> Var {
        Var::new(self.namer.fresh(family), Sort::Bool)
    }

    pub fn push_dwf(&mut self, p: &Arc<PredSym>) {
        self.out.push_dwf(p);
    }

    /// Complement predicate of `p`, creating it and its two defining
    /// clauses on first use.
    pub fn encode_negation(&mut self, p: &Arc<PredSym>) -> Result<Arc<PredSym>> {
        if let Some(n) = self.negs.iter().find(|n| n.base.name == p.name) {
            return Ok(n.neg.clone());
        }
        if let Some(n) = self.negs.iter().find(|n| n.neg.name == p.name) {
            return Ok(n.base.clone());
        }
        let name = self.namer.negation_of(&p.name);
        let neg = PredSym::new(name, p.params.clone());
        self.out.declare(&neg);
        self.negs.push(NegPair { base: p.clone(), neg: neg.clone() });
        let prov = self.prov(RuleTag::Neg);
        self.out.push(
            Clause::new(Formula::True, vec![p.own_atom(), neg.own_atom()], vec![], Formula::False, vec![])?,
            prov,
        );
        let both = Formula::or([Formula::App(p.own_atom()), Formula::App(neg.own_atom())]);
        self.emit(RawClause::new(Formula::True, vec![], both, RuleTag::Neg))?;
        Ok(neg)
    }

    fn positive_atoms(&mut self, lits: &[(Atom, bool)]) -> Result<Vec<Atom>> {
        lits.iter()
            .map(|(a, pos)| {
                if *pos {
                    Ok(a.clone())
                } else {
                    let n = self.encode_negation(&a.pred)?;
                    Ok(n.atom(a.args.clone()))
                }
            })
            .collect()
    }

    /// Normalize and append a raw clause.
    pub fn emit(&mut self, raw: RawClause) -> Result<()> {
        let body = atom_dnf(&raw.body);
        let head = atom_dnf(&raw.head);
        let mut pending = Vec::new();
        let (exist, head_c, head_atoms) = if head.len() == 1 {
            let atoms = self.positive_atoms(&head[0].lits)?;
            (raw.exist.clone(), head[0].constraint.clone(), atoms)
        } else {
            let (sel, bit) = self.selector(&raw.head, &head);
            let mut exist = raw.exist.clone();
            exist.push(bit);
            pending = self.sel_branches(&sel, &head, raw.rule)?;
            (exist, Formula::True, vec![sel])
        };
        let mut head_vars = head_c.vars();
        for a in &head_atoms {
            Formula::App(a.clone()).collect_vars(&mut head_vars);
        }
        let exist: Vec<Var> = exist.into_iter().filter(|v| head_vars.contains(v)).collect();
        for b in &body {
            let atoms = self.positive_atoms(&b.lits)?;
            let prov = self.prov(raw.rule);
            let c = Clause::new(b.constraint.clone(), atoms, exist.clone(), head_c.clone(), head_atoms.clone())?;
            self.out.push(c, prov);
        }
        for (c, prov) in pending {
            self.out.push(c, prov);
        }
        Ok(())
    }

    /// Create the selector for a head with at least two disjuncts. Returns
    /// the atom `sel(vars, bit)` and the bit.
    fn selector(&mut self, head: &Formula, disjuncts: &[Conj]) -> (Atom, Var) {
        let mut vars = head.vars();
        for d in disjuncts {
            d.to_formula().collect_vars(&mut vars);
        }
        let bit = self.fresh_bool(Family::Bit);
        let mut params = vars;
        params.push(bit.clone());
        let pred = self.fresh_pred(Family::Sel, params);
        let left = disjuncts[0].to_formula();
        let right = Formula::or(disjuncts[1..].iter().map(Conj::to_formula));
        self.sels.push(SelDef { pred: pred.clone(), bit: bit.clone(), left, right });
        (pred.own_atom(), bit)
    }

    fn sel_branches(&mut self, sel: &Atom, disjuncts: &[Conj], rule: RuleTag) -> Result<Vec<(Clause, Provenance)>> {
        let bit = sel.args.last().unwrap().clone();
        let mut out = Vec::new();
        let first = &disjuncts[0];
        let atoms = self.positive_atoms(&first.lits)?;
        let prov = self.prov(rule);
        out.push((
            Clause::new(
                Formula::not(Formula::Bool(bit.clone())),
                vec![sel.clone()],
                vec![],
                first.constraint.clone(),
                atoms,
            )?,
            prov,
        ));
        let rest = &disjuncts[1..];
        if rest.len() == 1 {
            let atoms = self.positive_atoms(&rest[0].lits)?;
            let prov = self.prov(rule);
            out.push((
                Clause::new(Formula::Bool(bit), vec![sel.clone()], vec![], rest[0].constraint.clone(), atoms)?,
                prov,
            ));
        } else {
            let right = Formula::or(rest.iter().map(Conj::to_formula));
            let (inner, inner_bit) = self.selector(&right, rest);
            let prov = self.prov(rule);
            out.push((
                Clause::new(
                    Formula::Bool(bit),
                    vec![sel.clone()],
                    vec![inner_bit],
                    Formula::True,
                    vec![inner.clone()],
                )?,
                prov,
            ));
            out.extend(self.sel_branches(&inner, rest, rule)?);
        }
        Ok(out)
    }
}

/// Encode `body → h₁ ∨ … ∨ hₙ` (n ≥ 2) without merging disjuncts: one
/// clause into a selector and one clause per branch, nesting to the right.
pub fn desugar_head_disjunction(
    builder: &mut ClauseBuilder,
    body: Formula,
    exist: Vec<Var>,
    disjuncts: Vec<Formula>,
    rule: RuleTag,
) -> Result<()> {
    assert!(disjuncts.len() >= 2, "a head disjunction needs at least two disjuncts");
    let conjs: Vec<Conj> = disjuncts
        .iter()
        .map(|d| {
            let mut c = atom_dnf(d);
            assert_eq!(c.len(), 1, "each disjunct must be a conjunction");
            c.pop().unwrap()
        })
        .collect();
    let head = Formula::Or(disjuncts);
    let (sel, bit) = builder.selector(&head, &conjs);
    let pending = builder.sel_branches(&sel, &conjs, rule)?;
    let mut exist = exist;
    exist.push(bit);
    for b in atom_dnf(&body) {
        let atoms = builder.positive_atoms(&b.lits)?;
        let prov = builder.prov(rule);
        builder
            .out
            .push(Clause::new(b.constraint.clone(), atoms, exist.clone(), Formula::True, vec![sel.clone()])?, prov);
    }
    for (c, prov) in pending {
        builder.out.push(c, prov);
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{Sort, Term};

    fn setup() -> (Var, Arc<PredSym>, Arc<PredSym>) {
        let x = Var::new("x", Sort::Int);
        let p = PredSym::new("p", vec![x.clone()]);
        let q = PredSym::new("q", vec![x.clone()]);
        (x, p, q)
    }

    #[test]
    fn dnf_keeps_pure_parts_opaque() {
        let (x, p, _) = setup();
        let c = Formula::eq(Term::Var(x.clone()), Term::int(0));
        let f = Formula::or([c.clone(), Formula::not(c.clone())]);
        assert_eq!(atom_dnf(&f), vec![Conj::pure(f.clone())]);
        let g = Formula::iff(Formula::Bool(Var::new("b", Sort::Bool)), Formula::App(p.own_atom()));
        let d = atom_dnf(&g);
        assert_eq!(d.len(), 2);
        assert_eq!(d[1].lits, vec![(p.own_atom(), false)]);
    }

    #[test]
    fn negation_adds_pair() {
        let (x, p, _) = setup();
        let mut b = ClauseBuilder::new(FreshNamer::new());
        b.out.declare(&p);
        let c = Formula::eq(Term::Var(x.clone()), Term::int(0));
        b.emit(RawClause::new(Formula::not(Formula::App(p.own_atom())), vec![], c, RuleTag::R8)).unwrap();
        // p ∧ n_p → ⊥, the selector clause and its two branches, the clause itself
        assert_eq!(b.out.clauses.len(), 5);
        assert_eq!(b.negs.len(), 1);
        assert!(b.out.heads_disjunction_free());
        b.out.validate().unwrap();
        let last = b.out.clauses.last().unwrap();
        assert_eq!(&*last.body_atoms[0].pred.name, "n_p");
    }

    #[test]
    fn three_way_head_nests() {
        let (x, p, q) = setup();
        let mut b = ClauseBuilder::new(FreshNamer::new());
        b.out.declare(&p);
        b.out.declare(&q);
        let c = Formula::eq(Term::Var(x.clone()), Term::int(1));
        let head = Formula::or([Formula::App(p.own_atom()), Formula::App(q.own_atom()), c]);
        b.emit(RawClause::new(Formula::True, vec![], head, RuleTag::R8)).unwrap();
        // top, left branch, right into inner selector, two inner branches
        assert_eq!(b.out.clauses.len(), 5);
        assert_eq!(b.sels.len(), 2);
        b.out.validate().unwrap();
    }

    #[test]
    fn identical_disjuncts_kept_apart_when_asked() {
        let (_, p, _) = setup();
        let mut b = ClauseBuilder::new(FreshNamer::new());
        b.out.declare(&p);
        let h = Formula::App(p.own_atom());
        desugar_head_disjunction(&mut b, Formula::True, vec![], vec![h.clone(), h], RuleTag::R8).unwrap();
        assert_eq!(b.out.clauses.len(), 3);
        let (l, r) = (&b.out.clauses[1], &b.out.clauses[2]);
        assert_eq!(l.head_atoms, r.head_atoms);
        assert_eq!(l.body_atoms, r.body_atoms);
        assert_ne!(l.body_constraint, r.body_constraint);
    }
}
