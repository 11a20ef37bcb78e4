//! Golden emissions and regression-locked clause counts for the case
//! studies. Set `EHC_UPDATE_GOLDEN=1` to rewrite the golden files.

use std::path::PathBuf;
use std::sync::Arc;

use ehc_trans::emit::{emit_text, parse_text};
use ehc_trans::fixtures::{bank, robots, robots_conjunct1};
use ehc_trans::syntax::{ClauseSet, PredSym, RuleTag};
use ehc_trans::synthesis::delta_synth;
use ehc_trans::trans::{translate, Problem, Trace};

fn golden(name: &str, actual: &str) {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "golden", name].iter().collect();
    if std::env::var_os("EHC_UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, actual).unwrap();
    }
    let expected = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert_eq!(actual, expected, "emission differs from {}", path.display());
}

/// Body and head predicate names of every clause that mentions one of
/// `preds`, as sorted lists.
fn shapes(cs: &ClauseSet, preds: &[&Arc<PredSym>]) -> Vec<(Vec<String>, Vec<String>)> {
    let named = |a: &ehc_trans::syntax::Atom| preds.iter().any(|p| p.name == a.pred.name);
    let mut out: Vec<(Vec<String>, Vec<String>)> = cs
        .clauses
        .iter()
        .filter(|c| c.body_atoms.iter().chain(&c.head_atoms).any(named))
        .map(|c| {
            let mut b: Vec<String> = c.body_atoms.iter().map(|a| a.pred.name.to_string()).collect();
            let mut h: Vec<String> = c.head_atoms.iter().map(|a| a.pred.name.to_string()).collect();
            b.sort();
            h.sort();
            (b, h)
        })
        .collect();
    out.sort();
    out
}

/// The shapes of the universal rule's clauses: init to `p`, `p` closed under
/// steps, `p` and `t` to `r`, and `t` as the closure of the steps.
fn expected_universal(init: &[&str], p: &str, t: &str, r: &str) -> Vec<(Vec<String>, Vec<String>)> {
    let s = |v: &[&str]| {
        let mut v: Vec<String> = v.iter().map(|x| x.to_string()).collect();
        v.sort();
        v
    };
    let mut out =
        vec![(s(init), s(&[p])), (s(&[p]), s(&[p])), (s(&[p, t]), s(&[r])), (s(&[]), s(&[t])), (s(&[t]), s(&[t]))];
    out.sort();
    out
}

/// The universal rule node reached through defairing and extensions.
fn universal(mut node: &Trace) -> (&Problem, &Arc<PredSym>, &Arc<PredSym>, &Arc<PredSym>) {
    loop {
        match node {
            Trace::Defair { then, .. } | Trace::Extend { then, .. } => node = then,
            Trace::Universal { problem, p, t, r, .. } => return (problem, p, t, r),
            other => panic!("unexpected node {:?}", other.rules()),
        }
    }
}

#[test]
fn robots_safety_conjunct_golden() {
    let f = robots_conjunct1();
    let tr = translate(&f.program().unwrap(), &f.formula().unwrap()).unwrap();
    let text = emit_text(&tr.clauses);
    golden("robots_safe.clauses", &text);
    assert_eq!(emit_text(&parse_text(&text).unwrap()), text);
    assert_eq!(tr.trace.rules(), vec![2, 4, 6]);
    assert_eq!(tr.clauses.clauses.len(), 5);
    assert_eq!(tr.clauses.dwf.len(), 1);
    let (_, p, t, r) = universal(&tr.trace);
    assert_eq!(shapes(&tr.clauses, &[p, t, r]), expected_universal(&[], &p.name, &t.name, &r.name));
}

#[test]
fn robots_first_conjunct_inside_full_translation() {
    let f = robots();
    let tr = translate(&f.program().unwrap(), &f.formula().unwrap()).unwrap();
    let Trace::Split { subs, .. } = &tr.trace else { panic!("expected a split at the root") };
    assert_eq!(subs[0].rules(), vec![2, 4, 6]);
    let (problem, p, t, r) = universal(&subs[0]);
    // Rule 1 replaces the sub-problem's initial condition by its aux atom.
    let mut init = Vec::new();
    problem.init.collect_atoms(&mut init);
    let init: Vec<&str> = init.iter().map(|a| &*a.pred.name).collect();
    assert_eq!(init.len(), 1);
    assert_eq!(shapes(&tr.clauses, &[p, t, r]), expected_universal(&init, &p.name, &t.name, &r.name));
    assert_eq!(tr.clauses.dwf.iter().filter(|d| d.pred.name == r.name).count(), 1);
}

#[test]
fn case_study_counts_are_locked() {
    let f = robots();
    let tr = translate(&f.program().unwrap(), &f.formula().unwrap()).unwrap();
    assert_eq!(tr.clauses.len(), 46);

    let b = bank();
    let st = delta_synth(&b.partial_program().unwrap(), &b.formula().unwrap()).unwrap();
    assert_eq!(st.clauses().len(), 48);
    let delta_a = st.clauses().provenance.iter().filter(|p| p.rule == RuleTag::DeltaA).count();
    assert_eq!(delta_a, 2);
    golden("bank_delta.clauses", &emit_text(st.clauses()));
}

#[test]
fn emission_is_deterministic() {
    let f = robots();
    let (p, phi) = (f.program().unwrap(), f.formula().unwrap());
    let a = emit_text(&translate(&p, &phi).unwrap().clauses);
    let b = emit_text(&translate(&p, &phi).unwrap().clauses);
    assert_eq!(a, b);
}
