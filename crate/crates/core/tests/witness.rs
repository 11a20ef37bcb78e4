use ehc_trans::frontend::{parse_formula, parse_program};
use ehc_trans::interp::{check_clause_set, compose_witness};
use ehc_trans::oracle::{model_check, FiniteSystem};
use ehc_trans::syntax::Domains;
use ehc_trans::trans::translate;

fn witness_is_model(prog: &str, domains: &Domains, spec: &str) -> (bool, bool) {
    let p = parse_program(prog).unwrap();
    let phi = parse_formula(spec, &p.vars).unwrap();
    let sys = FiniteSystem::expand(&p, domains).unwrap();
    let truth = model_check(&sys, &phi).unwrap().holds;
    let tr = translate(&p, &phi).unwrap();
    let w = compose_witness(&tr, domains).unwrap();
    let fails = check_clause_set(&tr.clauses, &w, domains, false).unwrap();
    if truth && !fails.is_empty() {
        for f in &fails {
            eprintln!("{spec}: {f}");
        }
    }
    (truth, fails.is_empty())
}

const TOGGLE: &str = "vars { b: Bool; } init { !b } next { b' = !b }";
const COUNTER: &str = "vars { x: Int; } init { x = 0 } next { x < 2 & x' = x + 1 | x' = 0 } fair { x = 2 }";

#[test]
fn toggle_formulas() {
    let d = Domains::new();
    for spec in [
        "A X b",
        "E X b",
        "A G F b",
        "E G F b",
        "A F b",
        "E (!b U b)",
        "A (!b U b)",
        "A G (b -> A X !b)",
        "E X E X !b",
        "A G E F b",
        "E F G b",
        "A X !b",
        "!(E G b)",
        "A G (E X b | E X !b)",
    ] {
        let (truth, model) = witness_is_model(TOGGLE, &d, spec);
        assert_eq!(model, truth, "{spec}");
    }
}

#[test]
fn fair_counter_formulas() {
    let d = Domains::new().with_int_range(0, 2);
    for spec in [
        "A G F x = 2",
        "E G x < 2",
        "A F x = 1",
        "E F G x = 0",
        "E (x < 2 U x = 2)",
        "A G (x = 2 -> A X x = 0)",
        "A G E F x = 2",
        "E X x = 0",
        "A (x = 0 U x = 1)",
        "E G F x = 1",
        "Af G F x = 2",
        "Af F x = 2",
        "Ef G x < 2",
        "Ef X x = 1",
        "Af G (x = 0 -> Ef X x = 1)",
        "E G (x = 0 & Ef F x = 2)",
    ] {
        let (truth, model) = witness_is_model(COUNTER, &d, spec);
        assert_eq!(model, truth, "{spec}");
    }
}
