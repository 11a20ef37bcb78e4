use ehc_trans::emit::{clauses_from_json, clauses_to_json, emit_text, parse_text};
use ehc_trans::fixtures;
use ehc_trans::frontend::{is_nnf, parse_assertion, parse_formula, parse_program, print_program, to_nnf};
use ehc_trans::interp::{check_clause_set, check_dwf, compose_witness, is_well_founded, transitive_closure, Relation};
use ehc_trans::oracle::{model_check, Checker, Engine, FiniteSystem};
use ehc_trans::syntax::ctl::substitute_state_subformula;
use ehc_trans::syntax::{Domains, Formula, PathFormula, PathQuant, PredSym, Sort, StateFormula, Value, Var};
use ehc_trans::trans::{clause_count_bound, translate};
use proptest::prelude::*;

const PROGRAM: &str = "vars { b: Bool; x: Int; } init { !b & x = 0 } \
    next { b' = !b & x' = x | x < 2 & x' = x + 1 & b' = b | x = 2 & x' = 0 & b' = b } fair { x = 2; }";

fn vars() -> Vec<Var> {
    vec![Var::new("b", Sort::Bool), Var::new("x", Sort::Int)]
}

fn assertions(src: &[&str], vars: &[Var]) -> Vec<Formula> {
    src.iter().map(|s| parse_assertion(s, vars, 0).unwrap()).collect()
}

fn quant() -> impl Strategy<Value = PathQuant> {
    prop_oneof![Just(PathQuant::E), Just(PathQuant::A), Just(PathQuant::Ef), Just(PathQuant::Af)]
}

/// Path formulas over the given assertions with at most `depth` nested
/// operators.
fn path_formula(atoms: Vec<Formula>, depth: u32) -> impl Strategy<Value = PathFormula> {
    let leaf = proptest::sample::select(atoms).prop_map(PathFormula::assertion);
    leaf.prop_recursive(depth, 16, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(PathFormula::x),
            inner.clone().prop_map(PathFormula::g),
            inner.clone().prop_map(PathFormula::f),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| PathFormula::u(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| PathFormula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| PathFormula::or(a, b)),
            inner.prop_map(PathFormula::not),
        ]
    })
}

fn state_formula(atoms: Vec<Formula>) -> impl Strategy<Value = StateFormula> {
    let leaf = proptest::sample::select(atoms.clone()).prop_map(StateFormula::assertion);
    let quantified = (quant(), path_formula(atoms, 2)).prop_map(|(q, p)| StateFormula::quant(q, p));
    prop_oneof![leaf, quantified].prop_recursive(2, 12, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| StateFormula::and(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| StateFormula::or(a, b)),
            inner.clone().prop_map(StateFormula::not),
            (quant(), inner).prop_map(|(q, s)| StateFormula::quant(q, PathFormula::state(s))),
        ]
    })
}

fn spec() -> impl Strategy<Value = StateFormula> {
    state_formula(assertions(&["b", "!b", "x = 0", "x < 2", "x = 2"], &vars()))
}

/// A system on the states `0..n` of `s` where every state has one or two
/// successors.
fn small_system() -> impl Strategy<Value = FiniteSystem> {
    (1usize..=3)
        .prop_flat_map(|n| {
            let succ = proptest::collection::vec(proptest::collection::btree_set(0..n, 1..=2), n);
            let fair = proptest::collection::vec(proptest::collection::btree_set(0..n, 1..=n), 0..=1);
            (Just(n), succ, fair)
        })
        .prop_map(|(n, succ, fair)| {
            let s = Var::new("s", Sort::Int);
            let states = (0..n).map(|i| vec![Value::int(i as i64)]).collect();
            let edges = succ.iter().enumerate().flat_map(|(a, bs)| bs.iter().map(move |&b| (a, b))).collect();
            let fair = fair.into_iter().map(|j| j.into_iter().collect()).collect();
            FiniteSystem::from_parts(vec![s], states, (0..n).collect(), edges, fair).unwrap()
        })
}

proptest! {
    #[test]
    fn printing_then_parsing_is_stable(phi in spec()) {
        // Parsing folds quantifier-free boolean structure into a single
        // assertion, so the text is the fixed point rather than the tree.
        let text = phi.to_string();
        let back = parse_formula(&text, &vars()).unwrap();
        prop_assert_eq!(back.to_string(), text);
        prop_assert_eq!(parse_formula(&back.to_string(), &vars()).unwrap(), back);
    }

    #[test]
    fn negation_normal_form_is_idempotent(phi in spec()) {
        let once = to_nnf(&phi);
        prop_assert!(is_nnf(&once));
        prop_assert_eq!(to_nnf(&once), once.clone());
    }

    #[test]
    fn substituting_a_formula_for_itself_changes_nothing(phi in spec(), target in spec()) {
        prop_assert_eq!(phi.substitute(&target, &target), phi.clone());
        prop_assert_eq!(substitute_state_subformula(&phi, &phi, &phi).unwrap(), phi.clone());
        prop_assert_eq!(substitute_state_subformula(&phi, &target, &target).is_ok(), phi.contains(&target));
    }

    #[test]
    fn translations_stay_within_the_bound_and_round_trip(phi in spec()) {
        let p = parse_program(PROGRAM).unwrap();
        let tr = translate(&p, &phi).unwrap();
        let n = to_nnf(&phi).size();
        prop_assert!(tr.clauses.len() <= clause_count_bound(n, p.fairness.len()));
        let text = emit_text(&tr.clauses);
        prop_assert_eq!(emit_text(&parse_text(&text).unwrap()), text.clone());
        let json = serde_json::to_string(&clauses_to_json(&tr.clauses)).unwrap();
        prop_assert_eq!(emit_text(&clauses_from_json(&serde_json::from_str(&json).unwrap()).unwrap()), text);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn witness_is_accepted_exactly_when_the_property_holds(phi in spec()) {
        let p = parse_program(PROGRAM).unwrap();
        let d = Domains::new().with_int_range(0, 2);
        let truth = model_check(&FiniteSystem::expand(&p, &d).unwrap(), &phi).unwrap().holds;
        let tr = translate(&p, &phi).unwrap();
        let w = compose_witness(&tr, &d).unwrap();
        prop_assert_eq!(check_clause_set(&tr.clauses, &w, &d, true).unwrap().is_empty(), truth, "{}", phi);
    }
}

proptest! {
    #[test]
    fn tableau_and_lasso_engines_agree(
        sys in small_system(),
        q in quant(),
        path in path_formula(assertions(&["s = 0", "s = 1", "s != 2"], &[Var::new("s", Sort::Int)]), 2),
    ) {
        let phi = to_nnf(&StateFormula::quant(q, path));
        let bound = sys.len() * 4;
        let tableau = Checker::new(&sys).label(&phi).unwrap();
        let lasso = Checker::new(&sys).with_engine(Engine::Lasso { bound }).label(&phi).unwrap();
        prop_assert_eq!(tableau, lasso, "{}", phi);
    }

    #[test]
    fn closure_is_disjunctively_well_founded_iff_well_founded(
        n in 1i64..=5,
        edges in proptest::collection::vec((0i64..5, 0i64..5), 0..10),
    ) {
        let s = Var::new("s", Sort::Int);
        let pred = PredSym::new("r", vec![s.clone(), s.primed()]);
        let d = Domains::new().with_int_range(0, n - 1);
        let mut r = Relation::empty(&pred, &d).unwrap();
        for (a, b) in edges.into_iter().filter(|(a, b)| *a < n && *b < n) {
            r.insert(&[Value::int(a), Value::int(b)]).unwrap();
        }
        prop_assert_eq!(is_well_founded(&r).unwrap(), check_dwf(&transitive_closure(&r).unwrap()).unwrap());
    }
}

#[test]
fn fixtures_round_trip_through_text() {
    for f in fixtures::all() {
        let p = f.program().unwrap();
        if !f.partial {
            assert_eq!(parse_program(&print_program(&p)).unwrap(), p, "{}", f.name);
        }
        let phi = f.formula().unwrap();
        assert_eq!(parse_formula(&phi.to_string(), &p.vars).unwrap(), phi, "{}", f.name);
        if !f.partial {
            let cs = translate(&p, &phi).unwrap().clauses;
            let text = emit_text(&cs);
            assert_eq!(emit_text(&parse_text(&text).unwrap()), text, "{}", f.name);
        }
    }
}
