//! Acceptance run: one PASS or FAIL line per criterion, and a non-zero exit
//! status if any criterion fails.

use std::fmt::Display;
use std::path::PathBuf;
use std::sync::Arc;
use std::time::{Duration, Instant};

use ehc_trans::emit::emit_text;
use ehc_trans::fixtures::{
    self, bank, micro_bank, micro_bank_fills, micro_synthesis_suite, micro_verification_suite, robots,
    robots_conjunct1, Fixture, BANK_HOLES,
};
use ehc_trans::frontend::to_nnf;
use ehc_trans::interp::{
    check_clause_set, check_dwf, compose_witness, compose_witness_from, enumerate_interpretations, is_well_founded,
    transitive_closure, EnumOptions, Enumeration, Interpretation, Relation,
};
use ehc_trans::oracle::{model_check, Checker, FiniteSystem, DEFAULT_STATE_CAP};
use ehc_trans::syntax::{
    ClauseSet, Domains, Formula, PathFormula, PathQuant, PredSym, Program, RuleTag, Sort, StateFormula, Value, Var,
};
use ehc_trans::synthesis::{
    apply_formulas, apply_resolving, build_next_u, delta_synth, enumerate_resolving, extract_resolving,
    make_hole_predicates,
};
use ehc_trans::trans::{clause_count_bound, extend_problem, translate, Problem, Trace};
use fixedbitset::FixedBitSet;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn err<E: Display>(what: &str) -> impl FnOnce(E) -> String + '_ {
    move |e| format!("{what}: {e}")
}

fn finite_verification_fixtures() -> Vec<Fixture> {
    fixtures::all().into_iter().filter(|f| !f.partial && f.is_finite()).collect()
}

fn universal(mut node: &Trace) -> Option<(&Problem, &Arc<PredSym>, &Arc<PredSym>, &Arc<PredSym>)> {
    loop {
        match node {
            Trace::Defair { then, .. } | Trace::Extend { then, .. } => node = then,
            Trace::Universal { problem, p, t, r, .. } => return Some((problem, p, t, r)),
            _ => return None,
        }
    }
}

type Shape = (Vec<String>, Vec<String>);

fn sorted(v: impl IntoIterator<Item = String>) -> Vec<String> {
    let mut v: Vec<String> = v.into_iter().collect();
    v.sort();
    v
}

fn shapes(cs: &ClauseSet, preds: &[&Arc<PredSym>]) -> Vec<Shape> {
    let named = |a: &ehc_trans::syntax::Atom| preds.iter().any(|p| p.name == a.pred.name);
    let mut out: Vec<Shape> = cs
        .clauses
        .iter()
        .filter(|c| c.body_atoms.iter().chain(&c.head_atoms).any(named))
        .map(|c| {
            (
                sorted(c.body_atoms.iter().map(|a| a.pred.name.to_string())),
                sorted(c.head_atoms.iter().map(|a| a.pred.name.to_string())),
            )
        })
        .collect();
    out.sort();
    out
}

/// Robots, first conjunct: Rules 1, 2, 4, 6 and the six-item listing.
fn criterion_1() -> Outcome {
    let t0 = Instant::now();
    let f = robots();
    let tr = translate(&f.program().map_err(err("program"))?, &f.formula().map_err(err("formula"))?)
        .map_err(err("translate"))?;
    let Trace::Split { subs, .. } = &tr.trace else { return Err("no split at the root".into()) };
    let mut rules = vec![1];
    rules.extend(subs[0].rules());
    if rules != [1, 2, 4, 6] {
        return Err(format!("rule sequence {rules:?}"));
    }
    let (problem, p, t, r) = universal(&subs[0]).ok_or("the first conjunct does not end in the universal rule")?;
    let mut init = Vec::new();
    problem.init.collect_atoms(&mut init);
    let s = |v: &[&str]| sorted(v.iter().map(|x| x.to_string()));
    let init: Vec<&str> = init.iter().map(|a| &*a.pred.name).collect();
    let (pn, tn, rn) = (&*p.name, &*t.name, &*r.name);
    let mut expected: Vec<Shape> = vec![
        (s(&init), s(&[pn])),
        (s(&[pn]), s(&[pn])),
        (s(&[pn, tn]), s(&[rn])),
        (s(&[]), s(&[tn])),
        (s(&[tn]), s(&[tn])),
    ];
    expected.sort();
    let got = shapes(&tr.clauses, &[p, t, r]);
    if got != expected {
        return Err(format!("clause shapes {got:?}"));
    }
    let dwf = tr.clauses.dwf.iter().filter(|d| d.pred.name == r.name).count();
    if dwf != 1 {
        return Err(format!("{dwf} dwf clauses for {rn}"));
    }
    let items = got.len() + dwf;

    let c1 = robots_conjunct1();
    let alone = translate(&c1.program().map_err(err("program"))?, &c1.formula().map_err(err("formula"))?)
        .map_err(err("translate"))?;
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "golden", "robots_safe.clauses"].iter().collect();
    let golden = std::fs::read_to_string(&path).map_err(err("golden file"))?;
    if emit_text(&alone.clauses) != golden {
        return Err("emission differs from the golden file".into());
    }
    let el = t0.elapsed();
    if el >= Duration::from_secs(1) {
        return Err(format!("took {el:?}"));
    }
    Ok(format!("rules 1-2-4-6, {items} items ({} clauses + dwf({rn})), golden match, {el:.2?}", got.len()))
}

/// Clause counts within the frozen bound, with locked case-study counts.
fn criterion_2() -> Outcome {
    let mut worst = 0.0f64;
    let mut n_problems = 0;
    let mut robots_count = 0;
    let mut bank_count = 0;
    for f in fixtures::all() {
        let phi = f.formula().map_err(err(&f.name))?;
        let n = to_nnf(&phi).size();
        let k = f.program().map_err(err(&f.name))?.fairness.len();
        let count = if f.partial {
            delta_synth(&f.partial_program().map_err(err(&f.name))?, &phi).map_err(err(&f.name))?.clauses().len()
        } else {
            translate(&f.program().map_err(err(&f.name))?, &phi).map_err(err(&f.name))?.clauses.len()
        };
        let bound = clause_count_bound(n, k);
        if count > bound {
            return Err(format!("{}: {count} clauses exceed the bound {bound} (n={n}, k={k})", f.name));
        }
        worst = worst.max(count as f64 / bound as f64);
        n_problems += 1;
        match f.name.as_str() {
            "robots" => robots_count = count,
            "bank" => bank_count = count,
            _ => {}
        }
    }
    if robots_count != 46 || bank_count != 48 {
        return Err(format!("locked counts changed: robots {robots_count}, bank {bank_count}"));
    }
    Ok(format!("{n_problems} problems within C*n*(n+k)+C' (max ratio {worst:.3}); robots 46, bank 48"))
}

/// A relation with each tuple present with probability `density`.
fn random_relation(pred: &Arc<PredSym>, d: &Domains, density: f64, rng: &mut ChaCha8Rng) -> Relation {
    let mut r = Relation::empty(pred, d).expect("finite relation");
    for i in 0..r.space() {
        if rng.gen_bool(density) {
            r.bits.insert(i);
        }
    }
    r
}

fn random_interpretation(
    cs: &ClauseSet,
    d: &Domains,
    witness: &Interpretation,
    round: usize,
    rng: &mut ChaCha8Rng,
) -> Interpretation {
    let mut out = Interpretation::new();
    for p in &cs.preds {
        let base = witness.get(&p.name).cloned().unwrap_or_else(|| Relation::empty(p, d).expect("finite relation"));
        let rel = match round % 4 {
            0 => {
                let density = rng.gen_range(0.05..0.95);
                random_relation(p, d, density, rng)
            }
            1 => {
                let mut r = base;
                if r.space() > 0 {
                    for _ in 0..rng.gen_range(0..3) {
                        let i = rng.gen_range(0..r.space());
                        r.bits.toggle(i);
                    }
                }
                r
            }
            2 => {
                let mut r = base;
                r.bits.union_with(&random_relation(p, d, 0.05, rng).bits);
                r
            }
            _ => {
                let mut r = base;
                r.bits.intersect_with(&random_relation(p, d, 0.95, rng).bits);
                r
            }
        };
        out.insert(rel);
    }
    out
}

/// No accepted interpretation for a false property.
fn criterion_3() -> Outcome {
    let t0 = Instant::now();
    let suite = fixtures::fuzz_suite();
    if suite.len() < 20 {
        return Err(format!("only {} fixtures", suite.len()));
    }
    let rounds = 10_000;
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let (mut accepted, mut unsound) = (0usize, Vec::new());
    for f in &suite {
        let p = f.program().map_err(err(&f.name))?;
        let phi = f.formula().map_err(err(&f.name))?;
        let d = f.domains().map_err(err(&f.name))?;
        if phi.quantifier_count() > 2 || phi.temporal_count() > 2 {
            return Err(format!("{}: specification too large", f.name));
        }
        let sys = FiniteSystem::expand(&p, &d).map_err(err(&f.name))?;
        if sys.len() > 6 {
            return Err(format!("{}: {} states", f.name, sys.len()));
        }
        let truth = model_check(&sys, &phi).map_err(err(&f.name))?.holds;
        let tr = translate(&p, &phi).map_err(err(&f.name))?;
        let witness = compose_witness(&tr, &d).map_err(err(&f.name))?;
        for round in 0..rounds {
            let i = random_interpretation(&tr.clauses, &d, &witness, round, &mut rng);
            if check_clause_set(&tr.clauses, &i, &d, true).map_err(err(&f.name))?.is_empty() {
                accepted += 1;
                if !truth {
                    unsound.push(f.name.clone());
                    break;
                }
            }
        }
    }
    let el = t0.elapsed();
    if !unsound.is_empty() {
        return Err(format!("accepted models of false properties: {unsound:?}"));
    }
    if el >= Duration::from_secs(300) {
        return Err(format!("took {el:?}"));
    }
    Ok(format!("{} fixtures x {rounds} interpretations, {accepted} accepted, 0 unsound, {el:.1?}", suite.len()))
}

/// The composed witness is a model whenever the property holds.
fn criterion_4() -> Outcome {
    let t0 = Instant::now();
    let (mut checked, mut false_ones) = (0, 0);
    for f in finite_verification_fixtures() {
        let p = f.program().map_err(err(&f.name))?;
        let phi = f.formula().map_err(err(&f.name))?;
        let d = f.domains().map_err(err(&f.name))?;
        let sys = FiniteSystem::expand(&p, &d).map_err(err(&f.name))?;
        if !model_check(&sys, &phi).map_err(err(&f.name))?.holds {
            false_ones += 1;
            continue;
        }
        let tr = translate(&p, &phi).map_err(err(&f.name))?;
        let w = compose_witness(&tr, &d).map_err(err(&f.name))?;
        let fails = check_clause_set(&tr.clauses, &w, &d, true).map_err(err(&f.name))?;
        if let Some(first) = fails.first() {
            return Err(format!("{}: {first}", f.name));
        }
        checked += 1;
    }
    let el = t0.elapsed();
    if el >= Duration::from_secs(60) {
        return Err(format!("took {el:?}"));
    }
    Ok(format!("{checked} true fixtures accepted ({false_ones} false ones skipped), {el:.1?}"))
}

/// Exhaustive model search agrees with the model checker.
fn criterion_5() -> Outcome {
    let suite = micro_verification_suite();
    let (mut unsat, mut max_preds) = (0, 0);
    for f in &suite {
        let p = f.program().map_err(err(&f.name))?;
        let phi = f.formula().map_err(err(&f.name))?;
        let d = f.domains().map_err(err(&f.name))?;
        for v in &p.vars {
            let n = d.values(v).map_err(err(&f.name))?.len();
            if n > 3 {
                return Err(format!("{}: `{}` has {n} values", f.name, v.name));
            }
        }
        let truth =
            model_check(&FiniteSystem::expand(&p, &d).map_err(err(&f.name))?, &phi).map_err(err(&f.name))?.holds;
        let tr = translate(&p, &phi).map_err(err(&f.name))?;
        max_preds = max_preds.max(tr.clauses.preds.len());
        let verdict = enumerate_interpretations(&tr.clauses, &d, EnumOptions::default()).map_err(err(&f.name))?;
        match (&verdict, truth) {
            (Enumeration::Sat(_), true) => {}
            (Enumeration::Unsat, false) => unsat += 1,
            (v, t) => return Err(format!("{}: search says {}, model checker says {t}", f.name, v.label())),
        }
    }
    if suite.len() < 10 || unsat < 2 {
        return Err(format!("{} fixtures, {unsat} unsat", suite.len()));
    }
    Ok(format!("{} fixtures agree ({unsat} UNSAT), at most {max_preds} predicates", suite.len()))
}

/// Well-foundedness agrees with disjunctive well-foundedness of the closure.
fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let s = Var::new("s", Sort::Int);
    let pred = PredSym::new("r", vec![s.clone(), s.primed()]);
    let doms: Vec<Domains> = (1..=6).map(|m| Domains::new().with_int_range(0, m - 1)).collect();
    let total = 100_000;
    let mut wf = 0;
    for _ in 0..total {
        let m = rng.gen_range(1..=6usize);
        let density = rng.gen_range(0.0..0.5);
        let r = random_relation(&pred, &doms[m - 1], density, &mut rng);
        let a = is_well_founded(&r).map_err(err("well-founded"))?;
        let b = check_dwf(&transitive_closure(&r).map_err(err("closure"))?).map_err(err("dwf"))?;
        if a != b {
            let tuples: Vec<Vec<Value>> = r.tuples().collect();
            return Err(format!("disagreement on {tuples:?}"));
        }
        wf += a as usize;
    }
    Ok(format!("{total} random relations, {wf} well-founded, 0 disagreements"))
}

fn contexts(z: PathFormula, c: &PathFormula) -> Vec<PathFormula> {
    vec![
        z.clone(),
        PathFormula::x(z.clone()),
        PathFormula::f(z.clone()),
        PathFormula::g(z.clone()),
        PathFormula::g(PathFormula::f(z.clone())),
        PathFormula::u(c.clone(), z.clone()),
        PathFormula::u(z, c.clone()),
    ]
}

fn spec_assertions(s: &StateFormula, out: &mut Vec<Formula>) {
    match s {
        StateFormula::Assert(f) => {
            if !out.contains(f) {
                out.push(f.clone())
            }
        }
        StateFormula::And(a, b) | StateFormula::Or(a, b) => {
            spec_assertions(a, out);
            spec_assertions(b, out);
        }
        StateFormula::Not(a) => spec_assertions(a, out),
        StateFormula::Quant(_, p) => path_assertions(p, out),
    }
}

fn path_assertions(p: &PathFormula, out: &mut Vec<Formula>) {
    match p {
        PathFormula::State(s) => spec_assertions(s, out),
        PathFormula::X(a) | PathFormula::G(a) | PathFormula::F(a) | PathFormula::Not(a) => path_assertions(a, out),
        PathFormula::U(a, b) | PathFormula::And(a, b) | PathFormula::Or(a, b) => {
            path_assertions(a, out);
            path_assertions(b, out);
        }
    }
}

fn label(sys: &FiniteSystem, q: PathQuant, p: PathFormula) -> Result<FixedBitSet, String> {
    Checker::new(sys).label(&to_nnf(&StateFormula::quant(q, p))).map_err(err("label"))
}

/// Extending a system by `x_T` preserves the truth of every context.
fn criterion_7() -> Outcome {
    let x = Var::new("x_ext", Sort::Bool);
    let (mut comparisons, mut fixtures_seen) = (0usize, 0);
    for f in finite_verification_fixtures() {
        let p = f.program().map_err(err(&f.name))?;
        let phi = f.formula().map_err(err(&f.name))?;
        let d = f.domains().map_err(err(&f.name))?;
        let sys = FiniteSystem::expand(&p, &d).map_err(err(&f.name))?;
        let mut atoms = Vec::new();
        spec_assertions(&phi, &mut atoms);
        let c1 = atoms[0].clone();
        let c2 = atoms.get(1).cloned().unwrap_or_else(|| Formula::not(c1.clone()));
        let (a1, a2) = (PathFormula::assertion(c1), PathFormula::assertion(c2));
        let nodes = [PathFormula::x(a1.clone()), PathFormula::g(a1.clone()), PathFormula::u(a1.clone(), a2.clone())];
        let pb = Problem::new(&p, phi.clone());
        for node in &nodes {
            let ext = extend_problem(&pb, node, &x).map_err(err(&f.name))?;
            let sys_t = FiniteSystem::expand_formulas(
                &ext.vars,
                &ext.init,
                &ext.next,
                &ext.fairness,
                &d,
                None,
                DEFAULT_STATE_CAP,
            )
            .map_err(err(&f.name))?;
            let with_x = |s: usize, b: bool| {
                let mut v = sys.states[s].clone();
                v.push(Value::Bool(b));
                sys_t.index_of(&v).expect("extended state")
            };
            let lhs_ctx = contexts(node.clone(), &a2);
            let rhs_ctx = contexts(PathFormula::assertion(Formula::Bool(x.clone())), &a2);
            for (l, r) in lhs_ctx.into_iter().zip(rhs_ctx) {
                for q in [PathQuant::Af, PathQuant::Ef] {
                    let lhs = label(&sys, q, l.clone())?;
                    let rhs = label(&sys_t, q, r.clone())?;
                    for s in 0..sys.len() {
                        let (f0, f1) = (rhs.contains(with_x(s, false)), rhs.contains(with_x(s, true)));
                        let extended = if q == PathQuant::Af { f0 && f1 } else { f0 || f1 };
                        if lhs.contains(s) != extended {
                            return Err(format!("{}: {q:?} {l} differs at {}", f.name, sys.show_state(s)));
                        }
                        comparisons += 1;
                    }
                }
            }
        }
        fixtures_seen += 1;
    }
    Ok(format!("{fixtures_seen} fixtures, X/G/U x A/E x 7 contexts, {comparisons} state comparisons agree"))
}

fn holds(p: &Program, d: &Domains, phi: &StateFormula) -> Result<bool, String> {
    let sys = FiniteSystem::expand(p, d).map_err(err("expand"))?;
    Ok(model_check(&sys, phi).map_err(err("model check"))?.holds)
}

/// Synthesis: models give correct fillings and correct fillings give models.
fn criterion_8() -> Outcome {
    let suite = micro_synthesis_suite();
    let (mut sat, mut unrealizable, mut fillings) = (0, 0, 0);
    for f in &suite {
        let pp = f.partial_program().map_err(err(&f.name))?;
        let phi = f.formula().map_err(err(&f.name))?;
        let d = f.domains().map_err(err(&f.name))?;
        let st = delta_synth(&pp, &phi).map_err(err(&f.name))?;
        let psis = enumerate_resolving(&st.holes, &d, false, 1 << 16).map_err(err(&f.name))?;
        let mut realizable = Vec::new();
        for psi in &psis {
            let prog = apply_resolving(&pp, psi, false).map_err(err(&f.name))?;
            if holds(&prog, &d, &phi)? {
                realizable.push(psi);
            }
        }
        match enumerate_interpretations(st.clauses(), &d, EnumOptions::default()).map_err(err(&f.name))? {
            Enumeration::Sat(i) => {
                let psi = extract_resolving(&i, &st.holes).map_err(err(&f.name))?;
                let prog = apply_resolving(&pp, &psi, false).map_err(err(&f.name))?;
                if !holds(&prog, &d, &phi)? {
                    return Err(format!("{}: the found filling violates the property", f.name));
                }
                sat += 1;
            }
            Enumeration::Unsat => {
                if !realizable.is_empty() {
                    return Err(format!("{}: UNSAT but {} fillings work", f.name, realizable.len()));
                }
                unrealizable += 1;
            }
            Enumeration::CapExceeded(m) => return Err(format!("{}: {m}", f.name)),
        }
        for psi in realizable {
            let i = compose_witness_from(&st.translation, psi.to_interpretation(), &d).map_err(err(&f.name))?;
            if let Some(first) = check_clause_set(st.clauses(), &i, &d, true).map_err(err(&f.name))?.first() {
                return Err(format!("{}: witness for a correct filling rejected: {first}", f.name));
            }
            fillings += 1;
        }
    }
    if suite.len() < 5 || unrealizable < 1 {
        return Err(format!("{} problems, {unrealizable} unrealizable", suite.len()));
    }
    Ok(format!("{} problems: {sat} SAT with checked fillings, {unrealizable} unrealizable, {fillings} correct fillings give models", suite.len()))
}

/// Bank: two totality clauses first, the shape of `next_U`, and the
/// rescaled synthesized program.
fn criterion_9() -> Outcome {
    let b = bank();
    let pp = b.partial_program().map_err(err("bank"))?;
    let st = delta_synth(&pp, &b.formula().map_err(err("bank"))?).map_err(err("bank"))?;
    let tags: Vec<RuleTag> = st.clauses().provenance.iter().map(|p| p.rule).collect();
    let delta_a = tags.iter().filter(|t| **t == RuleTag::DeltaA).count();
    if delta_a != 2 || tags[..2] != [RuleTag::DeltaA, RuleTag::DeltaA] {
        return Err(format!("{delta_a} totality clauses, tags start {:?}", &tags[..2.min(tags.len())]));
    }
    let holes = make_hole_predicates(&pp).map_err(err("bank"))?;
    let next_u = build_next_u(&pp, &holes).map_err(err("bank"))?;
    let Formula::Or(parts) = &next_u else { return Err("next_U is not a disjunction".into()) };
    if parts.len() != 5 || parts[0] != pp.program.next {
        return Err(format!("next_U has {} disjuncts", parts.len()));
    }
    let conjuncts = |f: &Formula| match f {
        Formula::And(v) => v.clone(),
        other => vec![other.clone()],
    };
    fn app(g: &Formula, name: &str) -> bool {
        matches!(g, Formula::App(a) if *a.pred.name == *name)
    }
    fn neg(g: &Formula, name: &str) -> bool {
        matches!(g, Formula::Not(h) if app(h, name))
    }
    let [lc, la1, la2] = BANK_HOLES;
    let (c, a1, a2) = (format!("u_c_{lc}"), format!("u_a_{la1}"), format!("u_a_{la2}"));
    let groups_ok = conjuncts(&parts[1]).iter().any(|g| app(g, &c))
        && conjuncts(&parts[2]).iter().any(|g| neg(g, &c))
        && conjuncts(&parts[3]).iter().any(|g| app(g, &a1))
        && conjuncts(&parts[4]).iter().any(|g| app(g, &a2));
    if !groups_ok {
        return Err(format!("unexpected hole groups in next_U: {next_u}"));
    }
    let mb = micro_bank();
    let prog =
        apply_formulas(&mb.partial_program().map_err(err("micro-bank"))?, &micro_bank_fills().map_err(err("fills"))?)
            .map_err(err("micro-bank"))?;
    let d = mb.domains().map_err(err("micro-bank"))?;
    let sys = FiniteSystem::expand(&prog, &d).map_err(err("micro-bank"))?;
    if !model_check(&sys, &mb.formula().map_err(err("micro-bank"))?).map_err(err("micro-bank"))?.holds {
        return Err("the micro bank violates the rescaled property".into());
    }
    Ok(format!(
        "2 totality clauses first, next_U = next | 4 hole groups, micro bank ({} states) satisfies the property",
        sys.len()
    ))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("robots first conjunct", criterion_1),
        ("clause-count bound", criterion_2),
        ("soundness fuzz", criterion_3),
        ("relative completeness", criterion_4),
        ("decision equivalence", criterion_5),
        ("well-foundedness of closures", criterion_6),
        ("extension preservation", criterion_7),
        ("synthesis round trip", criterion_8),
        ("bank", criterion_9),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("PASS {} {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {} {name}: {detail}", i + 1)
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
