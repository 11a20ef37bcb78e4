//! Small fixture suites: explicit graphs written as programs over a single
//! state variable, and micro problems for exhaustive search.

use super::{Fixture, Suite};

/// An explicit graph on the states `0..n` of a variable `s`.
#[derive(Clone, Debug)]
pub struct Explicit {
    pub n: usize,
    pub init: Vec<usize>,
    pub edges: Vec<(usize, usize)>,
    pub fair: Vec<Vec<usize>>,
}

fn set_text(states: &[usize]) -> String {
    if states.is_empty() {
        return "false".into();
    }
    states.iter().map(|i| format!("s = {i}")).collect::<Vec<_>>().join(" | ")
}

/// A program whose finite expansion over `s = 0..n-1` is exactly the graph.
pub fn explicit_program(g: &Explicit) -> String {
    let next = if g.edges.is_empty() {
        "false".to_string()
    } else {
        g.edges.iter().map(|(a, b)| format!("s = {a} & s' = {b}")).collect::<Vec<_>>().join(" | ")
    };
    let fair: String = g.fair.iter().map(|j| format!(" {};", set_text(j))).collect();
    format!("vars {{ s: Int; }}\ninit {{ {} }}\nnext {{ {next} }}\nfair {{{fair} }}\n", set_text(&g.init))
}

fn explicit(name: &str, about: &str, g: Explicit, spec: &str) -> Fixture {
    Fixture {
        name: name.into(),
        about: about.into(),
        suite: Suite::Fuzz,
        source: explicit_program(&g),
        spec: spec.into(),
        domains: format!("s=0..{}", g.n - 1),
        partial: false,
    }
}

fn g(n: usize, init: &[usize], edges: &[(usize, usize)], fair: &[&[usize]]) -> Explicit {
    Explicit { n, init: init.to_vec(), edges: edges.to_vec(), fair: fair.iter().map(|j| j.to_vec()).collect() }
}

/// Systems with at most six states and specifications with at most two
/// path quantifiers and two temporal operators.
pub fn fuzz_suite() -> Vec<Fixture> {
    let ring2 = g(2, &[0], &[(0, 1), (1, 0)], &[]);
    let ring3 = g(3, &[0], &[(0, 1), (1, 2), (2, 0)], &[]);
    let chain = g(3, &[0], &[(0, 1), (1, 2), (2, 2)], &[]);
    let fork = g(3, &[0], &[(0, 1), (0, 2), (1, 1), (2, 2)], &[]);
    let lasso = g(3, &[0], &[(0, 1), (1, 2), (1, 0), (2, 2)], &[]);
    let stutter = g(3, &[0], &[(0, 1), (1, 1), (1, 2), (2, 0)], &[]);
    let two_loops = g(4, &[0], &[(0, 1), (1, 0), (1, 2), (2, 3), (3, 2)], &[&[3]]);
    let dead = g(3, &[0, 2], &[(0, 1), (2, 2), (2, 0)], &[]);
    let grid = g(5, &[0], &[(0, 1), (0, 2), (1, 3), (2, 3), (3, 4), (4, 0), (4, 4)], &[]);
    let fair6 = g(6, &[0, 1], &[(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 5), (5, 3), (5, 5)], &[&[2, 5], &[0, 3]]);
    let sink6 = g(6, &[0], &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 5), (2, 0)], &[&[5]]);
    vec![
        explicit("ring2-agf", "two-state ring, visits 1 forever", ring2.clone(), "A G F s = 1"),
        explicit("ring2-eg", "two-state ring never stays put", ring2, "E G s = 0"),
        explicit("ring3-ex", "three-state ring, next step", ring3.clone(), "E X s = 1"),
        explicit("ring3-axax", "three-state ring, two steps", ring3, "A X A X s = 2"),
        explicit("chain-af", "chain into a sink", chain.clone(), "A F s = 2"),
        explicit("chain-ag", "chain leaves its start", chain, "A G s = 0"),
        explicit("fork-af", "a branch that may avoid 2", fork.clone(), "A F s = 2"),
        explicit("fork-ef", "a branch that may reach 2", fork.clone(), "E F s = 2"),
        explicit("fork-ag", "1 is reachable", fork, "A G s != 1"),
        explicit("lasso-au", "until on a lasso", lasso.clone(), "A (s != 2 U s = 1)"),
        explicit("lasso-eu", "existential until on a lasso", lasso.clone(), "E (s != 2 U s = 2)"),
        explicit("lasso-agef", "reset is always possible", lasso, "A G E F s = 0"),
        explicit("stutter-eg", "a self-loop keeps 1 forever", stutter.clone(), "E F E G s = 1"),
        explicit("stutter-afg", "a path may leave 1", stutter, "A F G s = 1"),
        explicit("fair-af", "fairness forces a visit to 2", two_loops.clone(), "Af F s = 2"),
        explicit("fair-eg", "fair paths cannot avoid 3", two_loops.clone(), "Ef G s != 3"),
        explicit("fair-eg-loop", "fair paths settle in the right loop", two_loops, "Ef F G (s = 2 | s = 3)"),
        explicit("dead-ex", "a successor that is a dead end", dead.clone(), "E X s = 1"),
        explicit("dead-ax", "universal step over dead ends", dead, "A X s != 1"),
        explicit("grid-path", "eventually 3 while avoiding 2", grid.clone(), "E (F s = 3 & G s != 2)"),
        explicit("grid-disj", "a path stays away from 4 or reaches 3", grid, "A (G s != 4 | F s = 3)"),
        explicit("fair6-gf", "generalized fairness, 5 infinitely often", fair6.clone(), "Ef G F s = 5"),
        explicit("fair6-ag", "generalized fairness, always able to return", fair6, "Af G Ef F s = 0"),
        explicit("sink6-af", "fair paths end in the sink", sink6.clone(), "Af F G s = 5"),
        explicit("sink6-ex", "no fair path avoids the sink", sink6, "Ef G s < 3"),
    ]
}

fn micro(name: &str, about: &str, source: &str, spec: &str, domains: &str) -> Fixture {
    Fixture {
        name: name.into(),
        about: about.into(),
        suite: Suite::MicroVerification,
        source: source.into(),
        spec: spec.into(),
        domains: domains.into(),
        partial: false,
    }
}

const TOGGLE: &str = "vars { b: Bool; } init { !b } next { b' = !b } fair { }";
const FREE: &str = "vars { b: Bool; } init { !b } next { true } fair { }";
const FREE_FAIR: &str = "vars { b: Bool; } init { !b } next { true } fair { b; }";
const COUNT: &str = "vars { x: Int; } init { x = 0 } next { x < 2 & x' = x + 1 | x = 2 & x' = 2 } fair { }";

/// Problems small enough for exhaustive interpretation search.
pub fn micro_verification_suite() -> Vec<Fixture> {
    vec![
        micro("toggle-ax", "toggle sets b in one step", TOGGLE, "A X b", ""),
        micro("toggle-ax-not", "toggle keeps b false", TOGGLE, "A X !b", ""),
        micro("toggle-ef", "toggle reaches b", TOGGLE, "E F b", ""),
        micro("toggle-eg", "toggle stays false", TOGGLE, "E G !b", ""),
        micro("free-ex", "free choice can set b", FREE, "E X b", ""),
        micro("free-eu", "free choice can reach b", FREE, "E (!b U b)", ""),
        micro("free-au", "free choice must reach b", FREE, "A (!b U b)", ""),
        micro("free-fair-af", "fairness forces b", FREE_FAIR, "Af F b", ""),
        micro("free-fair-eg", "fair paths stay false", FREE_FAIR, "Ef G !b", ""),
        micro("count-af", "counter reaches its bound", COUNT, "A F x = 2", "x=0..2"),
        micro("count-ag", "counter stays below its bound", COUNT, "A G x < 2", "x=0..2"),
        micro("count-eg", "counter settles at the bound", COUNT, "E F G x = 2", "x=0..2"),
    ]
}

fn synth(name: &str, about: &str, source: &str, spec: &str) -> Fixture {
    Fixture {
        name: name.into(),
        about: about.into(),
        suite: Suite::MicroSynthesis,
        source: source.into(),
        spec: spec.into(),
        domains: String::new(),
        partial: true,
    }
}

const GUARD: &str = "vars { pc: {a, t, e}; b: Bool; } init { pc = a } \
    next { pc = t & pc' = a & b' = !b | pc = e & pc' = a & b' = b } fair { } hole cond a t e;";
const SET: &str = "vars { pc: {a, c}; b: Bool; } init { pc = a & !b } \
    next { pc = c & pc' = a & b' = !b } fair { } hole assign a c;";
const KEEP: &str = "vars { pc: {a, c}; b: Bool; } init { pc = a } \
    next { pc = c & pc' = a & b' = b } fair { } hole assign a c;";
const BOTH: &str = "vars { pc: {a, t, e, d}; b: Bool; } init { pc = a } \
    next { pc = e & pc' = a & b' = b | pc = d & pc' = a & b' = b } fair { } hole cond a t e; hole assign t d;";

/// Partial programs with one data variable, small enough to enumerate every
/// resolving function.
pub fn micro_synthesis_suite() -> Vec<Fixture> {
    vec![
        synth("guard-avoid", "the guard must always take the then branch", GUARD, "A G pc != e"),
        synth("guard-reach", "the guard must allow both branches", GUARD, "E F pc = t & E F pc = e"),
        synth("set-invariant", "the assignment must undo the flip", SET, "A G (pc = a -> !b)"),
        synth("set-impossible", "b cannot stay false at both locations", SET, "A G !b"),
        synth("keep-both", "the assignment must reach both values", KEEP, "E F (pc = c & b) & E F (pc = c & !b)"),
        synth("both-holes", "guard on b, then clear b", BOTH, "A G (pc = e -> b) & A G (pc = d -> !b)"),
    ]
}
