//! The two case studies and their finite miniatures.

use super::{Fixture, Suite};
use crate::frontend::parse_assertion;
use crate::syntax::Formula;
use crate::Result;

/// One program step from `from` to `to` under `guard`, assigning the given
/// variables and keeping every other variable of `vars` unchanged. Variables
/// listed in `havoc` get no constraint.
fn step(from: &str, to: &str, guard: &str, assign: &[(&str, &str)], havoc: &[&str], vars: &[&str]) -> String {
    let mut parts = vec![format!("pc = {from}"), format!("pc' = {to}")];
    if !guard.is_empty() {
        parts.push(guard.to_string());
    }
    for v in vars {
        if havoc.contains(v) {
            continue;
        }
        match assign.iter().find(|(w, _)| w == v) {
            Some((_, e)) => parts.push(format!("{v}' = {e}")),
            None => parts.push(format!("{v}' = {v}")),
        }
    }
    parts.join(" & ")
}

fn program_text(decls: &str, init: &str, steps: &[String], fair: &[&str], holes: &[&str]) -> String {
    let mut s = format!("vars {{ {decls} }}\ninit {{ {init} }}\nnext {{\n    ");
    s.push_str(&steps.join("\n  | "));
    s.push_str("\n}\nfair {");
    for j in fair {
        s.push_str(&format!(" {j};"));
    }
    s.push_str(" }\n");
    for h in holes {
        s.push_str(&format!("hole {h};\n"));
    }
    s
}

const ROBOT_VARS: &[&str] = &["robot_id", "a", "b", "x1", "y1", "x2", "y2", "x3", "y3"];

const SAFE: &str = "(x1 != x2 | x1 != x3 | x2 != x3 | y1 != y2 | y1 != y3 | y2 != y3)";

fn meet(i: u8, j: u8) -> String {
    format!("(x{i} = x{j} & y{i} = y{j})")
}

fn robots_spec() -> String {
    format!("A G {SAFE} & E G F {} & E G F {} & E G F {}", meet(1, 2), meet(2, 3), meet(1, 3))
}

/// The robots program: a loop that reads a robot identifier and a move and
/// applies the robot's linear transformation, one statement per location.
pub fn robots() -> Fixture {
    let v = ROBOT_VARS;
    let steps = vec![
        step("l1", "l2", "", &[], &[], v),
        step("l2", "l3", "", &[], &["robot_id"], v),
        step("l3", "l4", "", &[], &["a"], v),
        step("l4", "l5", "", &[], &["b"], v),
        step("l5", "l6", "robot_id = 1", &[], &[], v),
        step("l5", "l7", "robot_id != 1", &[], &[], v),
        step("l6", "l7", "", &[("x1", "x1 + 2*a + b")], &[], v),
        step("l7", "l8", "robot_id = 2", &[], &[], v),
        step("l7", "l10", "robot_id != 2", &[], &[], v),
        step("l8", "l9", "", &[("x2", "x2 + a + b")], &[], v),
        step("l9", "l10", "", &[("y2", "y2 - 2*a - 2*b")], &[], v),
        step("l10", "l11", "robot_id = 3", &[], &[], v),
        step("l10", "l1", "robot_id != 3", &[], &[], v),
        step("l11", "l12", "", &[("x3", "x3 + a + b")], &[], v),
        step("l12", "l1", "", &[("y3", "y3 - a - b")], &[], v),
    ];
    let decls = "pc: {l1, l2, l3, l4, l5, l6, l7, l8, l9, l10, l11, l12}; robot_id: Int; a: Rat; b: Rat; \
                 x1: Rat; y1: Rat; x2: Rat; y2: Rat; x3: Rat; y3: Rat;";
    Fixture {
        name: "robots".into(),
        about: "three robots on the rational plane; never all in one place, every pair can meet infinitely often"
            .into(),
        suite: Suite::CaseStudy,
        source: program_text(decls, "x1 = 0 & y1 = 0 & x2 = 0 & y2 = 0 & x3 = 0 & y3 = 2", &steps, &[], &[]),
        spec: robots_spec(),
        domains: String::new(),
        partial: false,
    }
}

/// The robots program with only its first conjunct as specification.
pub fn robots_conjunct1() -> Fixture {
    Fixture {
        name: "robots-safe".into(),
        about: "the robots program against its safety conjunct alone".into(),
        spec: format!("A G {SAFE}"),
        ..robots()
    }
}

/// A finite miniature of the robots system. One transition moves one robot
/// by a unit step `s ∈ {-1, 0, 1}` along its direction of motion: `(s, 0)`,
/// `(s, -2s)` and `(s, -s)`. Each coordinate ranges over the values needed
/// for the three meeting points `(0,0)`, `(-2,4)` and `(2,0)`, and moves
/// that leave these ranges are dropped.
pub fn robots_mini() -> Fixture {
    let unit = |x: &str| format!("{x}' - {x} <= 1 & {x} - {x}' <= 1");
    let keep = |vs: &[&str]| vs.iter().map(|v| format!("{v}' = {v}")).collect::<Vec<_>>().join(" & ");
    let steps = [
        format!("{} & {}", unit("x1"), keep(&["y1", "x2", "y2", "x3", "y3"])),
        format!("{} & y2' = y2 - 2*(x2' - x2) & {}", unit("x2"), keep(&["x1", "y1", "x3", "y3"])),
        format!("{} & y3' = y3 - (x3' - x3) & {}", unit("x3"), keep(&["x1", "y1", "x2", "y2"])),
    ];
    let source = format!(
        "vars {{ x1: Int; y1: Int; x2: Int; y2: Int; x3: Int; y3: Int; }}\n\
         init {{ x1 = 0 & y1 = 0 & x2 = 0 & y2 = 0 & x3 = 0 & y3 = 2 }}\n\
         next {{\n    {}\n}}\nfair {{ }}\n",
        steps.join("\n  | ")
    );
    Fixture {
        name: "robots-mini".into(),
        about: "robots with unit moves on a bounded grid (675 states)".into(),
        suite: Suite::CaseStudy,
        source,
        spec: robots_spec(),
        domains: "x1=0..2; y1=0..0; x2=-2..0; y2={0, 2, 4}; x3=-2..2; y3=0..4".into(),
        partial: false,
    }
}

const BANK_VARS: &[&str] = &["req", "bal", "exp", "pro"];

/// Locations of the holes of the bank sketch, in declaration order.
pub const BANK_HOLES: [&str; 3] = ["lc", "la1", "la2"];

fn bank_source(decls: &str, fee: &str, init: &str) -> String {
    let v = BANK_VARS;
    let steps = vec![
        step("l1", "l2", "", &[], &[], v),
        step("l2", "lc", "", &[], &["req"], v),
        step("l3", "l4", "", &[("bal", "bal - req")], &[], v),
        step("l4", "la1", "req < 0", &[], &[], v),
        step("l4", "l5", "req >= 0", &[], &[], v),
        step("l5", "la2", "", &[("exp", "exp + req")], &[], v),
        step("l6", "l1", "", &[("pro", &format!("pro - {fee}"))], &[], v),
    ];
    program_text(
        &format!("pc: {{l1, l2, lc, l3, l4, la1, l5, la2, l6}}; {decls}"),
        init,
        &steps,
        &[],
        &["cond lc l3 l2", "assign la1 l6", "assign la2 l6"],
    )
}

/// The bank sketch: a condition hole guarding the transaction and one
/// assignment hole per kind of request.
pub fn bank() -> Fixture {
    Fixture {
        name: "bank".into(),
        about: "client and bank interaction with a missing guard and two missing assignments".into(),
        suite: Suite::CaseStudy,
        source: bank_source("req: Rat; bal: Rat; exp: Rat; pro: Rat;", "1/10", "bal = 0 & exp = 0 & pro = 0"),
        spec: "A (G exp < 1000 | F G pro > 50) & E F (exp >= 100 & pro < 7)".into(),
        domains: String::new(),
        partial: true,
    }
}

/// The transaction fee of the micro bank in money units.
pub const MICRO_BANK_FEE: i64 = 1;

/// The bank sketch on integers. Money is counted in units of the fee, the
/// withdrawal charge is the whole request instead of a small percentage,
/// and the thresholds shrink with the ranges while keeping the relations
/// that make the specification hold: the profit threshold of the first
/// conjunct is below the charge on the expense threshold, and the profit
/// bound of the second conjunct is above the charge on its expense bound.
/// Runs start at `l1`; with the location free, states such as `l5` with a
/// negative request would be initial, and from there no run withdraws.
pub fn micro_bank() -> Fixture {
    Fixture {
        name: "micro-bank".into(),
        about: "the bank sketch over small integer ranges with rescaled constants".into(),
        suite: Suite::CaseStudy,
        source: bank_source(
            "req: Int; bal: Int; exp: Int; pro: Int;",
            &MICRO_BANK_FEE.to_string(),
            "pc = l1 & bal = 0 & exp = 0 & pro = 0",
        ),
        spec: "A (G exp < 2 | F G pro > 1) & E F (exp >= 1 & pro < 3)".into(),
        domains: "req=-2..1; bal=-1..3; exp=0..2; pro=0..3".into(),
        partial: true,
    }
}

/// The hole fillings of the synthesized bank, rescaled like
/// [`micro_bank`], keyed by hole location.
pub fn micro_bank_fills() -> Result<Vec<(String, Formula)>> {
    let f = MICRO_BANK_FEE;
    let pp = micro_bank().partial_program()?;
    let vr = pp.data_vars();
    let texts = [
        ("lc", format!("bal - req >= {f}"), 0),
        ("la1", format!("bal' = bal - {f} & pro' = pro + {f} & req' = req & exp' = exp"), 1),
        ("la2", format!("bal' = bal - {f} - req & pro' = pro + {f} + req & req' = req & exp' = exp"), 1),
    ];
    texts.iter().map(|(l, src, primes)| Ok((l.to_string(), parse_assertion(src, &vr, *primes)?))).collect()
}
