//! Concrete syntax of programs, partial programs and domain ranges.
//!
//! ```text
//! vars { pc: {l1, l2}; x: Int; b: Bool; }
//! init { x = 0 & !b }
//! next { pc = l1 & pc' = l2 & x' = x + 1 & b' = b }
//! fair { b; }
//! hole cond l1 l2 l1;
//! hole assign l2 l1;
//! ```

use num_rational::Rational64;

use super::convert::Scope;
use super::expr::{Parser, KEYWORDS};
use super::lexer::{tokenize, Tok};
use crate::syntax::{Domains, Hole, LocSort, PartialProgram, Program, Sort, Value, Var};
use crate::{Error, Result};

/// Parse a program. Hole declarations are rejected.
pub fn parse_program(src: &str) -> Result<Program> {
    let (p, holes) = parse_with_holes(src)?;
    if !holes.is_empty() {
        return Err(Error::Program("holes are only allowed in partial programs".into()));
    }
    Ok(p)
}

/// Parse a partial program: a program plus `hole` declarations.
pub fn parse_partial_program(src: &str) -> Result<PartialProgram> {
    let (p, holes) = parse_with_holes(src)?;
    PartialProgram::new(p, holes)
}

fn valid_name(name: &str) -> bool {
    if KEYWORDS.contains(&name) || matches!(name, "Bool" | "Int" | "Rat") {
        return false;
    }
    match name.rfind("_c") {
        Some(i) => {
            let tail = &name[i + 2..];
            tail.is_empty() || !tail.chars().all(|c| c.is_ascii_digit())
        }
        None => true,
    }
}

fn parse_with_holes(src: &str) -> Result<(Program, Vec<Hole>)> {
    let toks = tokenize(src, false)?;
    let mut p = Parser::new(&toks);
    let mut vars: Option<Vec<Var>> = None;
    let (mut init, mut next, mut fair) = (None, None, None);
    let mut holes = Vec::new();
    while !p.at_eof() {
        let (line, col) = p.here();
        let kw = p.ident()?;
        let need_vars = |vars: &Option<Vec<Var>>| -> Result<Vec<Var>> {
            vars.clone().ok_or(Error::Parse { line, col, msg: "the `vars` block must come first".into() })
        };
        match kw.as_str() {
            "vars" => {
                if vars.is_some() {
                    return p.error("duplicate `vars` block");
                }
                vars = Some(parse_vars(&mut p)?);
            }
            "init" | "next" => {
                let vs = need_vars(&vars)?;
                let scope = Scope::with_vars(&vs, if kw == "next" { 1 } else { 0 });
                p.expect(&Tok::LBrace)?;
                let e = p.expr()?;
                p.expect(&Tok::RBrace)?;
                let f = scope.formula(&e).map_err(|err| primed_hint(err, &kw))?;
                let slot = if kw == "init" { &mut init } else { &mut next };
                if slot.replace(f).is_some() {
                    return p.error(format!("duplicate `{kw}` block"));
                }
            }
            "fair" => {
                let vs = need_vars(&vars)?;
                let scope = Scope::with_vars(&vs, 0);
                p.expect(&Tok::LBrace)?;
                let mut js = Vec::new();
                while !p.eat(&Tok::RBrace) {
                    let e = p.expr()?;
                    js.push(scope.formula(&e).map_err(|err| primed_hint(err, "fair"))?);
                    if !p.eat(&Tok::Semi) {
                        p.expect(&Tok::RBrace)?;
                        break;
                    }
                }
                if fair.replace(js).is_some() {
                    return p.error("duplicate `fair` block");
                }
            }
            "hole" => {
                let kind = p.ident()?;
                let h = match kind.as_str() {
                    "cond" => Hole::Cond { l: p.ident()?, lt: p.ident()?, lf: p.ident()? },
                    "assign" => Hole::Assign { l: p.ident()?, next: p.ident()? },
                    other => return p.error(format!("unknown hole kind `{other}`; expected `cond` or `assign`")),
                };
                p.expect(&Tok::Semi)?;
                holes.push(h);
            }
            other => {
                return Err(Error::Parse { line, col, msg: format!("unknown section `{other}`") });
            }
        }
    }
    let vars = vars.ok_or_else(|| Error::Program("missing `vars` block".into()))?;
    let init = init.ok_or_else(|| Error::Program("missing `init` block".into()))?;
    let next = next.ok_or_else(|| Error::Program("missing `next` block".into()))?;
    let prog = Program::new(vars, init, next, fair.unwrap_or_default())?;
    Ok((prog, holes))
}

fn primed_hint(err: Error, block: &str) -> Error {
    match err {
        Error::Parse { line, col, msg } if msg.contains("'`") && block != "next" => {
            Error::Parse { line, col, msg: format!("{msg}: primed variables are only allowed in `next`") }
        }
        e => e,
    }
}

fn parse_vars(p: &mut Parser) -> Result<Vec<Var>> {
    p.expect(&Tok::LBrace)?;
    let mut vars: Vec<Var> = Vec::new();
    let mut labels: Vec<String> = Vec::new();
    while !p.eat(&Tok::RBrace) {
        let name = p.ident()?;
        if !valid_name(&name) {
            return p.error(format!("`{name}` cannot be used as a variable name"));
        }
        p.expect(&Tok::Colon)?;
        let sort = if p.eat(&Tok::LBrace) {
            let mut ls = Vec::new();
            loop {
                let l = p.ident()?;
                if ls.contains(&l) {
                    return p.error(format!("label `{l}` repeated"));
                }
                ls.push(l);
                if p.eat(&Tok::RBrace) {
                    break;
                }
                p.expect(&Tok::Comma)?;
            }
            labels.extend(ls.iter().cloned());
            Sort::Loc(LocSort::new(ls))
        } else {
            match p.ident()?.as_str() {
                "Bool" => Sort::Bool,
                "Int" => Sort::Int,
                "Rat" => Sort::Rat,
                other => return p.error(format!("unknown sort `{other}`")),
            }
        };
        vars.push(Var::new(&name, sort));
        if !p.eat(&Tok::Semi) {
            p.expect(&Tok::RBrace)?;
            break;
        }
    }
    if let Some(v) = vars.iter().find(|v| labels.contains(&v.name.to_string())) {
        return Err(Error::Program(format!("`{}` is both a variable and a location label", v.name)));
    }
    Ok(vars)
}

/// Render a program in the concrete syntax accepted by [`parse_program`].
pub fn print_program(p: &Program) -> String {
    let mut s = String::from("vars {\n");
    for v in &p.vars {
        s.push_str(&format!("  {}: {};\n", v.name, sort_text(&v.sort)));
    }
    s.push_str("}\n");
    s.push_str(&format!("init {{ {} }}\n", p.init));
    s.push_str(&format!("next {{ {} }}\n", p.next));
    s.push_str("fair {");
    if p.fairness.is_empty() {
        s.push_str(" }\n");
    } else {
        s.push('\n');
        for j in &p.fairness {
            s.push_str(&format!("  {j};\n"));
        }
        s.push_str("}\n");
    }
    s
}

/// Render a partial program.
pub fn print_partial_program(pp: &PartialProgram) -> String {
    let mut s = print_program(&pp.program);
    for h in &pp.holes {
        match h {
            Hole::Cond { l, lt, lf } => s.push_str(&format!("hole cond {l} {lt} {lf};\n")),
            Hole::Assign { l, next } => s.push_str(&format!("hole assign {l} {next};\n")),
        }
    }
    s
}

pub fn sort_text(s: &Sort) -> String {
    match s {
        Sort::Loc(l) => format!("{{{}}}", l.labels().join(", ")),
        other => other.to_string(),
    }
}

/// Parse a sort written as `Bool`, `Int`, `Rat` or `{l1, l2, ...}`.
pub fn parse_sort(p: &mut Parser) -> Result<Sort> {
    if p.eat(&Tok::LBrace) {
        let mut ls = Vec::new();
        loop {
            ls.push(p.ident()?);
            if p.eat(&Tok::RBrace) {
                break;
            }
            p.expect(&Tok::Comma)?;
        }
        return Ok(Sort::Loc(LocSort::new(ls)));
    }
    match p.ident()?.as_str() {
        "Bool" => Ok(Sort::Bool),
        "Int" => Ok(Sort::Int),
        "Rat" => Ok(Sort::Rat),
        other => p.error(format!("unknown sort `{other}`")),
    }
}

/// Parse a domain specification such as `Int=0..2; y=-1..1; r={0, 1/2, 1}`.
///
/// Keys are `Int`, `Rat` (defaults per sort) or variable names.
pub fn parse_domains(src: &str) -> Result<Domains> {
    let toks = tokenize(src, false)?;
    let mut p = Parser::new(&toks);
    let mut d = Domains::new();
    while !p.at_eof() {
        let key = p.ident()?;
        p.expect(&Tok::Eq)?;
        let vals = if p.eat(&Tok::LBrace) {
            let mut vs = Vec::new();
            loop {
                vs.push(Value::Num(number(&mut p)?));
                if p.eat(&Tok::RBrace) {
                    break;
                }
                p.expect(&Tok::Comma)?;
            }
            vs
        } else {
            let lo = number(&mut p)?;
            p.expect(&Tok::DotDot)?;
            let hi = number(&mut p)?;
            if !lo.is_integer() || !hi.is_integer() {
                return p.error("range bounds must be integers");
            }
            (lo.to_integer()..=hi.to_integer()).map(Value::int).collect()
        };
        match key.as_str() {
            "Int" => d.int = vals,
            "Rat" => d.rat = vals,
            _ => {
                d.by_name.insert(key, vals);
            }
        }
        if !p.eat(&Tok::Semi) && !p.eat(&Tok::Comma) && !p.at_eof() {
            return p.error("expected `;` between domain entries");
        }
    }
    Ok(d)
}

fn number(p: &mut Parser) -> Result<Rational64> {
    let neg = p.eat(&Tok::Minus);
    let q = match p.bump() {
        Tok::Num(q) => q,
        t => return p.error(format!("expected a number, found {t:?}")),
    };
    let q = if p.eat(&Tok::Slash) {
        match p.bump() {
            Tok::Num(d) if d != Rational64::from_integer(0) => q / d,
            _ => return p.error("expected a nonzero denominator"),
        }
    } else {
        q
    };
    Ok(if neg { -q } else { q })
}

/// Render domains in the syntax accepted by [`parse_domains`].
pub fn print_domains(d: &Domains) -> String {
    let list = |vs: &[Value]| -> String {
        let items: Vec<String> = vs.iter().map(|v| v.to_string()).collect();
        format!("{{{}}}", items.join(", "))
    };
    let mut parts = Vec::new();
    if !d.int.is_empty() {
        parts.push(format!("Int={}", list(&d.int)));
    }
    if !d.rat.is_empty() {
        parts.push(format!("Rat={}", list(&d.rat)));
    }
    for (k, v) in &d.by_name {
        parts.push(format!("{k}={}", list(v)));
    }
    parts.join("; ")
}

#[cfg(test)]
mod tests {
    use super::*;

    const TOGGLE: &str = "vars { b: Bool; } init { !b } next { b' = !b } fair { }";

    #[test]
    fn toggle_parses() {
        let p = parse_program(TOGGLE).unwrap();
        assert_eq!(p.vars.len(), 1);
        assert!(p.fairness.is_empty());
        assert_eq!(p.next.to_string(), "b' <-> !b");
    }

    #[test]
    fn print_parse_round_trip() {
        let src = "vars { pc: {l1, l2}; x: Int; r: Rat; }\n\
                   init { pc = l1 & x = 0 & r = 1/3 }\n\
                   next { pc = l1 & pc' = l2 & x' = x + 1 & r' = r * 0.5 | pc = l2 & pc' = l1 & x' = x - -2 & r' = r }\n\
                   fair { pc = l2; x > 0 }";
        let p = parse_program(src).unwrap();
        let again = parse_program(&print_program(&p)).unwrap();
        assert_eq!(p, again);
    }

    #[test]
    fn errors_are_reported() {
        assert!(matches!(parse_program("vars { b: Bool; } init { b' } next { true }"), Err(Error::Parse { .. })));
        assert!(matches!(parse_program("vars { b: Bool; } init { y } next { true }"), Err(Error::Parse { .. })));
        assert!(matches!(parse_program("vars { x: Int; } init { x & true } next { true }"), Err(Error::Sort(_))));
        assert!(matches!(parse_program("vars { x: Int; } init { x * x = 1 } next { true }"), Err(Error::Nonlinear(_))));
        assert!(parse_program("vars { x_c1: Int; } init { true } next { true }").is_err());
    }

    #[test]
    fn partial_program_holes() {
        let src = "vars { pc: {a, b}; x: Int; } init { pc = a } next { false } hole cond a b a; hole assign b a;";
        let pp = parse_partial_program(src).unwrap();
        assert_eq!(pp.holes.len(), 2);
        assert_eq!(parse_partial_program(&print_partial_program(&pp)).unwrap(), pp);
        assert!(parse_partial_program("vars { x: Int; } init { true } next { true } hole assign a b;").is_err());
        assert!(parse_program(src).is_err());
    }

    #[test]
    fn domain_specs() {
        let d = parse_domains("Int=0..2; y=-1..1; r={0, 1/2, 0.75}").unwrap();
        assert_eq!(d.int.len(), 3);
        assert_eq!(d.by_name["y"][0], Value::int(-1));
        assert_eq!(d.by_name["r"][1], Value::Num(Rational64::new(1, 2)));
        assert_eq!(parse_domains(&print_domains(&d)).unwrap(), d);
    }
}
