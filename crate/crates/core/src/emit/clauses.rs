//! Text and JSON formats for clause sets.
//!
//! ```text
//! decl p/1 (x: Int)
//! decl t/2 (x: Int, x': Int) dwf
//! clause [r6:3]: forall x: Int, x': Int. [x < x'] p(x), t(x, x') -> [true] p(x')
//! clause [r7:4]: forall x: Int. [true] p(x) -> exists x': Int. [x' = x + 1] t(x, x')
//! dwf t
//! ```
//!
//! One line per declaration and clause, dwf lines last. Each side of a
//! clause is a bracketed constraint followed by its atoms. Variables are
//! written as in formulas: primes as `'`, indexed copies as a `_c<n>`
//! suffix. Every variable of a clause is declared with its sort.

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::frontend::expr::{parse_expr, Parser};
use crate::frontend::json::{sort_from_json, sort_to_json, VarJson};
use crate::frontend::lexer::{tokenize, Tok};
use crate::frontend::program::{parse_sort, sort_text};
use crate::frontend::Scope;
use crate::syntax::{Atom, Clause, ClauseSet, DwfClause, Formula, PredSym, Provenance, RuleTag, Sort, Var};
use crate::{Error, Result};

fn var_decl(v: &Var) -> String {
    format!("{v}: {}", sort_text(&v.sort))
}

fn decls_text(vs: &[Var]) -> String {
    vs.iter().map(var_decl).collect::<Vec<_>>().join(", ")
}

fn atom_text(a: &Atom) -> String {
    let args: Vec<String> = a.args.iter().map(|v| v.to_string()).collect();
    format!("{}({})", a.pred.name, args.join(", "))
}

fn side_text(f: &Formula, atoms: &[Atom]) -> String {
    let mut s = format!("[{f}]");
    if !atoms.is_empty() {
        s.push(' ');
        s.push_str(&atoms.iter().map(atom_text).collect::<Vec<_>>().join(", "));
    }
    s
}

/// Render a clause set in the text format.
pub fn emit_text(cs: &ClauseSet) -> String {
    let mut s = String::new();
    for p in &cs.preds {
        let dwf = if cs.dwf.iter().any(|d| d.pred.name == p.name) { " dwf" } else { "" };
        s.push_str(&format!("decl {}/{} ({}){dwf}\n", p.name, p.arity(), decls_text(&p.params)));
    }
    for (c, prov) in cs.clauses.iter().zip(&cs.provenance) {
        s.push_str(&format!("clause [{prov}]: "));
        if !c.all_vars.is_empty() {
            s.push_str(&format!("forall {}. ", decls_text(&c.all_vars)));
        }
        s.push_str(&side_text(&c.body_constraint, &c.body_atoms));
        s.push_str(" -> ");
        if !c.exist_vars.is_empty() {
            s.push_str(&format!("exists {}. ", decls_text(&c.exist_vars)));
        }
        s.push_str(&side_text(&c.head_constraint, &c.head_atoms));
        s.push('\n');
    }
    for d in &cs.dwf {
        s.push_str(&format!("dwf {}\n", d.pred.name));
    }
    s
}

/// Split a written variable name into base name and copy index.
fn split_copy(name: &str) -> (&str, Option<u32>) {
    if let Some(i) = name.rfind("_c") {
        let tail = &name[i + 2..];
        if !tail.is_empty() && tail.chars().all(|c| c.is_ascii_digit()) {
            if let Ok(n) = tail.parse() {
                return (&name[..i], Some(n));
            }
        }
    }
    (name, None)
}

fn make_var(name: &str, primes: u8, sort: Sort) -> Var {
    let (base, copy) = split_copy(name);
    let mut v = Var::new(base, sort);
    v.copy = copy;
    v.primes = primes;
    v
}

/// Parse a variable written as in formulas, such as `x'` or `y_c2`.
pub fn parse_var_name(src: &str, sort: Sort) -> Result<Var> {
    let primes = src.chars().rev().take_while(|&c| c == '\'').count();
    let name = &src[..src.len() - primes];
    if name.is_empty() {
        return Err(Error::Parse { line: 1, col: 1, msg: format!("`{src}` is not a variable") });
    }
    Ok(make_var(name, primes as u8, sort))
}

fn decl(p: &mut Parser) -> Result<Var> {
    let name = p.ident()?;
    let primes = p.primes();
    p.expect(&Tok::Colon)?;
    let sort = parse_sort(p)?;
    Ok(make_var(&name, primes, sort))
}

fn decl_list(p: &mut Parser) -> Result<Vec<Var>> {
    let mut out = vec![decl(p)?];
    while p.eat(&Tok::Comma) {
        out.push(decl(p)?);
    }
    Ok(out)
}

struct Ctx {
    preds: HashMap<String, Arc<PredSym>>,
}

impl Ctx {
    fn atom(&self, p: &mut Parser, vars: &HashMap<String, Var>) -> Result<Atom> {
        let (line, col) = p.here();
        let name = p.ident()?;
        let pred = self.preds.get(&name).cloned().ok_or(Error::Parse {
            line,
            col,
            msg: format!("undeclared predicate `{name}`"),
        })?;
        p.expect(&Tok::LParen)?;
        let mut args = Vec::new();
        if !p.eat(&Tok::RParen) {
            loop {
                let (line, col) = p.here();
                let mut key = p.ident()?;
                key.push_str(&"'".repeat(p.primes() as usize));
                let v = vars.get(&key).cloned().ok_or(Error::Parse {
                    line,
                    col,
                    msg: format!("undeclared variable `{key}`"),
                })?;
                args.push(v);
                if p.eat(&Tok::RParen) {
                    break;
                }
                p.expect(&Tok::Comma)?;
            }
        }
        let a = pred.atom(args);
        crate::syntax::clause::check_atom(&a)?;
        Ok(a)
    }

    fn side(&self, p: &mut Parser, scope: &Scope, vars: &HashMap<String, Var>) -> Result<(Formula, Vec<Atom>)> {
        p.expect(&Tok::LBracket)?;
        let f = scope.formula(&p.expr()?)?;
        p.expect(&Tok::RBracket)?;
        let mut atoms = Vec::new();
        if matches!(p.peek(), Tok::Ident(_)) && *p.peek_at(1) == Tok::LParen {
            atoms.push(self.atom(p, vars)?);
            while p.eat(&Tok::Comma) {
                atoms.push(self.atom(p, vars)?);
            }
        }
        Ok((f, atoms))
    }
}

fn num(p: &mut Parser, what: &str) -> Result<u32> {
    match p.bump() {
        Tok::Num(q) if q.is_integer() && *q.numer() >= 0 && *q.numer() <= u32::MAX as i64 => Ok(*q.numer() as u32),
        _ => p.error(format!("expected {what}")),
    }
}

/// Parse the text format produced by [`emit_text`].
pub fn parse_text(src: &str) -> Result<ClauseSet> {
    let toks = tokenize(src, false)?;
    let mut p = Parser::new(&toks);
    let mut cs = ClauseSet::new();
    let mut ctx = Ctx { preds: HashMap::new() };
    let mut flagged = BTreeSet::new();
    while !p.at_eof() {
        let (line, col) = p.here();
        match p.ident()?.as_str() {
            "decl" => {
                let name = p.ident()?;
                p.expect(&Tok::Slash)?;
                let arity = num(&mut p, "an arity")?;
                p.expect(&Tok::LParen)?;
                let params = if p.eat(&Tok::RParen) {
                    vec![]
                } else {
                    let ps = decl_list(&mut p)?;
                    p.expect(&Tok::RParen)?;
                    ps
                };
                if params.len() != arity as usize {
                    return Err(Error::Parse {
                        line,
                        col,
                        msg: format!("`{name}` has arity {arity} but {} parameters", params.len()),
                    });
                }
                if p.eat_keyword("dwf") {
                    flagged.insert(name.clone());
                }
                if ctx.preds.contains_key(&name) {
                    return Err(Error::Parse { line, col, msg: format!("predicate `{name}` declared twice") });
                }
                let pred = PredSym::new(&name, params);
                ctx.preds.insert(name, pred.clone());
                cs.declare(&pred);
            }
            "clause" => {
                p.expect(&Tok::LBracket)?;
                let (tl, tc) = p.here();
                let tag = p.ident()?;
                let rule = RuleTag::from_name(&tag).ok_or(Error::Parse {
                    line: tl,
                    col: tc,
                    msg: format!("unknown rule tag `{tag}`"),
                })?;
                p.expect(&Tok::Colon)?;
                let counter = num(&mut p, "a provenance counter")?;
                p.expect(&Tok::RBracket)?;
                p.expect(&Tok::Colon)?;
                let all_vars = if p.eat_keyword("forall") { decl_list(&mut p)? } else { vec![] };
                if !all_vars.is_empty() {
                    p.expect(&Tok::Dot)?;
                }
                let mut scope = Scope::new();
                let mut vars = HashMap::new();
                for v in &all_vars {
                    scope.add_var(v.clone());
                    vars.insert(v.to_string(), v.clone());
                }
                let (body_constraint, body_atoms) = ctx.side(&mut p, &scope, &vars)?;
                p.expect(&Tok::Arrow)?;
                let exist_vars = if p.eat_keyword("exists") { decl_list(&mut p)? } else { vec![] };
                if !exist_vars.is_empty() {
                    p.expect(&Tok::Dot)?;
                }
                for v in &exist_vars {
                    scope.add_var(v.clone());
                    vars.insert(v.to_string(), v.clone());
                }
                let (head_constraint, head_atoms) = ctx.side(&mut p, &scope, &vars)?;
                let c = Clause { all_vars, body_constraint, body_atoms, exist_vars, head_constraint, head_atoms };
                c.validate()?;
                cs.push(c, Provenance { rule, counter });
            }
            "dwf" => {
                let (line, col) = p.here();
                let name = p.ident()?;
                let pred = ctx.preds.get(&name).ok_or(Error::Parse {
                    line,
                    col,
                    msg: format!("undeclared predicate `{name}`"),
                })?;
                let d = DwfClause { pred: pred.clone() };
                d.validate()?;
                cs.dwf.push(d);
            }
            other => {
                return Err(Error::Parse {
                    line,
                    col,
                    msg: format!("expected `decl`, `clause` or `dwf`, found `{other}`"),
                })
            }
        }
    }
    let listed: BTreeSet<String> = cs.dwf.iter().map(|d| d.pred.name.to_string()).collect();
    if listed != flagged {
        return Err(Error::Clause("the dwf flags of the declarations differ from the dwf lines".into()));
    }
    cs.validate()?;
    Ok(cs)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PredJson {
    pub name: String,
    pub params: Vec<VarJson>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AtomJson {
    pub pred: String,
    pub args: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SideJson {
    pub constraint: String,
    pub atoms: Vec<AtomJson>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClauseJson {
    pub provenance: String,
    #[serde(default)]
    pub forall: Vec<VarJson>,
    #[serde(default)]
    pub exists: Vec<VarJson>,
    pub body: SideJson,
    pub head: SideJson,
}

/// JSON form of a clause set. Constraints are strings in formula syntax.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClauseSetJson {
    pub preds: Vec<PredJson>,
    pub clauses: Vec<ClauseJson>,
    #[serde(default)]
    pub dwf: Vec<String>,
}

fn var_json(v: &Var) -> VarJson {
    VarJson { name: v.to_string(), sort: sort_to_json(&v.sort) }
}

fn var_from_json(j: &VarJson) -> Result<Var> {
    parse_var_name(&j.name, sort_from_json(&j.sort)?)
}

fn side_json(f: &Formula, atoms: &[Atom]) -> SideJson {
    SideJson {
        constraint: f.to_string(),
        atoms: atoms
            .iter()
            .map(|a| AtomJson { pred: a.pred.name.to_string(), args: a.args.iter().map(|v| v.to_string()).collect() })
            .collect(),
    }
}

pub fn clauses_to_json(cs: &ClauseSet) -> ClauseSetJson {
    ClauseSetJson {
        preds: cs
            .preds
            .iter()
            .map(|p| PredJson { name: p.name.to_string(), params: p.params.iter().map(var_json).collect() })
            .collect(),
        clauses: cs
            .clauses
            .iter()
            .zip(&cs.provenance)
            .map(|(c, prov)| ClauseJson {
                provenance: prov.to_string(),
                forall: c.all_vars.iter().map(var_json).collect(),
                exists: c.exist_vars.iter().map(var_json).collect(),
                body: side_json(&c.body_constraint, &c.body_atoms),
                head: side_json(&c.head_constraint, &c.head_atoms),
            })
            .collect(),
        dwf: cs.dwf.iter().map(|d| d.pred.name.to_string()).collect(),
    }
}

fn parse_provenance(s: &str) -> Result<Provenance> {
    let bad = || Error::Clause(format!("malformed provenance `{s}`"));
    let (tag, n) = s.split_once(':').ok_or_else(bad)?;
    Ok(Provenance { rule: RuleTag::from_name(tag).ok_or_else(bad)?, counter: n.parse().map_err(|_| bad())? })
}

pub fn clauses_from_json(j: &ClauseSetJson) -> Result<ClauseSet> {
    let mut cs = ClauseSet::new();
    let mut preds: HashMap<&str, Arc<PredSym>> = HashMap::new();
    for p in &j.preds {
        let params = p.params.iter().map(var_from_json).collect::<Result<Vec<_>>>()?;
        let sym = PredSym::new(&p.name, params);
        if preds.insert(&p.name, sym.clone()).is_some() {
            return Err(Error::Clause(format!("predicate `{}` declared twice", p.name)));
        }
        cs.declare(&sym);
    }
    for c in &j.clauses {
        let all_vars = c.forall.iter().map(var_from_json).collect::<Result<Vec<_>>>()?;
        let exist_vars = c.exists.iter().map(var_from_json).collect::<Result<Vec<_>>>()?;
        let mut scope = Scope::new();
        let mut vars = HashMap::new();
        for v in all_vars.iter().chain(&exist_vars) {
            scope.add_var(v.clone());
            vars.insert(v.to_string(), v.clone());
        }
        let side = |s: &SideJson| -> Result<(Formula, Vec<Atom>)> {
            let f = scope.formula(&parse_expr(&s.constraint)?)?;
            let atoms = s
                .atoms
                .iter()
                .map(|a| {
                    let pred = preds.get(a.pred.as_str()).ok_or_else(|| Error::UnknownPredicate(a.pred.clone()))?;
                    let args = a
                        .args
                        .iter()
                        .map(|n| {
                            vars.get(n).cloned().ok_or_else(|| Error::Clause(format!("undeclared variable `{n}`")))
                        })
                        .collect::<Result<Vec<_>>>()?;
                    let atom = pred.atom(args);
                    crate::syntax::clause::check_atom(&atom)?;
                    Ok(atom)
                })
                .collect::<Result<Vec<_>>>()?;
            Ok((f, atoms))
        };
        let (body_constraint, body_atoms) = side(&c.body)?;
        let (head_constraint, head_atoms) = side(&c.head)?;
        let clause = Clause { all_vars, body_constraint, body_atoms, exist_vars, head_constraint, head_atoms };
        clause.validate()?;
        cs.push(clause, parse_provenance(&c.provenance)?);
    }
    for d in &j.dwf {
        let pred = preds.get(d.as_str()).ok_or_else(|| Error::UnknownPredicate(d.clone()))?;
        let dc = DwfClause { pred: pred.clone() };
        dc.validate()?;
        cs.dwf.push(dc);
    }
    cs.validate()?;
    Ok(cs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontend::{parse_formula, parse_program};
    use crate::syntax::LocSort;
    use crate::trans::translate;

    fn sample() -> ClauseSet {
        let p = parse_program("vars { pc: {a, b}; x: Int; } init { pc = a & x = 0 } next { pc = a & pc' = b & x' = x + 1 | pc = b & pc' = a & x' = x } fair { pc = b; }").unwrap();
        let phi = parse_formula("Af G F (pc = b) & E (x = 0 U pc = b)", &p.vars).unwrap();
        translate(&p, &phi).unwrap().clauses
    }

    #[test]
    fn text_round_trip() {
        let cs = sample();
        let text = emit_text(&cs);
        let back = parse_text(&text).unwrap();
        assert_eq!(emit_text(&back), text);
        assert_eq!(back.len(), cs.len());
    }

    #[test]
    fn json_round_trip() {
        let cs = sample();
        let j = serde_json::to_string(&clauses_to_json(&cs)).unwrap();
        let back = clauses_from_json(&serde_json::from_str(&j).unwrap()).unwrap();
        assert_eq!(emit_text(&back), emit_text(&cs));
    }

    #[test]
    fn copies_and_primes() {
        let v = parse_var_name("y_c2''", Sort::Int).unwrap();
        assert_eq!((v.copy, v.primes, &*v.name), (Some(2), 2, "y"));
        let pc = parse_var_name("pc", Sort::Loc(LocSort::new(["a"]))).unwrap();
        assert_eq!(pc.to_string(), "pc");
    }

    #[test]
    fn rejects_undeclared() {
        assert!(parse_text("clause [r8:0]: [true] p() -> [true]").is_err());
        assert!(parse_text("decl p/1 (x: Int)\nclause [r8:0]: forall x: Int. [true] p(y) -> [true]").is_err());
        assert!(parse_text("decl p/1 (x: Int) dwf\n").is_err());
        assert!(parse_text("decl p/2 (x: Int)\n").is_err());
    }

    #[test]
    fn one_line_per_item() {
        let cs = sample();
        let text = emit_text(&cs);
        assert_eq!(text.lines().count(), cs.preds.len() + cs.clauses.len() + cs.dwf.len());
        assert!(text.lines().last().unwrap().starts_with("dwf "));
    }
}
