//! Untyped expression trees: the common concrete syntax of assertions and
//! CTL* formulas, with a precedence-climbing parser and a printer that
//! inserts exactly the parentheses the parser needs.
//!
//! Precedence, loosest first: `<->`, `->` (right), `|`, `&`, `U` (right),
//! prefix operators (`!`, `X`, `G`, `F`, quantifiers), comparisons, `+ -`,
//! `* /`, unary minus.

use num_rational::Rational64;
use num_traits::Signed;

use super::lexer::{describe, Tok, Token};
use crate::syntax::{fmt_rational, CmpOp, PathQuant};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Ident { name: String, primes: u8, line: usize, col: usize },
    Num(Rational64),
    Bool(bool),
    Not(Box<Expr>),
    Neg(Box<Expr>),
    And(Vec<Expr>),
    Or(Vec<Expr>),
    Implies(Box<Expr>, Box<Expr>),
    Iff(Box<Expr>, Box<Expr>),
    Cmp(CmpOp, Box<Expr>, Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    App { name: String, args: Vec<Expr>, line: usize, col: usize },
    Quant(PathQuant, Box<Expr>),
    X(Box<Expr>),
    G(Box<Expr>),
    F(Box<Expr>),
    U(Box<Expr>, Box<Expr>),
}

/// Identifiers with a fixed meaning in formulas.
pub const KEYWORDS: &[&str] = &["true", "false", "X", "G", "F", "U", "A", "E", "Af", "Ef"];

impl Expr {
    pub fn ident(name: impl Into<String>, primes: u8) -> Expr {
        Expr::Ident { name: name.into(), primes, line: 0, col: 0 }
    }

    /// True when the expression contains a temporal operator or quantifier.
    pub fn is_temporal(&self) -> bool {
        match self {
            Expr::Quant(..) | Expr::X(_) | Expr::G(_) | Expr::F(_) | Expr::U(..) => true,
            Expr::Ident { .. } | Expr::Num(_) | Expr::Bool(_) => false,
            Expr::App { args, .. } => args.iter().any(Expr::is_temporal),
            Expr::Not(a) | Expr::Neg(a) => a.is_temporal(),
            Expr::And(v) | Expr::Or(v) => v.iter().any(Expr::is_temporal),
            Expr::Implies(a, b)
            | Expr::Iff(a, b)
            | Expr::Cmp(_, a, b)
            | Expr::Add(a, b)
            | Expr::Sub(a, b)
            | Expr::Mul(a, b)
            | Expr::Div(a, b) => a.is_temporal() || b.is_temporal(),
        }
    }

    /// True when a temporal operator occurs outside every quantifier.
    pub fn has_free_temporal(&self) -> bool {
        match self {
            Expr::Quant(..) => false,
            Expr::X(_) | Expr::G(_) | Expr::F(_) | Expr::U(..) => true,
            Expr::Ident { .. } | Expr::Num(_) | Expr::Bool(_) | Expr::App { .. } => false,
            Expr::Not(a) | Expr::Neg(a) => a.has_free_temporal(),
            Expr::And(v) | Expr::Or(v) => v.iter().any(Expr::has_free_temporal),
            Expr::Implies(a, b)
            | Expr::Iff(a, b)
            | Expr::Cmp(_, a, b)
            | Expr::Add(a, b)
            | Expr::Sub(a, b)
            | Expr::Mul(a, b)
            | Expr::Div(a, b) => a.has_free_temporal() || b.has_free_temporal(),
        }
    }

    fn level(&self) -> u8 {
        match self {
            Expr::Iff(..) => 1,
            Expr::Implies(..) => 2,
            Expr::Or(_) => 3,
            Expr::And(_) => 4,
            Expr::U(..) => 5,
            Expr::Not(_) | Expr::Quant(..) | Expr::X(_) | Expr::G(_) | Expr::F(_) => 6,
            Expr::Cmp(..) => 7,
            Expr::Add(..) | Expr::Sub(..) => 8,
            Expr::Mul(..) | Expr::Div(..) => 9,
            Expr::Neg(_) => 10,
            Expr::Num(q) if q.is_negative() => 10,
            _ => 11,
        }
    }

    /// Render with minimal parentheses.
    pub fn render(&self) -> String {
        let mut s = String::new();
        self.write(&mut s, 0);
        s
    }

    fn write(&self, out: &mut String, min: u8) {
        let paren = self.level() < min;
        if paren {
            out.push('(');
        }
        match self {
            Expr::Ident { name, primes, .. } => {
                out.push_str(name);
                for _ in 0..*primes {
                    out.push('\'');
                }
            }
            Expr::Num(q) => {
                let s = fmt_rational(q);
                if s.contains('/') {
                    out.push('(');
                    out.push_str(&s);
                    out.push(')');
                } else {
                    out.push_str(&s);
                }
            }
            Expr::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
            Expr::Not(a) => {
                out.push('!');
                a.write(out, 8);
            }
            Expr::Neg(a) => {
                out.push('-');
                a.write(out, 10);
            }
            Expr::And(v) => join(out, v, " & ", 5),
            Expr::Or(v) => join(out, v, " | ", 4),
            Expr::Implies(a, b) => bin(out, a, " -> ", b, 3, 2),
            Expr::Iff(a, b) => bin(out, a, " <-> ", b, 1, 2),
            Expr::Cmp(op, a, b) => bin(out, a, &format!(" {} ", op.symbol()), b, 8, 8),
            Expr::Add(a, b) => bin(out, a, " + ", b, 8, 9),
            Expr::Sub(a, b) => bin(out, a, " - ", b, 8, 9),
            Expr::Mul(a, b) => bin(out, a, " * ", b, 9, 10),
            Expr::Div(a, b) => bin(out, a, " / ", b, 9, 10),
            Expr::App { name, args, .. } => {
                out.push_str(name);
                out.push('(');
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        out.push_str(", ");
                    }
                    a.write(out, 0);
                }
                out.push(')');
            }
            Expr::Quant(q, a) => prefix(out, q.keyword(), a),
            Expr::X(a) => prefix(out, "X", a),
            Expr::G(a) => prefix(out, "G", a),
            Expr::F(a) => prefix(out, "F", a),
            Expr::U(a, b) => bin(out, a, " U ", b, 6, 5),
        }
        if paren {
            out.push(')');
        }
    }
}

fn join(out: &mut String, v: &[Expr], sep: &str, child: u8) {
    for (i, e) in v.iter().enumerate() {
        if i > 0 {
            out.push_str(sep);
        }
        e.write(out, child);
    }
}

fn bin(out: &mut String, a: &Expr, op: &str, b: &Expr, la: u8, lb: u8) {
    a.write(out, la);
    out.push_str(op);
    b.write(out, lb);
}

fn prefix(out: &mut String, kw: &str, a: &Expr) {
    out.push_str(kw);
    out.push(' ');
    a.write(out, 6);
}

/// Recursive-descent parser over a token slice.
pub struct Parser<'a> {
    toks: &'a [Token],
    pos: usize,
}

impl<'a> Parser<'a> {
    pub fn new(toks: &'a [Token]) -> Self {
        Parser { toks, pos: 0 }
    }

    pub fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    pub fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)].tok
    }

    pub fn here(&self) -> (usize, usize) {
        let t = &self.toks[self.pos];
        (t.line, t.col)
    }

    pub fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].tok.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    pub fn error<T>(&self, msg: impl Into<String>) -> Result<T> {
        let (line, col) = self.here();
        Err(Error::Parse { line, col, msg: msg.into() })
    }

    pub fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == t {
            self.bump();
            true
        } else {
            false
        }
    }

    pub fn expect(&mut self, t: &Tok) -> Result<()> {
        if self.eat(t) {
            Ok(())
        } else {
            self.error(format!("expected {}, found {}", describe(t), describe(self.peek())))
        }
    }

    pub fn at_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    pub fn eat_keyword(&mut self, kw: &str) -> bool {
        if self.at_keyword(kw) {
            self.bump();
            true
        } else {
            false
        }
    }

    pub fn expect_keyword(&mut self, kw: &str) -> Result<()> {
        if self.eat_keyword(kw) {
            Ok(())
        } else {
            self.error(format!("expected `{kw}`, found {}", describe(self.peek())))
        }
    }

    pub fn ident(&mut self) -> Result<String> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(s)
            }
            t => self.error(format!("expected identifier, found {}", describe(&t))),
        }
    }

    pub fn primes(&mut self) -> u8 {
        let mut n = 0;
        while self.eat(&Tok::Prime) {
            n += 1;
        }
        n
    }

    pub fn at_eof(&self) -> bool {
        *self.peek() == Tok::Eof
    }

    /// Parse a full expression.
    pub fn expr(&mut self) -> Result<Expr> {
        let mut a = self.implies()?;
        while self.eat(&Tok::DArrow) {
            let b = self.implies()?;
            a = Expr::Iff(Box::new(a), Box::new(b));
        }
        Ok(a)
    }

    fn implies(&mut self) -> Result<Expr> {
        let a = self.or()?;
        if self.eat(&Tok::Arrow) {
            let b = self.implies()?;
            return Ok(Expr::Implies(Box::new(a), Box::new(b)));
        }
        Ok(a)
    }

    fn or(&mut self) -> Result<Expr> {
        let mut v = vec![self.and()?];
        while self.eat(&Tok::Bar) {
            v.push(self.and()?);
        }
        Ok(if v.len() == 1 { v.pop().unwrap() } else { Expr::Or(v) })
    }

    fn and(&mut self) -> Result<Expr> {
        let mut v = vec![self.until()?];
        while self.eat(&Tok::Amp) {
            v.push(self.until()?);
        }
        Ok(if v.len() == 1 { v.pop().unwrap() } else { Expr::And(v) })
    }

    fn until(&mut self) -> Result<Expr> {
        let a = self.unary()?;
        if self.eat_keyword("U") {
            let b = self.until()?;
            return Ok(Expr::U(Box::new(a), Box::new(b)));
        }
        Ok(a)
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat(&Tok::Bang) {
            return Ok(Expr::Not(Box::new(self.unary()?)));
        }
        if let Tok::Ident(s) = self.peek() {
            let q = match s.as_str() {
                "A" => Some(PathQuant::A),
                "E" => Some(PathQuant::E),
                "Af" => Some(PathQuant::Af),
                "Ef" => Some(PathQuant::Ef),
                _ => None,
            };
            if let Some(q) = q {
                self.bump();
                return Ok(Expr::Quant(q, Box::new(self.unary()?)));
            }
            let op = s.clone();
            if op == "X" || op == "G" || op == "F" {
                self.bump();
                let a = Box::new(self.unary()?);
                return Ok(match op.as_str() {
                    "X" => Expr::X(a),
                    "G" => Expr::G(a),
                    _ => Expr::F(a),
                });
            }
        }
        self.cmp()
    }

    fn cmp(&mut self) -> Result<Expr> {
        let a = self.arith()?;
        let op = match self.peek() {
            Tok::Eq => CmpOp::Eq,
            Tok::Ne => CmpOp::Ne,
            Tok::Lt => CmpOp::Lt,
            Tok::Le => CmpOp::Le,
            Tok::Gt => CmpOp::Gt,
            Tok::Ge => CmpOp::Ge,
            _ => return Ok(a),
        };
        self.bump();
        let b = self.arith()?;
        if matches!(self.peek(), Tok::Eq | Tok::Ne | Tok::Lt | Tok::Le | Tok::Gt | Tok::Ge) {
            return self.error("comparisons do not chain; use `&`");
        }
        Ok(Expr::Cmp(op, Box::new(a), Box::new(b)))
    }

    fn arith(&mut self) -> Result<Expr> {
        let mut a = self.mul()?;
        loop {
            if self.eat(&Tok::Plus) {
                a = Expr::Add(Box::new(a), Box::new(self.mul()?));
            } else if self.eat(&Tok::Minus) {
                a = Expr::Sub(Box::new(a), Box::new(self.mul()?));
            } else {
                return Ok(a);
            }
        }
    }

    fn mul(&mut self) -> Result<Expr> {
        let mut a = self.pre()?;
        loop {
            if self.eat(&Tok::Star) {
                a = Expr::Mul(Box::new(a), Box::new(self.pre()?));
            } else if self.eat(&Tok::Slash) {
                a = Expr::Div(Box::new(a), Box::new(self.pre()?));
            } else {
                return Ok(a);
            }
        }
    }

    fn pre(&mut self) -> Result<Expr> {
        if self.eat(&Tok::Minus) {
            return Ok(Expr::Neg(Box::new(self.pre()?)));
        }
        if self.eat(&Tok::Bang) {
            return Ok(Expr::Not(Box::new(self.pre()?)));
        }
        self.primary()
    }

    fn primary(&mut self) -> Result<Expr> {
        let (line, col) = self.here();
        match self.peek().clone() {
            Tok::Num(q) => {
                self.bump();
                Ok(Expr::Num(q))
            }
            Tok::LParen => {
                self.bump();
                let e = self.expr()?;
                self.expect(&Tok::RParen)?;
                Ok(e)
            }
            Tok::Ident(s) => {
                if s == "true" || s == "false" {
                    self.bump();
                    return Ok(Expr::Bool(s == "true"));
                }
                if KEYWORDS.contains(&s.as_str()) {
                    return self.error(format!("unexpected keyword `{s}`"));
                }
                self.bump();
                if *self.peek() == Tok::LParen {
                    self.bump();
                    let mut args = Vec::new();
                    if !self.eat(&Tok::RParen) {
                        loop {
                            args.push(self.expr()?);
                            if self.eat(&Tok::RParen) {
                                break;
                            }
                            self.expect(&Tok::Comma)?;
                        }
                    }
                    return Ok(Expr::App { name: s, args, line, col });
                }
                let primes = self.primes();
                Ok(Expr::Ident { name: s, primes, line, col })
            }
            t => self.error(format!("expected an expression, found {}", describe(&t))),
        }
    }
}

/// Parse a complete expression from text.
pub fn parse_expr(src: &str) -> Result<Expr> {
    let toks = super::lexer::tokenize(src, false)?;
    let mut p = Parser::new(&toks);
    let e = p.expr()?;
    if !p.at_eof() {
        return p.error(format!("unexpected {} after expression", describe(p.peek())));
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rt(s: &str) -> String {
        parse_expr(s).unwrap().render()
    }

    #[test]
    fn precedence() {
        assert_eq!(rt("a | b & c"), "a | b & c");
        assert_eq!(rt("(a | b) & c"), "(a | b) & c");
        assert_eq!(rt("a -> b -> c"), "a -> b -> c");
        assert_eq!(rt("(a -> b) -> c"), "(a -> b) -> c");
        assert_eq!(rt("a U b U c"), "a U b U c");
        assert_eq!(rt("(a U b) U c"), "(a U b) U c");
        assert_eq!(rt("x - (y - z)"), "x - (y - z)");
        assert_eq!(rt("x - y - z"), "x - y - z");
        assert_eq!(rt("A(G(exp<1000) | F G(pro>50))"), "A (G exp < 1000 | F G pro > 50)");
        assert_eq!(rt("!x > 0"), "!(x > 0)");
    }

    #[test]
    fn prefix_bang_inside_comparison() {
        let e = parse_expr("b' = !b").unwrap();
        assert!(matches!(e, Expr::Cmp(CmpOp::Eq, _, ref r) if matches!(**r, Expr::Not(_))));
    }

    #[test]
    fn chained_comparison_rejected() {
        assert!(parse_expr("x = y = 0").is_err());
    }
}
