//! Tokenizer shared by every text format.

use num_rational::Rational64;

use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub enum Tok {
    Ident(String),
    Num(Rational64),
    Prime,
    LParen,
    RParen,
    LBrace,
    RBrace,
    LBracket,
    RBracket,
    Comma,
    Semi,
    Colon,
    Dot,
    DotDot,
    Slash,
    Star,
    Plus,
    Minus,
    Bang,
    Amp,
    Bar,
    Arrow,
    DArrow,
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
    Hash,
    Eof,
}

/// A token with its 1-based line and column.
#[derive(Clone, Debug, PartialEq)]
pub struct Token {
    pub tok: Tok,
    pub line: usize,
    pub col: usize,
}

pub fn describe(t: &Tok) -> String {
    match t {
        Tok::Ident(s) => format!("`{s}`"),
        Tok::Num(q) => format!("number {q}"),
        Tok::Eof => "end of input".into(),
        other => format!("{other:?}"),
    }
}

/// Split `src` into tokens. `#` starts a comment unless `hash_is_token`.
pub fn tokenize(src: &str, hash_is_token: bool) -> Result<Vec<Token>> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    let err = |line, col, msg: String| Error::Parse { line, col, msg };
    while i < chars.len() {
        let c = chars[i];
        let (tl, tc) = (line, col);
        let adv = |n: usize, i: &mut usize, col: &mut usize| {
            *i += n;
            *col += n;
        };
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            adv(1, &mut i, &mut col);
            continue;
        }
        if (c == '#' && !hash_is_token) || (c == '/' && chars.get(i + 1) == Some(&'/')) {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
            }
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            col += i - start;
            out.push(Token { tok: Tok::Ident(chars[start..i].iter().collect()), line: tl, col: tc });
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let int: String = chars[start..i].iter().collect();
            let mut q = parse_int(&int).ok_or_else(|| err(tl, tc, format!("number `{int}` out of range")))?;
            if i + 1 < chars.len() && chars[i] == '.' && chars[i + 1].is_ascii_digit() {
                i += 1;
                let fs = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let frac: String = chars[fs..i].iter().collect();
                let scale = 10i64
                    .checked_pow(frac.len() as u32)
                    .ok_or_else(|| err(tl, tc, "too many decimal digits".into()))?;
                let f = parse_int(&frac).ok_or_else(|| err(tl, tc, "bad decimal".into()))?;
                q += Rational64::new(*f.numer(), scale);
            }
            col += i - start;
            out.push(Token { tok: Tok::Num(q), line: tl, col: tc });
            continue;
        }
        let two: String = chars[i..(i + 2).min(chars.len())].iter().collect();
        let three: String = chars[i..(i + 3).min(chars.len())].iter().collect();
        let (tok, n) = if three == "<->" {
            (Tok::DArrow, 3)
        } else {
            match two.as_str() {
                "->" => (Tok::Arrow, 2),
                "!=" => (Tok::Ne, 2),
                "<=" => (Tok::Le, 2),
                ">=" => (Tok::Ge, 2),
                ".." => (Tok::DotDot, 2),
                "&&" => (Tok::Amp, 2),
                "||" => (Tok::Bar, 2),
                _ => match c {
                    '\'' => (Tok::Prime, 1),
                    '(' => (Tok::LParen, 1),
                    ')' => (Tok::RParen, 1),
                    '{' => (Tok::LBrace, 1),
                    '}' => (Tok::RBrace, 1),
                    '[' => (Tok::LBracket, 1),
                    ']' => (Tok::RBracket, 1),
                    ',' => (Tok::Comma, 1),
                    ';' => (Tok::Semi, 1),
                    ':' => (Tok::Colon, 1),
                    '.' => (Tok::Dot, 1),
                    '/' => (Tok::Slash, 1),
                    '*' => (Tok::Star, 1),
                    '+' => (Tok::Plus, 1),
                    '-' => (Tok::Minus, 1),
                    '!' | '¬' => (Tok::Bang, 1),
                    '&' | '∧' => (Tok::Amp, 1),
                    '|' | '∨' => (Tok::Bar, 1),
                    '→' => (Tok::Arrow, 1),
                    '↔' => (Tok::DArrow, 1),
                    '=' => (Tok::Eq, 1),
                    '≠' => (Tok::Ne, 1),
                    '<' => (Tok::Lt, 1),
                    '≤' => (Tok::Le, 1),
                    '>' => (Tok::Gt, 1),
                    '≥' => (Tok::Ge, 1),
                    '#' => (Tok::Hash, 1),
                    '⊤' => (Tok::Ident("true".into()), 1),
                    '⊥' => (Tok::Ident("false".into()), 1),
                    other => return Err(err(tl, tc, format!("unexpected character `{other}`"))),
                },
            }
        };
        i += n;
        col += n;
        out.push(Token { tok, line: tl, col: tc });
    }
    out.push(Token { tok: Tok::Eof, line, col });
    Ok(out)
}

fn parse_int(s: &str) -> Option<Rational64> {
    s.parse::<i64>().ok().map(Rational64::from_integer)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tokens_and_positions() {
        let t = tokenize("x' <= 0.06 # note\n  b <-> !c", false).unwrap();
        let kinds: Vec<_> = t.iter().map(|t| t.tok.clone()).collect();
        assert_eq!(
            kinds,
            vec![
                Tok::Ident("x".into()),
                Tok::Prime,
                Tok::Le,
                Tok::Num(Rational64::new(3, 50)),
                Tok::Ident("b".into()),
                Tok::DArrow,
                Tok::Bang,
                Tok::Ident("c".into()),
                Tok::Eof
            ]
        );
        assert_eq!((t[4].line, t[4].col), (2, 3));
    }

    #[test]
    fn bad_character() {
        assert!(matches!(tokenize("x $ y", false), Err(Error::Parse { col: 3, .. })));
    }
}
