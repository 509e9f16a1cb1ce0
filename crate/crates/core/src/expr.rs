//! Small rational expression and guard language used by the catalog data.
//!
//! Expressions: integers, identifiers, `+ - * / ^` and parentheses; `^` takes an integer exponent.
//! Guards: comparisons `= != < <= > >=` joined by `&`; an empty guard always holds.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{rational_to_i64, Rational};

pub type Env = BTreeMap<String, Rational>;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(i64),
    Ident(String),
    Op(char),
    Cmp(&'static str),
    LParen,
    RParen,
    And,
}

fn lex(s: &str) -> Result<Vec<Tok>> {
    let c: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let err = |m: &str| Error::Parse(format!("{m} in expression '{s}'"));
    while i < c.len() {
        let ch = c[i];
        if ch.is_whitespace() {
            i += 1;
        } else if ch.is_ascii_digit() {
            let st = i;
            while i < c.len() && c[i].is_ascii_digit() {
                i += 1;
            }
            let t: String = c[st..i].iter().collect();
            out.push(Tok::Num(t.parse().map_err(|_| err("bad number"))?));
        } else if ch.is_ascii_alphabetic() {
            let st = i;
            while i < c.len() && (c[i].is_ascii_alphanumeric() || c[i] == '_') {
                i += 1;
            }
            out.push(Tok::Ident(c[st..i].iter().collect()));
        } else {
            let two: String = c[i..(i + 2).min(c.len())].iter().collect();
            let tok = match (ch, two.as_str()) {
                (_, "!=") => Some((Tok::Cmp("!="), 2)),
                (_, "<=") => Some((Tok::Cmp("<="), 2)),
                (_, ">=") => Some((Tok::Cmp(">="), 2)),
                ('=', _) => Some((Tok::Cmp("="), 1)),
                ('<', _) => Some((Tok::Cmp("<"), 1)),
                ('>', _) => Some((Tok::Cmp(">"), 1)),
                ('&', _) => Some((Tok::And, 1)),
                ('(', _) => Some((Tok::LParen, 1)),
                (')', _) => Some((Tok::RParen, 1)),
                ('+' | '-' | '*' | '/' | '^', _) => Some((Tok::Op(ch), 1)),
                _ => None,
            };
            let (t, w) = tok.ok_or_else(|| err(&format!("unexpected '{ch}'")))?;
            out.push(t);
            i += w;
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Tok>,
    pos: usize,
    env: &'a Env,
    src: &'a str,
}

impl Parser<'_> {
    fn err(&self, m: &str) -> Error {
        Error::Parse(format!("{m} in expression '{}'", self.src))
    }
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }
    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expr(&mut self) -> Result<Rational> {
        let mut v = self.term()?;
        while let Some(Tok::Op(c @ ('+' | '-'))) = self.peek().cloned() {
            self.pos += 1;
            let r = self.term()?;
            v = if c == '+' { v + r } else { v - r };
        }
        Ok(v)
    }

    fn term(&mut self) -> Result<Rational> {
        let mut v = self.unary()?;
        while let Some(Tok::Op(c @ ('*' | '/'))) = self.peek().cloned() {
            self.pos += 1;
            let r = self.unary()?;
            if c == '*' {
                v *= r;
            } else {
                if r.is_zero() {
                    return Err(Error::InvalidParameter(format!("division by zero in '{}'", self.src)));
                }
                v /= r;
            }
        }
        Ok(v)
    }

    fn unary(&mut self) -> Result<Rational> {
        if let Some(Tok::Op('-')) = self.peek() {
            self.pos += 1;
            return Ok(-self.unary()?);
        }
        self.power()
    }

    fn power(&mut self) -> Result<Rational> {
        let base = self.atom()?;
        if let Some(Tok::Op('^')) = self.peek() {
            self.pos += 1;
            let e = self.unary()?;
            let e = rational_to_i64(&e).ok_or_else(|| self.err("non-integer exponent"))?;
            if e < 0 && base.is_zero() {
                return Err(Error::InvalidParameter(format!("zero to a negative power in '{}'", self.src)));
            }
            let mut acc = Rational::one();
            for _ in 0..e.unsigned_abs() {
                acc *= &base;
            }
            return Ok(if e < 0 { acc.recip() } else { acc });
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Rational> {
        match self.next() {
            Some(Tok::Num(n)) => Ok(Rational::from_integer(n.into())),
            Some(Tok::Ident(name)) => {
                self.env.get(&name).cloned().ok_or_else(|| self.err(&format!("unbound symbol '{name}'")))
            }
            Some(Tok::LParen) => {
                let v = self.expr()?;
                match self.next() {
                    Some(Tok::RParen) => Ok(v),
                    _ => Err(self.err("missing ')'")),
                }
            }
            _ => Err(self.err("expected a value")),
        }
    }

    fn cond(&mut self) -> Result<bool> {
        let a = self.expr()?;
        let op = match self.next() {
            Some(Tok::Cmp(op)) => op,
            _ => return Err(self.err("expected a comparison")),
        };
        let b = self.expr()?;
        Ok(match op {
            "=" => a == b,
            "!=" => a != b,
            "<" => a < b,
            "<=" => a <= b,
            ">" => a > b,
            _ => a >= b,
        })
    }
}

pub fn eval(src: &str, env: &Env) -> Result<Rational> {
    let mut p = Parser { toks: lex(src)?, pos: 0, env, src };
    let v = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(p.err("trailing input"));
    }
    Ok(v)
}

pub fn eval_guard(src: &str, env: &Env) -> Result<bool> {
    let mut p = Parser { toks: lex(src)?, pos: 0, env, src };
    if p.toks.is_empty() {
        return Ok(true);
    }
    let mut all = true;
    loop {
        all &= p.cond()?;
        match p.next() {
            None => break,
            Some(Tok::And) => continue,
            Some(_) => return Err(p.err("expected '&'")),
        }
    }
    Ok(all)
}

/// Identifiers occurring in an expression or guard.
pub fn symbols(src: &str) -> Result<Vec<String>> {
    let mut out: Vec<String> = lex(src)?
        .into_iter()
        .filter_map(|t| if let Tok::Ident(s) = t { Some(s) } else { None })
        .collect();
    out.sort();
    out.dedup();
    Ok(out)
}
