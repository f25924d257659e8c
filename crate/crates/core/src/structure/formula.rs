//! Boolean formulas over component literals.
//!
//! Grammar, loosest binding first: `a | b`, `a ^ b`, `a & b`, `!a`, then atoms:
//! a 1-based component number, `true`, `false`, or a parenthesised formula.
//! Only `&`, `|` and literals give monotone structures; the rest exist so that
//! non-monotone inputs can be written down and rejected by validation.

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Var(usize),
    Const(bool),
    Not(Box<Expr>),
    And(Vec<Expr>),
    Or(Vec<Expr>),
    Xor(Box<Expr>, Box<Expr>),
}

impl Expr {
    /// Bit `i` of `working` is component `i + 1`.
    pub fn eval(&self, working: u64) -> bool {
        match self {
            Expr::Var(i) => working >> i & 1 == 1,
            Expr::Const(b) => *b,
            Expr::Not(e) => !e.eval(working),
            Expr::And(es) => es.iter().all(|e| e.eval(working)),
            Expr::Or(es) => es.iter().any(|e| e.eval(working)),
            Expr::Xor(a, b) => a.eval(working) ^ b.eval(working),
        }
    }

    fn max_var(&self) -> Option<usize> {
        match self {
            Expr::Var(i) => Some(*i),
            Expr::Const(_) => None,
            Expr::Not(e) => e.max_var(),
            Expr::And(es) | Expr::Or(es) => es.iter().filter_map(Expr::max_var).max(),
            Expr::Xor(a, b) => a.max_var().max(b.max_var()),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(usize),
    Word(String),
    Sym(char),
}

fn lex(src: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let mut chars = src.chars().peekable();
    while let Some(&c) = chars.peek() {
        if c.is_whitespace() {
            chars.next();
        } else if c.is_ascii_digit() {
            let mut v = 0usize;
            while let Some(d) = chars.peek().and_then(|c| c.to_digit(10)) {
                v = v
                    .checked_mul(10)
                    .and_then(|v| v.checked_add(d as usize))
                    .ok_or_else(|| Error::validation("component index too large"))?;
                chars.next();
            }
            out.push(Tok::Num(v));
        } else if c.is_ascii_alphabetic() {
            let mut w = String::new();
            while let Some(&c) = chars.peek().filter(|c| c.is_ascii_alphanumeric()) {
                w.push(c);
                chars.next();
            }
            out.push(Tok::Word(w));
        } else if "&|^!()".contains(c) {
            out.push(Tok::Sym(c));
            chars.next();
        } else {
            return Err(Error::validation(format!("unexpected character {c:?} in formula")));
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Tok>,
    pos: usize,
}

impl Parser {
    fn peek_sym(&self, c: char) -> bool {
        self.toks.get(self.pos) == Some(&Tok::Sym(c))
    }

    fn or(&mut self) -> Result<Expr> {
        let mut terms = vec![self.xor()?];
        while self.peek_sym('|') {
            self.pos += 1;
            terms.push(self.xor()?);
        }
        Ok(if terms.len() == 1 { terms.pop().unwrap() } else { Expr::Or(terms) })
    }

    fn xor(&mut self) -> Result<Expr> {
        let mut lhs = self.and()?;
        while self.peek_sym('^') {
            self.pos += 1;
            lhs = Expr::Xor(Box::new(lhs), Box::new(self.and()?));
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Expr> {
        let mut terms = vec![self.unary()?];
        while self.peek_sym('&') {
            self.pos += 1;
            terms.push(self.unary()?);
        }
        Ok(if terms.len() == 1 { terms.pop().unwrap() } else { Expr::And(terms) })
    }

    fn unary(&mut self) -> Result<Expr> {
        let tok = self.toks.get(self.pos).cloned();
        self.pos += 1;
        match tok {
            Some(Tok::Sym('!')) => Ok(Expr::Not(Box::new(self.unary()?))),
            Some(Tok::Sym('(')) => {
                let e = self.or()?;
                if !self.peek_sym(')') {
                    return Err(Error::validation("unbalanced parenthesis in formula"));
                }
                self.pos += 1;
                Ok(e)
            }
            Some(Tok::Num(0)) => Err(Error::validation("component literals are 1-based")),
            Some(Tok::Num(v)) => Ok(Expr::Var(v - 1)),
            Some(Tok::Word(w)) if w == "true" => Ok(Expr::Const(true)),
            Some(Tok::Word(w)) if w == "false" => Ok(Expr::Const(false)),
            Some(t) => Err(Error::validation(format!("unexpected token {t:?} in formula"))),
            None => Err(Error::validation("formula ends unexpectedly")),
        }
    }
}

/// Parse `expr` for a system of `n` components.
pub fn parse(expr: &str, n: usize) -> Result<Expr> {
    let mut p = Parser { toks: lex(expr)?, pos: 0 };
    let e = p.or()?;
    if p.pos != p.toks.len() {
        return Err(Error::validation(format!("trailing input in formula {expr:?}")));
    }
    if let Some(m) = e.max_var() {
        if m >= n {
            return Err(Error::validation(format!("formula mentions component {} but n = {n}", m + 1)));
        }
    }
    Ok(e)
}
