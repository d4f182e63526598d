//! Tokens and the expression tree.
//!
//! ```text
//! expression := term (('+' | '-') term)*
//! term       := unary (('*' | '/') unary)*
//! unary      := '-' unary | factor
//! factor     := atom ('^' integer)*
//! atom       := integer | letter | '(' expression ')'
//! ```

use num_bigint::BigUint;

use crate::error::{Error, Result};

pub const MAX_DEPTH: usize = 200;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Int(BigUint),
    Var(char),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

pub fn lex(text: &str) -> Result<Vec<(usize, Tok)>> {
    let mut out = Vec::new();
    let mut it = text.char_indices().peekable();
    while let Some((pos, c)) = it.next() {
        let tok = match c {
            ' ' | '\t' | '\r' | '\n' => continue,
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            '0'..='9' => {
                let mut end = pos + 1;
                while let Some(&(i, d)) = it.peek() {
                    if !d.is_ascii_digit() {
                        break;
                    }
                    end = i + 1;
                    it.next();
                }
                let n = text[pos..end].parse::<BigUint>().expect("ascii digits");
                Tok::Int(n)
            }
            c if c.is_alphabetic() => Tok::Var(c),
            c => return Err(Error::syntax(pos, format!("unexpected character '{c}'"))),
        };
        out.push((pos, tok));
    }
    Ok(out)
}

/// Chains are stored flat so tree depth only grows with parentheses and
/// unary minus.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Int(BigUint),
    Var(char, usize),
    Neg(Box<Expr>),
    /// `first (+|-) rest...`; `true` marks subtraction.
    Sum(Box<Expr>, Vec<(bool, Expr)>),
    /// `first (*|/) rest...`; `true` marks division.
    Product(Box<Expr>, Vec<(bool, Expr, usize)>),
    /// `base ^ e1 ^ e2 ...`, applied left to right.
    Pow(Box<Expr>, Vec<(BigUint, usize)>),
}

impl Expr {
    /// First position of each letter, in order of appearance.
    pub fn letters(&self, out: &mut Vec<(char, usize)>) {
        match self {
            Expr::Int(_) => {}
            Expr::Var(c, p) => {
                if !out.iter().any(|(d, _)| d == c) {
                    out.push((*c, *p));
                }
            }
            Expr::Neg(a) | Expr::Pow(a, _) => a.letters(out),
            Expr::Sum(a, rest) => {
                a.letters(out);
                for (_, b) in rest {
                    b.letters(out);
                }
            }
            Expr::Product(a, rest) => {
                a.letters(out);
                for (_, b, _) in rest {
                    b.letters(out);
                }
            }
        }
    }
}

struct Parser<'a> {
    toks: &'a [(usize, Tok)],
    i: usize,
    end: usize,
    depth: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.i).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.i).map_or(self.end, |(p, _)| *p)
    }

    fn enter(&mut self) -> Result<()> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return Err(Error::syntax(self.pos(), "expression nested too deeply"));
        }
        Ok(())
    }

    fn expression(&mut self) -> Result<Expr> {
        self.enter()?;
        let first = self.term()?;
        let mut rest = Vec::new();
        loop {
            let neg = match self.peek() {
                Some(Tok::Plus) => false,
                Some(Tok::Minus) => true,
                _ => break,
            };
            self.i += 1;
            rest.push((neg, self.term()?));
        }
        self.depth -= 1;
        Ok(if rest.is_empty() {
            first
        } else {
            Expr::Sum(Box::new(first), rest)
        })
    }

    fn term(&mut self) -> Result<Expr> {
        let first = self.unary()?;
        let mut rest = Vec::new();
        loop {
            let pos = self.pos();
            let div = match self.peek() {
                Some(Tok::Star) => false,
                Some(Tok::Slash) => true,
                _ => break,
            };
            self.i += 1;
            rest.push((div, self.unary()?, pos));
        }
        Ok(if rest.is_empty() {
            first
        } else {
            Expr::Product(Box::new(first), rest)
        })
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.peek() == Some(&Tok::Minus) {
            self.i += 1;
            self.enter()?;
            let inner = self.unary()?;
            self.depth -= 1;
            return Ok(Expr::Neg(Box::new(inner)));
        }
        self.factor()
    }

    fn factor(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        let mut exps = Vec::new();
        while self.peek() == Some(&Tok::Caret) {
            let pos = self.pos();
            self.i += 1;
            match self.toks.get(self.i) {
                Some((_, Tok::Int(n))) => {
                    exps.push((n.clone(), pos));
                    self.i += 1;
                }
                _ => return Err(Error::syntax(self.pos(), "expected a non-negative integer exponent")),
            }
        }
        Ok(if exps.is_empty() {
            base
        } else {
            Expr::Pow(Box::new(base), exps)
        })
    }

    fn atom(&mut self) -> Result<Expr> {
        let pos = self.pos();
        match self.toks.get(self.i).map(|(_, t)| t.clone()) {
            Some(Tok::Int(n)) => {
                self.i += 1;
                Ok(Expr::Int(n))
            }
            Some(Tok::Var(c)) => {
                self.i += 1;
                Ok(Expr::Var(c, pos))
            }
            Some(Tok::LParen) => {
                self.i += 1;
                let inner = self.expression()?;
                if self.peek() != Some(&Tok::RParen) {
                    return Err(Error::syntax(self.pos(), "expected ')'"));
                }
                self.i += 1;
                Ok(inner)
            }
            Some(t) => Err(Error::syntax(pos, format!("unexpected {}", describe(&t)))),
            None => Err(Error::syntax(pos, "unexpected end of input")),
        }
    }
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Int(n) => format!("number {n}"),
        Tok::Var(c) => format!("'{c}'"),
        Tok::Plus => "'+'".into(),
        Tok::Minus => "'-'".into(),
        Tok::Star => "'*'".into(),
        Tok::Slash => "'/'".into(),
        Tok::Caret => "'^'".into(),
        Tok::LParen => "'('".into(),
        Tok::RParen => "')'".into(),
    }
}

pub fn parse(text: &str) -> Result<Expr> {
    let toks = lex(text)?;
    let mut p = Parser {
        toks: &toks,
        i: 0,
        end: text.len(),
        depth: 0,
    };
    let e = p.expression()?;
    if let Some((pos, t)) = toks.get(p.i) {
        return Err(Error::syntax(*pos, format!("unexpected {}", describe(t))));
    }
    Ok(e)
}
