//! Polynomial expressions: integers, variables, `+ - * ^`, parentheses, and the
//! literal `p` for the prime. `T^3 - p*T` is a typical input.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use super::{SeriesSpace, TruncatedSeries};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
    End,
}

fn err(column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        column,
        message: message.into(),
    }
}

/// Tokens with their 1-based starting column.
fn lex(src: &str) -> Result<Vec<(Tok, usize)>> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            out.push((Tok::Int(s.parse().expect("digits")), col));
            continue;
        }
        if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((Tok::Ident(chars[start..i].iter().collect()), col));
            continue;
        }
        let tok = match c {
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '^' => Tok::Caret,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            other => return Err(err(col, format!("unexpected character '{other}'"))),
        };
        out.push((tok, col));
        i += 1;
    }
    out.push((Tok::End, chars.len() + 1));
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    space: &'a Arc<SeriesSpace>,
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn col(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    // expr := term (('+' | '-') term)*
    fn expr(&mut self) -> Result<TruncatedSeries> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Tok::Plus => {
                    self.bump();
                    acc = &acc + &self.term()?;
                }
                Tok::Minus => {
                    self.bump();
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    // term := unary ('*' unary)*
    fn term(&mut self) -> Result<TruncatedSeries> {
        let mut acc = self.unary()?;
        while *self.peek() == Tok::Star {
            self.bump();
            acc = &acc * &self.unary()?;
        }
        Ok(acc)
    }

    // unary := '-' unary | power
    fn unary(&mut self) -> Result<TruncatedSeries> {
        if *self.peek() == Tok::Minus {
            self.bump();
            return Ok(self.unary()?.neg());
        }
        self.power()
    }

    // power := atom ('^' (int | p))?
    fn power(&mut self) -> Result<TruncatedSeries> {
        let base = self.atom()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let col = self.col();
        match self.bump() {
            Tok::Int(n) => {
                let k = n
                    .to_u32()
                    .ok_or_else(|| err(col, "exponent too large"))?;
                Ok(base.pow(k))
            }
            Tok::Ident(name) if name == "p" && self.space.var_index("p").is_none() => {
                Ok(base.pow(self.space.p() as u32))
            }
            _ => Err(err(col, "expected a non-negative integer exponent or p")),
        }
    }

    fn atom(&mut self) -> Result<TruncatedSeries> {
        let col = self.col();
        match self.bump() {
            Tok::Int(n) => {
                let q = BigInt::from(self.space.modulus());
                let r = ((n % &q) + &q) % &q;
                Ok(TruncatedSeries::constant(self.space, r.to_i128().expect("reduced")))
            }
            Tok::Ident(name) => {
                if let Some(i) = self.space.var_index(&name) {
                    Ok(TruncatedSeries::var(self.space, i))
                } else if name == "p" {
                    Ok(TruncatedSeries::constant(self.space, self.space.p() as i128))
                } else {
                    Err(err(col, format!("unknown variable '{name}'")))
                }
            }
            Tok::LParen => {
                let inner = self.expr()?;
                let col = self.col();
                match self.bump() {
                    Tok::RParen => Ok(inner),
                    _ => Err(err(col, "expected ')'")),
                }
            }
            Tok::End => Err(err(col, "unexpected end of expression")),
            other => Err(err(col, format!("unexpected {other:?}"))),
        }
    }
}

/// Parse a polynomial expression in the variables of `space`. A declared
/// variable named `p` shadows the prime.
pub fn parse_series(src: &str, space: &Arc<SeriesSpace>) -> Result<TruncatedSeries> {
    let mut parser = Parser {
        toks: lex(src)?,
        pos: 0,
        space,
    };
    let out = parser.expr()?;
    if *parser.peek() != Tok::End {
        return Err(err(parser.col(), "trailing input"));
    }
    Ok(out)
}
