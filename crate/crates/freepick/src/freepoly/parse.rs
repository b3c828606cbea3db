//! Recursive-descent parser for the polynomial grammar.
//!
//! Variables are `x1`..`x<d>`. Operators `+ - * ^`, with `^` taking a
//! nonnegative decimal integer exponent; parentheses group. Complex literals
//! come as `a`, `bi`, `a+bi`, `a-bi` with decimal reals. Juxtaposition is not
//! multiplication: an explicit `*` is required, and `*` is non-commutative
//! and left-associative. Unary minus is allowed.

use std::fmt;

use super::{FreePoly, Word};
use crate::numerics::cx;

#[derive(Debug, Clone)]
pub struct ParseError {
    pub position: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "syntax error at position {}: {}",
            self.position, self.message
        )
    }
}

impl std::error::Error for ParseError {}

fn err<T>(position: usize, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError {
        position,
        message: message.into(),
    })
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64, bool), // value, was a plain integer literal
    Imag(f64),
    Var(usize), // zero-based index
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
    dims: usize,
}

impl<'a> Lexer<'a> {
    fn tokens(mut self) -> Result<Vec<(Tok, usize)>, ParseError> {
        let mut out = Vec::new();
        while self.pos < self.src.len() {
            let start = self.pos;
            let c = self.src[self.pos];
            match c {
                b' ' | b'\t' | b'\n' | b'\r' => {
                    self.pos += 1;
                }
                b'+' => {
                    self.pos += 1;
                    out.push((Tok::Plus, start));
                }
                b'-' => {
                    self.pos += 1;
                    out.push((Tok::Minus, start));
                }
                b'*' => {
                    self.pos += 1;
                    out.push((Tok::Star, start));
                }
                b'^' => {
                    self.pos += 1;
                    out.push((Tok::Caret, start));
                }
                b'(' => {
                    self.pos += 1;
                    out.push((Tok::LParen, start));
                }
                b')' => {
                    self.pos += 1;
                    out.push((Tok::RParen, start));
                }
                b'x' => {
                    self.pos += 1;
                    let dstart = self.pos;
                    while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                        self.pos += 1;
                    }
                    if self.pos == dstart {
                        return err(start, "expected variable index after 'x'");
                    }
                    let text = std::str::from_utf8(&self.src[dstart..self.pos]).unwrap();
                    let idx: usize = match text.parse() {
                        Ok(v) => v,
                        Err(_) => return err(start, "variable index out of range"),
                    };
                    if idx < 1 || idx > self.dims {
                        return err(
                            start,
                            format!("variable x{} out of range 1..{}", idx, self.dims),
                        );
                    }
                    out.push((Tok::Var(idx - 1), start));
                }
                b'i' => {
                    self.pos += 1;
                    out.push((Tok::Imag(1.0), start));
                }
                b'0'..=b'9' => {
                    let (value, integral) = self.lex_number(start)?;
                    if self.pos < self.src.len() && self.src[self.pos] == b'i' {
                        self.pos += 1;
                        out.push((Tok::Imag(value), start));
                    } else {
                        out.push((Tok::Num(value, integral), start));
                    }
                }
                _ => return err(start, format!("unexpected character '{}'", c as char)),
            }
        }
        Ok(out)
    }

    fn lex_number(&mut self, start: usize) -> Result<(f64, bool), ParseError> {
        let mut integral = true;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos < self.src.len() && self.src[self.pos] == b'.' {
            integral = false;
            self.pos += 1;
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
        }
        if self.pos < self.src.len() && (self.src[self.pos] == b'e' || self.src[self.pos] == b'E') {
            integral = false;
            let save = self.pos;
            self.pos += 1;
            if self.pos < self.src.len()
                && (self.src[self.pos] == b'+' || self.src[self.pos] == b'-')
            {
                self.pos += 1;
            }
            if self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
            } else {
                // not an exponent after all (e.g. "2e" would be malformed anyway)
                self.pos = save;
                integral = true;
            }
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        match text.parse::<f64>() {
            Ok(v) => Ok((v, integral)),
            Err(_) => err(start, format!("malformed number '{}'", text)),
        }
    }
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    idx: usize,
    dims: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&(Tok, usize)> {
        self.toks.get(self.idx)
    }

    fn next(&mut self) -> Option<(Tok, usize)> {
        let t = self.toks.get(self.idx).cloned();
        if t.is_some() {
            self.idx += 1;
        }
        t
    }

    fn here(&self) -> usize {
        self.peek().map(|&(_, p)| p).unwrap_or(self.end)
    }

    fn expr(&mut self) -> Result<FreePoly, ParseError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some((Tok::Plus, _)) => {
                    self.idx += 1;
                    let rhs = self.term()?;
                    acc = acc.add(&rhs);
                }
                Some((Tok::Minus, _)) => {
                    self.idx += 1;
                    let rhs = self.term()?;
                    acc = acc.sub(&rhs);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<FreePoly, ParseError> {
        let mut acc = self.unary()?;
        while let Some((Tok::Star, _)) = self.peek() {
            self.idx += 1;
            let rhs = self.unary()?;
            acc = acc.mul(&rhs);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<FreePoly, ParseError> {
        if let Some((Tok::Minus, _)) = self.peek() {
            self.idx += 1;
            let inner = self.unary()?;
            return Ok(inner.neg());
        }
        self.power()
    }

    fn power(&mut self) -> Result<FreePoly, ParseError> {
        let mut base = self.atom()?;
        while let Some((Tok::Caret, _)) = self.peek() {
            self.idx += 1;
            let pos = self.here();
            match self.next() {
                Some((Tok::Num(v, true), _)) if v >= 0.0 && v <= 1e6 && v.fract() == 0.0 => {
                    base = base.pow(v as u32);
                }
                _ => return err(pos, "exponent must be a nonnegative decimal integer"),
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<FreePoly, ParseError> {
        let pos = self.here();
        match self.next() {
            Some((Tok::Num(v, _), _)) => Ok(FreePoly::constant(self.dims, cx(v, 0.0))),
            Some((Tok::Imag(v), _)) => Ok(FreePoly::constant(self.dims, cx(0.0, v))),
            Some((Tok::Var(r), _)) => {
                Ok(FreePoly::monomial(self.dims, Word::letter(r), cx(1.0, 0.0)))
            }
            Some((Tok::LParen, _)) => {
                let inner = self.expr()?;
                match self.next() {
                    Some((Tok::RParen, _)) => Ok(inner),
                    _ => err(self.end, "expected ')'"),
                }
            }
            _ => err(pos, "expected a number, variable, or '('"),
        }
    }
}

pub(super) fn parse(text: &str, dims: usize) -> Result<FreePoly, ParseError> {
    let toks = Lexer {
        src: text.as_bytes(),
        pos: 0,
        dims,
    }
    .tokens()?;
    let end = text.len();
    let mut parser = Parser {
        toks,
        idx: 0,
        dims,
        end,
    };
    let poly = parser.expr()?;
    if let Some(&(_, pos)) = parser.peek() {
        return err(pos, "expected an operator");
    }
    Ok(poly)
}
