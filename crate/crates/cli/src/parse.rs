//! The `--alpha` grammar:
//!
//! ```text
//! phi | sqrt:D | surd:P,D,Q | cf:a0[;a1,a2,...][,(b1,b2,...)]
//! ```
//!
//! A parenthesized group may only close the list. `AlphaSpec`'s `Display`
//! prints the canonical form, which parses back to the same spec.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Signed;
use ostrowski_core::AlphaSpec;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParseErrorKind {
    Empty,
    UnknownForm,
    ExpectedInteger,
    Expected(char),
    TrailingInput,
    PerfectSquare(BigInt),
    Invalid(String),
}

/// A rejected spec, with the byte offset where parsing stopped.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub pos: usize,
    pub kind: ParseErrorKind,
}

impl ParseError {
    pub fn code(&self) -> &'static str {
        match self.kind {
            ParseErrorKind::PerfectSquare(_) => "perfect_square",
            _ => "parse_error",
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "at position {}: ", self.pos)?;
        match &self.kind {
            ParseErrorKind::Empty => f.write_str("empty spec"),
            ParseErrorKind::UnknownForm => f.write_str("expected phi, sqrt:D, surd:P,D,Q or cf:a0;a1,..."),
            ParseErrorKind::ExpectedInteger => f.write_str("expected an integer"),
            ParseErrorKind::Expected(c) => write!(f, "expected '{c}'"),
            ParseErrorKind::TrailingInput => f.write_str("unexpected trailing input"),
            ParseErrorKind::PerfectSquare(d) => write!(f, "{d} is a perfect square, so sqrt:{d} is rational"),
            ParseErrorKind::Invalid(msg) => f.write_str(msg),
        }
    }
}

impl std::error::Error for ParseError {}

struct Cursor<'a> {
    s: &'a str,
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn err<T>(&self, kind: ParseErrorKind) -> Result<T, ParseError> {
        Err(ParseError { pos: self.pos, kind })
    }

    fn peek(&self) -> Option<char> {
        self.s[self.pos..].chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(ParseErrorKind::Expected(c))
        }
    }

    fn int(&mut self) -> Result<BigInt, ParseError> {
        let start = self.pos;
        self.eat('-');
        let digits = self.s[self.pos..].bytes().take_while(u8::is_ascii_digit).count();
        if digits == 0 {
            self.pos = start;
            return self.err(ParseErrorKind::ExpectedInteger);
        }
        self.pos += digits;
        Ok(self.s[start..self.pos].parse().expect("validated digits"))
    }

    fn end(&self) -> Result<(), ParseError> {
        if self.pos == self.s.len() {
            Ok(())
        } else {
            self.err(ParseErrorKind::TrailingInput)
        }
    }
}

pub fn parse_alpha(input: &str) -> Result<AlphaSpec, ParseError> {
    let lead = input.len() - input.trim_start().len();
    let s = input.trim();
    let mut c = Cursor { s, pos: 0 };
    if s.is_empty() {
        return Err(ParseError { pos: lead, kind: ParseErrorKind::Empty });
    }
    let spec = if s == "phi" {
        AlphaSpec::phi()
    } else if let Some(rest) = s.strip_prefix("sqrt:") {
        c.pos = s.len() - rest.len();
        let at = c.pos;
        let d = c.int()?;
        c.end()?;
        if !d.is_negative() && (d.sqrt().pow(2) == d) {
            return Err(ParseError { pos: lead + at, kind: ParseErrorKind::PerfectSquare(d) });
        }
        AlphaSpec::surd(0, d, 1)
    } else if let Some(rest) = s.strip_prefix("surd:") {
        c.pos = s.len() - rest.len();
        let p = c.int()?;
        c.expect(',')?;
        let d = c.int()?;
        c.expect(',')?;
        let q = c.int()?;
        c.end()?;
        AlphaSpec::Surd { p, d, q }
    } else if let Some(rest) = s.strip_prefix("cf:") {
        c.pos = s.len() - rest.len();
        parse_cf(&mut c)?
    } else {
        return Err(ParseError { pos: lead, kind: ParseErrorKind::UnknownForm });
    };
    spec.validate()
        .map_err(|e| ParseError { pos: lead, kind: ParseErrorKind::Invalid(e.to_string()) })?;
    Ok(spec)
}

fn parse_cf(c: &mut Cursor<'_>) -> Result<AlphaSpec, ParseError> {
    let mut head = vec![c.int()?];
    let mut period = None;
    if c.eat(';') {
        loop {
            if c.eat('(') {
                let mut p = vec![c.int()?];
                while c.eat(',') {
                    p.push(c.int()?);
                }
                c.expect(')')?;
                period = Some(p);
                break;
            }
            head.push(c.int()?);
            if !c.eat(',') {
                break;
            }
        }
    }
    c.end()?;
    Ok(AlphaSpec::PartialQuotients { head, period })
}
