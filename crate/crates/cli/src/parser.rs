//! Text forms for series and points.
//!
//! The grammar matches the library's canonical printing, so any
//! rational-coefficient value round-trips:
//!
//! ```text
//! series   := term (('+' | '-') term)* ['+' horizon] | horizon
//! term     := rational ['*' tpower] | tpower
//! tpower   := 't' ['^' exponent]
//! exponent := integer | '(' rational ')'
//! rational := integer ['/' positive-integer]
//! horizon  := 'O' '(' tpower ')'
//! ```
//!
//! Coefficients from deeper scalar towers print with radicals and are not
//! part of the grammar; they arise as outputs, never as inputs.

use std::fmt;

use puiseux_elliptic::{rat_int, ExtRat, PrecisionConfig, PuiseuxNumber, Rat, Real, YBranch};

/// A rejected input, pointing at the byte where parsing stopped.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub offset: usize,
    pub expected: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error at byte {}: expected {}", self.offset, self.expected)
    }
}

impl std::error::Error for ParseError {}

/// A point argument: the identity, explicit coordinates, or an abscissa to
/// lift through the curve equation on a chosen half.
#[derive(Clone, Debug)]
pub enum PointArg {
    Infinity,
    Coords(PuiseuxNumber, PuiseuxNumber),
    Lift(PuiseuxNumber, YBranch),
}

pub fn parse_series(text: &str, cfg: &PrecisionConfig) -> Result<PuiseuxNumber, ParseError> {
    let mut p = Parser::new(text);
    let series = p.series(cfg)?;
    p.finish()?;
    Ok(series)
}

pub fn parse_point(text: &str, cfg: &PrecisionConfig) -> Result<PointArg, ParseError> {
    let mut p = Parser::new(text);
    let arg = p.point(cfg)?;
    p.finish()?;
    Ok(arg)
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Parser { src, pos: 0 }
    }

    fn err(&self, expected: impl Into<String>) -> ParseError {
        ParseError { offset: self.pos, expected: expected.into() }
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn peek(&self) -> Option<char> {
        self.rest().chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.rest().starts_with(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char, what: &str) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(what))
        }
    }

    fn finish(&mut self) -> Result<(), ParseError> {
        self.skip_ws();
        if self.pos == self.src.len() {
            Ok(())
        } else {
            Err(self.err("end of input"))
        }
    }

    /// Digits of one unsigned integer, as a slice.
    fn digits(&mut self) -> Result<&'a str, ParseError> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == start {
            Err(self.err("a digit"))
        } else {
            Ok(&self.src[start..self.pos])
        }
    }

    /// `integer ['/' positive-integer]`, no interior whitespace.
    fn rational(&mut self) -> Result<Rat, ParseError> {
        let start = self.pos;
        if self.eat('-') {}
        self.digits()?;
        if self.eat('/') {
            let dstart = self.pos;
            let denom = self.digits()?;
            if denom.bytes().all(|b| b == b'0') {
                return Err(ParseError {
                    offset: dstart,
                    expected: "a positive denominator".to_string(),
                });
            }
        }
        let token = &self.src[start..self.pos];
        token.parse::<Rat>().map_err(|_| ParseError {
            offset: start,
            expected: "a rational number".to_string(),
        })
    }

    /// `t ['^' exponent]`; caller has already seen the `t`.
    fn t_power(&mut self) -> Result<Rat, ParseError> {
        self.expect('t', "'t'")?;
        if !self.eat('^') {
            return Ok(rat_int(1));
        }
        if self.eat('(') {
            let e = self.rational()?;
            self.expect(')', "')' after the exponent")?;
            Ok(e)
        } else {
            let start = self.pos;
            if self.eat('-') {}
            self.digits()?;
            self.src[start..self.pos].parse::<Rat>().map_err(|_| ParseError {
                offset: start,
                expected: "an integer exponent".to_string(),
            })
        }
    }

    /// One unsigned term: `(coefficient, exponent)`.
    fn term(&mut self) -> Result<(Rat, Rat), ParseError> {
        if let Some('t') = self.peek() {
            return Ok((rat_int(1), self.t_power()?));
        }
        let coeff = self.rational()?;
        self.skip_ws();
        if self.eat('*') {
            self.skip_ws();
            Ok((coeff, self.t_power()?))
        } else {
            Ok((coeff, rat_int(0)))
        }
    }

    /// `O(t^...)`; caller has already seen the `O`.
    fn horizon(&mut self) -> Result<Rat, ParseError> {
        self.expect('O', "'O'")?;
        self.expect('(', "'(' after O")?;
        self.skip_ws();
        let e = self.t_power()?;
        self.skip_ws();
        self.expect(')', "')' closing the O term")?;
        Ok(e)
    }

    fn series(&mut self, cfg: &PrecisionConfig) -> Result<PuiseuxNumber, ParseError> {
        let mut terms: Vec<(Rat, Real)> = Vec::new();
        let mut horizon = ExtRat::Infinite;
        self.skip_ws();
        let mut sign: i64 = if self.eat('-') { -1 } else { 1 };
        loop {
            self.skip_ws();
            match self.peek() {
                Some('O') => {
                    if sign < 0 {
                        return Err(self.err("a term, not an O marker, after '-'"));
                    }
                    horizon = ExtRat::Finite(self.horizon()?);
                    break;
                }
                Some(c) if c == 't' || c == '-' || c.is_ascii_digit() => {
                    let at = self.pos;
                    let (coeff, exp) = self.term()?;
                    cfg.check_denom(&exp).map_err(|_| ParseError {
                        offset: at,
                        expected: "an exponent denominator within the precision cap".to_string(),
                    })?;
                    let signed = if sign < 0 { -coeff } else { coeff };
                    terms.push((exp, Real::from_rat(signed)));
                }
                _ => return Err(self.err("a rational, 't', or 'O'")),
            }
            self.skip_ws();
            if self.eat('+') {
                sign = 1;
            } else if self.eat('-') {
                sign = -1;
            } else {
                break;
            }
        }
        if terms.is_empty() && horizon == ExtRat::Infinite {
            return Err(self.err("a series term"));
        }
        PuiseuxNumber::from_terms_checked(terms, horizon, cfg).map_err(|e| ParseError {
            offset: 0,
            expected: format!("a well-formed series ({e})"),
        })
    }

    fn point(&mut self, cfg: &PrecisionConfig) -> Result<PointArg, ParseError> {
        self.skip_ws();
        if self.eat('O') {
            return Ok(PointArg::Infinity);
        }
        self.expect('(', "'O' or '(' opening a point")?;
        let x = self.series(cfg)?;
        self.skip_ws();
        self.expect(',', "',' between the coordinates")?;
        self.skip_ws();
        // A bare sign closed by ')' picks the half; anything else is a full
        // ordinate, which may itself start with '-'.
        let mark = self.pos;
        for (c, branch) in [('+', YBranch::Plus), ('-', YBranch::Minus)] {
            if self.eat(c) {
                self.skip_ws();
                if self.eat(')') {
                    return Ok(PointArg::Lift(x, branch));
                }
                self.pos = mark;
                break;
            }
        }
        let y = self.series(cfg)?;
        self.skip_ws();
        self.expect(')', "')' closing the point")?;
        Ok(PointArg::Coords(x, y))
    }
}
