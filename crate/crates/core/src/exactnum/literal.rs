//! Textual exact literals: integers, decimals, `p/q`, `sqrt(e)`, `cbrt(e)`,
//! `cubicroot(p, q, lo, hi)`, `^` with a natural exponent, and parenthesized
//! arithmetic.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::cubic::cubic_root_in;
use super::rational::{pow10, Rational};
use super::real::ExactReal;
use super::ExactError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiteralError {
    /// Character offset into the input.
    pub offset: usize,
    pub message: String,
}

impl fmt::Display for LiteralError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "at offset {}: {}", self.offset, self.message)
    }
}

impl std::error::Error for LiteralError {}

/// Parse a literal expression into an exact real.
pub fn parse_literal(text: &str) -> Result<ExactReal, LiteralError> {
    let mut p = Parser { chars: text.chars().collect(), pos: 0 };
    let v = p.expr()?;
    p.skip_ws();
    if p.pos < p.chars.len() {
        return Err(p.error(format!("unexpected '{}'", p.chars[p.pos])));
    }
    Ok(v)
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

fn is_minus(c: char) -> bool {
    c == '-' || c == '\u{2212}'
}

impl Parser {
    fn error(&self, message: impl Into<String>) -> LiteralError {
        LiteralError { offset: self.pos, message: message.into() }
    }

    fn arith(&self, e: ExactError) -> LiteralError {
        self.error(e.to_string())
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn expect(&mut self, c: char) -> Result<(), LiteralError> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(format!("expected '{c}'")))
        }
    }

    fn expr(&mut self) -> Result<ExactReal, LiteralError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some('+') => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?);
                }
                Some(c) if is_minus(c) => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<ExactReal, LiteralError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some('*') => {
                    self.pos += 1;
                    acc = acc.mul(&self.unary()?);
                }
                Some('/') => {
                    self.pos += 1;
                    let at = self.pos;
                    let d = self.unary()?;
                    acc = acc.div(&d).map_err(|e| LiteralError { offset: at, message: e.to_string() })?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<ExactReal, LiteralError> {
        match self.peek() {
            Some(c) if is_minus(c) => {
                self.pos += 1;
                Ok(self.unary()?.neg())
            }
            Some('+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<ExactReal, LiteralError> {
        let base = self.atom()?;
        if self.peek() == Some('^') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            let digits: String = self.chars[start..self.pos].iter().collect();
            let n: u32 = digits
                .parse()
                .ok()
                .filter(|n| *n <= 64)
                .ok_or_else(|| LiteralError { offset: start, message: "expected exponent 0..64".into() })?;
            return Ok(base.powi(n));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<ExactReal, LiteralError> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let v = self.expr()?;
                self.expect(')')?;
                Ok(v)
            }
            Some(c) if c.is_ascii_digit() || c == '.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_alphanumeric() {
                    self.pos += 1;
                }
                let name: String = self.chars[start..self.pos].iter().collect();
                self.expect('(')?;
                let v = match name.as_str() {
                    "sqrt" => {
                        let x = self.expr()?;
                        x.sqrt().map_err(|e| self.arith(e))?
                    }
                    "cbrt" => self.expr()?.cbrt(),
                    "cubicroot" => {
                        let p = self.expr()?;
                        self.expect(',')?;
                        let q = self.expr()?;
                        self.expect(',')?;
                        let lo = self.rational_arg()?;
                        self.expect(',')?;
                        let hi = self.rational_arg()?;
                        cubic_root_in(&p, &q, &lo, &hi).map_err(|e| self.arith(e))?
                    }
                    _ => {
                        return Err(LiteralError {
                            offset: start,
                            message: format!("unknown function '{name}'"),
                        })
                    }
                };
                self.expect(')')?;
                Ok(v)
            }
            Some(c) => Err(self.error(format!("unexpected '{c}'"))),
            None => Err(self.error("unexpected end of input")),
        }
    }

    fn rational_arg(&mut self) -> Result<Rational, LiteralError> {
        let at = self.pos;
        let v = self.expr()?;
        v.as_rational()
            .cloned()
            .ok_or_else(|| LiteralError { offset: at, message: "expected a rational bound".into() })
    }

    fn number(&mut self) -> Result<ExactReal, LiteralError> {
        let start = self.pos;
        let mut int_part = String::new();
        let mut frac_part = String::new();
        while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
            int_part.push(self.chars[self.pos]);
            self.pos += 1;
        }
        if self.pos < self.chars.len() && self.chars[self.pos] == '.' {
            self.pos += 1;
            while self.pos < self.chars.len() && self.chars[self.pos].is_ascii_digit() {
                frac_part.push(self.chars[self.pos]);
                self.pos += 1;
            }
        }
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(LiteralError { offset: start, message: "malformed number".into() });
        }
        let digits = format!("{int_part}{frac_part}");
        let n: BigInt = if digits.is_empty() { BigInt::zero() } else { digits.parse().unwrap_or_else(|_| BigInt::one()) };
        let q = Rational::from_integer(n) / pow10(frac_part.len() as i64);
        Ok(ExactReal::from_rational(q))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rational::rat;
    use crate::exactnum::Sign;

    #[test]
    fn rationals_and_decimals() {
        assert_eq!(parse_literal("1/3").unwrap().as_rational(), Some(&rat(1, 3)));
        assert_eq!(parse_literal(" -2 ").unwrap().as_rational(), Some(&rat(-2, 1)));
        assert_eq!(parse_literal("\u{2212}2").unwrap().as_rational(), Some(&rat(-2, 1)));
        assert_eq!(parse_literal("0.125").unwrap().as_rational(), Some(&rat(1, 8)));
        assert_eq!(parse_literal("2^10 - 1").unwrap().as_rational(), Some(&rat(1023, 1)));
        assert_eq!(parse_literal("-3/8").unwrap().as_rational(), Some(&rat(-3, 8)));
    }

    #[test]
    fn radicals() {
        let x = parse_literal("sqrt(2) + sqrt(3) - sqrt(5 + 2*sqrt(6))").unwrap();
        assert_eq!(x.sign().unwrap(), Sign::Zero);
        let c = parse_literal("cbrt(-8)").unwrap();
        assert_eq!(c.as_rational(), Some(&rat(-2, 1)));
    }

    #[test]
    fn display_round_trip() {
        let x = parse_literal("(1 + sqrt(2)) * -1/2 + cbrt(3/4)").unwrap();
        let y = parse_literal(&x.expr_string()).unwrap();
        assert_eq!(x.sub(&y).sign().unwrap(), Sign::Zero);
        let r = parse_literal("cubicroot(-3/4, 1/8, 1/2, 1)").unwrap();
        let s = parse_literal(&r.expr_string()).unwrap();
        assert_eq!(r.sub(&s).sign().unwrap(), Sign::Zero);
    }

    #[test]
    fn errors_carry_offsets() {
        let e = parse_literal("1 + ").unwrap_err();
        assert_eq!(e.offset, 4);
        let e = parse_literal("sqrt(-1)").unwrap_err();
        assert!(e.message.contains("negative"));
        let e = parse_literal("foo(1)").unwrap_err();
        assert_eq!(e.offset, 0);
        assert!(parse_literal("1/0").is_err());
        assert!(parse_literal("2 3").is_err());
    }
}
