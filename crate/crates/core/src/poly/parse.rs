//! Recursive-descent parser for the polynomial grammar:
//!
//! ```text
//! expr     := term (('+' | '-') term)*
//! term     := unary ('*' unary)*
//! unary    := '-' unary | power
//! power    := atom ('^' exponent)*
//! atom     := integer ('/' integer)? | name | '(' expr ')'
//! exponent := integer | '(' integer ')'
//! ```
//!
//! Multiplication is never implicit, so `2x` is a syntax error.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use super::{Polynomial, Ring};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Name(String),
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    LParen,
    RParen,
    End,
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        let start = i;
        match c {
            ' ' | '\t' | '\n' | '\r' => {
                i += 1;
                continue;
            }
            '+' => out.push((Tok::Plus, start)),
            '-' => out.push((Tok::Minus, start)),
            '*' => out.push((Tok::Star, start)),
            '^' => out.push((Tok::Caret, start)),
            '/' => out.push((Tok::Slash, start)),
            '(' => out.push((Tok::LParen, start)),
            ')' => out.push((Tok::RParen, start)),
            '0'..='9' => {
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let n: BigInt = text[start..i].parse().expect("digits");
                out.push((Tok::Int(n), start));
                continue;
            }
            c if c.is_ascii_alphabetic() => {
                while i < bytes.len()
                    && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_' || bytes[i] == b'\'')
                {
                    i += 1;
                }
                out.push((Tok::Name(text[start..i].to_string()), start));
                continue;
            }
            _ => {
                return Err(Error::Syntax { pos: start, msg: format!("unexpected character `{c}`") })
            }
        }
        i += 1;
    }
    out.push((Tok::End, text.len()));
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    ring: &'a Ring,
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if t != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn syntax<T>(&self, msg: &str) -> Result<T> {
        Err(Error::Syntax { pos: self.offset(), msg: msg.to_string() })
    }

    fn expr(&mut self) -> Result<Polynomial> {
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

    fn term(&mut self) -> Result<Polynomial> {
        let mut acc = self.unary()?;
        while *self.peek() == Tok::Star {
            self.bump();
            acc = &acc * &self.unary()?;
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Polynomial> {
        if *self.peek() == Tok::Minus {
            self.bump();
            return Ok(-&self.unary()?);
        }
        self.power()
    }

    fn power(&mut self) -> Result<Polynomial> {
        let mut base = self.atom()?;
        while *self.peek() == Tok::Caret {
            self.bump();
            let e = self.exponent()?;
            base = base.pow(e);
        }
        Ok(base)
    }

    fn exponent(&mut self) -> Result<u32> {
        let at = self.offset();
        let parens = *self.peek() == Tok::LParen;
        if parens {
            self.bump();
        }
        let value = match self.bump() {
            Tok::Minus => return Err(Error::NegativeExponent(at)),
            Tok::Int(n) => n,
            Tok::Name(_) | Tok::LParen => return Err(Error::NonIntegerExponent(at)),
            _ => {
                self.pos -= 1;
                return self.syntax("expected exponent");
            }
        };
        if *self.peek() == Tok::Slash {
            return Err(Error::NonIntegerExponent(at));
        }
        if parens {
            match self.peek() {
                Tok::RParen => {
                    self.bump();
                }
                Tok::Plus | Tok::Star | Tok::Caret => return Err(Error::NonIntegerExponent(at)),
                _ => return self.syntax("expected `)`"),
            }
        }
        value
            .to_u32()
            .ok_or(Error::Syntax { pos: at, msg: "exponent too large".into() })
    }

    fn atom(&mut self) -> Result<Polynomial> {
        let at = self.offset();
        match self.bump() {
            Tok::Int(n) => {
                let mut value = BigRational::from_integer(n);
                if *self.peek() == Tok::Slash {
                    self.bump();
                    match self.bump() {
                        Tok::Int(d) if !d.is_zero() => value /= BigRational::from_integer(d),
                        Tok::Int(_) => {
                            return Err(Error::Syntax { pos: at, msg: "zero denominator".into() })
                        }
                        _ => {
                            self.pos -= 1;
                            return self.syntax("expected integer denominator");
                        }
                    }
                }
                let c = self.ring.reduce(&value)?;
                Ok(Polynomial::constant(self.ring, c))
            }
            Tok::Name(name) => {
                if !self.ring.contains(&name) {
                    return Err(Error::UnknownVariable(name));
                }
                Polynomial::var(self.ring, &name)
            }
            Tok::LParen => {
                let inner = self.expr()?;
                if self.bump() != Tok::RParen {
                    self.pos -= 1;
                    return self.syntax("expected `)`");
                }
                Ok(inner)
            }
            Tok::End => Err(Error::Syntax { pos: at, msg: "unexpected end of input".into() }),
            t => Err(Error::Syntax { pos: at, msg: format!("unexpected token {t:?}") }),
        }
    }
}

/// Parses `text` as a polynomial over `ring`.
pub fn parse(text: &str, ring: &Ring) -> Result<Polynomial> {
    let toks = lex(text)?;
    let mut p = Parser { toks, pos: 0, ring };
    let f = p.expr()?;
    if *p.peek() != Tok::End {
        return p.syntax("trailing input");
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::super::{rat, Monomial, RingCtx};
    use super::*;

    #[test]
    fn literal_reading() {
        let r = RingCtx::parse("Q[x,y,z]").unwrap();
        let f = parse("z^2 - x^2*y", &r).unwrap();
        assert_eq!(f.num_terms(), 2);
        assert_eq!(f.coefficient(&Monomial::new(vec![0, 0, 2])), rat(1));
        assert_eq!(f.coefficient(&Monomial::new(vec![2, 1, 0])), rat(-1));
        assert!(parse("0", &r).unwrap().is_zero());
    }

    #[test]
    fn error_cases() {
        let r = RingCtx::parse("Q[x,y]").unwrap();
        assert!(matches!(parse("x^(-1)", &r), Err(Error::NegativeExponent(_))));
        assert!(matches!(parse("x^-1", &r), Err(Error::NegativeExponent(_))));
        assert!(matches!(parse("x^y", &r), Err(Error::NonIntegerExponent(_))));
        assert!(matches!(parse("x^1/2", &r), Err(Error::NonIntegerExponent(_))));
        assert!(matches!(parse("w + 1", &r), Err(Error::UnknownVariable(_))));
        assert!(matches!(parse("2x", &r), Err(Error::Syntax { pos: 1, .. })));
        assert!(matches!(parse("(x + y", &r), Err(Error::Syntax { .. })));
        assert!(matches!(parse("x + ", &r), Err(Error::Syntax { pos: 4, .. })));
        assert!(matches!(parse("x $ y", &r), Err(Error::Syntax { pos: 2, .. })));
        assert!(matches!(parse("1/0", &r), Err(Error::Syntax { .. })));
    }

    #[test]
    fn precedence() {
        let r = RingCtx::parse("Q[x,y]").unwrap();
        assert_eq!(parse("-x^2", &r).unwrap(), -&parse("x*x", &r).unwrap());
        assert_eq!(parse("2*x^2*3", &r).unwrap(), parse("6*x^2", &r).unwrap());
        assert_eq!(parse("(x+y)^2", &r).unwrap(), parse("x^2+2*x*y+y^2", &r).unwrap());
        assert_eq!(parse("x^(3)", &r).unwrap(), parse("x*x*x", &r).unwrap());
        assert_eq!(parse("1/2*x - -x", &r).unwrap(), parse("3/2*x", &r).unwrap());
    }

    #[test]
    fn char_p_literals() {
        let r = RingCtx::parse("F7[x]").unwrap();
        assert_eq!(parse("1/3", &r).unwrap(), parse("5", &r).unwrap());
        assert!(matches!(parse("1/7", &r), Err(Error::NonIntegral(_))));
    }
}
