use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::Zero;

use super::poly::{Poly, Rational};
use super::scheme::ChartScheme;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    Open,
    Close,
    End,
}

#[derive(Clone, Copy, Debug)]
struct Pos {
    line: usize,
    column: usize,
}

fn lex(text: &str) -> Result<Vec<(Tok, Pos)>> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    let (mut line, mut column) = (1, 1);
    while let Some(&c) = chars.peek() {
        let pos = Pos { line, column };
        if c == '\n' {
            chars.next();
            line += 1;
            column = 1;
            continue;
        }
        if c.is_whitespace() {
            chars.next();
            column += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let mut s = String::new();
            while let Some(&d) = chars.peek() {
                if !d.is_ascii_digit() {
                    break;
                }
                s.push(d);
                chars.next();
                column += 1;
            }
            out.push((Tok::Num(s.parse().expect("digits")), pos));
            continue;
        }
        if c.is_ascii_alphabetic() {
            let mut s = String::new();
            while let Some(&d) = chars.peek() {
                if !(d.is_ascii_alphanumeric() || d == '_') {
                    break;
                }
                s.push(d);
                chars.next();
                column += 1;
            }
            out.push((Tok::Ident(s), pos));
            continue;
        }
        let tok = match c {
            '+' => Tok::Plus,
            '-' => Tok::Minus,
            '*' => Tok::Star,
            '/' => Tok::Slash,
            '^' => Tok::Caret,
            '(' => Tok::Open,
            ')' => Tok::Close,
            other => {
                return Err(Error::Parse { line, column, message: format!("unexpected character '{other}'") })
            }
        };
        chars.next();
        column += 1;
        out.push((tok, pos));
    }
    out.push((Tok::End, Pos { line, column }));
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(Tok, Pos)>,
    at: usize,
    scheme: &'a Arc<ChartScheme>,
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> Pos {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].0.clone();
        if t != Tok::End {
            self.at += 1;
        }
        t
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T> {
        let Pos { line, column } = self.pos();
        Err(Error::Parse { line, column, message: message.into() })
    }

    fn expr(&mut self) -> Result<Poly> {
        let mut acc = Poly::zero(self.scheme);
        let mut negative = match self.peek() {
            Tok::Plus => {
                self.bump();
                false
            }
            Tok::Minus => {
                self.bump();
                true
            }
            _ => false,
        };
        loop {
            let t = self.term()?;
            acc = if negative { &acc - &t } else { &acc + &t };
            negative = match self.peek() {
                Tok::Plus => false,
                Tok::Minus => true,
                _ => return Ok(acc),
            };
            self.bump();
        }
    }

    fn term(&mut self) -> Result<Poly> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                }
                Tok::Num(_) | Tok::Ident(_) | Tok::Open => {}
                _ => return Ok(acc),
            }
            let f = self.factor()?;
            acc = &acc * &f;
        }
    }

    fn factor(&mut self) -> Result<Poly> {
        let base = self.atom()?;
        if *self.peek() == Tok::Caret {
            self.bump();
            match self.bump() {
                Tok::Num(n) => {
                    let e: u32 = n.try_into().or_else(|_| self.error("exponent too large"))?;
                    return Ok(base.pow(e));
                }
                _ => {
                    self.at -= 1;
                    return self.error("expected an integer exponent");
                }
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Poly> {
        let start = self.at;
        match self.bump() {
            Tok::Num(n) => {
                let mut d = BigInt::from(1);
                if *self.peek() == Tok::Slash {
                    self.bump();
                    match self.bump() {
                        Tok::Num(m) if !m.is_zero() => d = m,
                        Tok::Num(_) => {
                            self.at -= 1;
                            return self.error("zero denominator");
                        }
                        _ => {
                            self.at -= 1;
                            return self.error("expected a denominator");
                        }
                    }
                }
                Ok(Poly::constant(self.scheme, Rational::new(n, d)))
            }
            Tok::Ident(name) => match self.scheme.lookup(&name) {
                Some(id) => Ok(Poly::from_id(self.scheme, id)),
                None => {
                    self.at = start;
                    self.error(format!("unknown generator '{name}' in {}", self.scheme.name()))
                }
            },
            Tok::Open => {
                let inner = self.expr()?;
                if self.bump() != Tok::Close {
                    self.at -= 1;
                    return self.error("expected ')'");
                }
                Ok(inner)
            }
            Tok::End => self.error("unexpected end of input"),
            _ => {
                self.at = start;
                self.error("expected a number, generator or '('")
            }
        }
    }
}

/// Parses a polynomial over `scheme`. Factors may appear in any order; the
/// result is in canonical form with Koszul signs applied.
pub fn parse(scheme: &Arc<ChartScheme>, text: &str) -> Result<Poly> {
    let toks = lex(text)?;
    let mut p = Parser { toks, at: 0, scheme };
    let out = p.expr()?;
    if *p.peek() != Tok::End {
        return p.error("unexpected trailing input");
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reordering_applies_signs() {
        let s = ChartScheme::phase(2);
        assert_eq!(parse(&s, "xi2*xi1").unwrap(), -parse(&s, "xi1*xi2").unwrap());
        assert_eq!(parse(&s, "(p1 + xi1*xi2)*x1").unwrap().to_string(), "x1*p1 + x1*xi1*xi2");
    }

    #[test]
    fn rationals_and_powers() {
        let s = ChartScheme::base(2);
        assert_eq!(parse(&s, "3/6*x1^2 - 1/2*x1*x1").unwrap().to_string(), "0");
    }

    #[test]
    fn errors_carry_positions() {
        let s = ChartScheme::base(2);
        match parse(&s, "x1 +\n  q7") {
            Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (2, 3)),
            other => panic!("{other:?}"),
        }
        assert!(parse(&s, "x1 +").is_err());
        assert!(parse(&s, "1/0").is_err());
    }
}
