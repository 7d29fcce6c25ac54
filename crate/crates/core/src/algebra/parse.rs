//! Expression grammar for maps: `z^3 - 1/3`, `z^3 - 1.2i*z`, `3z^3/(3-z^3)`,
//! `z*(z^3-1)`. Numbers, the imaginary unit `i`, the variable `z`, `+ - * /`,
//! integer powers `^k` (negative allowed), parentheses, and implicit
//! multiplication between adjacent factors.

use num_complex::Complex;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::scalar::Real;

use super::{Polynomial, RationalMap, ToleranceConfig};

#[derive(Clone, Debug, PartialEq)]
enum Token {
    Number(f64),
    I,
    Z,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn tokenize(src: &str) -> Result<Vec<(usize, Token)>> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut pos = 0;
    while pos < bytes.len() {
        let ch = bytes[pos] as char;
        let start = pos;
        let tok = match ch {
            ' ' | '\t' | '\n' | '\r' => {
                pos += 1;
                continue;
            }
            '+' => Token::Plus,
            '-' => Token::Minus,
            '*' => Token::Star,
            '/' => Token::Slash,
            '^' => Token::Caret,
            '(' => Token::LParen,
            ')' => Token::RParen,
            'i' | 'I' => Token::I,
            'z' | 'Z' => Token::Z,
            c if c.is_ascii_digit() || c == '.' => {
                let mut end = pos;
                while end < bytes.len() && (bytes[end].is_ascii_digit() || bytes[end] == b'.') {
                    end += 1;
                }
                // exponent part, only when followed by digits
                if end < bytes.len() && (bytes[end] == b'e' || bytes[end] == b'E') {
                    let mut k = end + 1;
                    if k < bytes.len() && (bytes[k] == b'+' || bytes[k] == b'-') {
                        k += 1;
                    }
                    if k < bytes.len() && bytes[k].is_ascii_digit() {
                        while k < bytes.len() && bytes[k].is_ascii_digit() {
                            k += 1;
                        }
                        end = k;
                    }
                }
                let text = &src[pos..end];
                let value: f64 = text.parse().map_err(|_| Error::Parse {
                    position: start,
                    message: format!("malformed number `{text}`"),
                })?;
                out.push((start, Token::Number(value)));
                pos = end;
                continue;
            }
            other => {
                return Err(Error::Parse {
                    position: start,
                    message: format!("unexpected character `{other}`"),
                })
            }
        };
        out.push((start, tok));
        pos += 1;
    }
    Ok(out)
}

/// Unreduced quotient built during parsing.
#[derive(Clone, Debug)]
struct Frac<T> {
    num: Polynomial<T>,
    den: Polynomial<T>,
}

impl<T: Real> Frac<T> {
    fn poly(p: Polynomial<T>) -> Self {
        Self {
            num: p,
            den: Polynomial::one(),
        }
    }

    fn add(&self, o: &Self) -> Self {
        if self.den == o.den {
            return Self {
                num: &self.num + &o.num,
                den: self.den.clone(),
            };
        }
        Self {
            num: &(&self.num * &o.den) + &(&o.num * &self.den),
            den: &self.den * &o.den,
        }
    }

    fn neg(&self) -> Self {
        Self {
            num: -&self.num,
            den: self.den.clone(),
        }
    }

    fn mul(&self, o: &Self) -> Self {
        Self {
            num: &self.num * &o.num,
            den: &self.den * &o.den,
        }
    }

    fn recip(&self) -> Option<Self> {
        (!self.num.is_zero()).then(|| Self {
            num: self.den.clone(),
            den: self.num.clone(),
        })
    }
}

struct Parser<T> {
    tokens: Vec<(usize, Token)>,
    pos: usize,
    end: usize,
    _marker: std::marker::PhantomData<T>,
}

impl<T: Real> Parser<T> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(_, t)| t)
    }

    fn position(&self) -> usize {
        self.tokens.get(self.pos).map_or(self.end, |(p, _)| *p)
    }

    fn err<U>(&self, message: impl Into<String>) -> Result<U> {
        Err(Error::Parse {
            position: self.position(),
            message: message.into(),
        })
    }

    fn expr(&mut self) -> Result<Frac<T>> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Token::Plus) => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?);
                }
                Some(Token::Minus) => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?.neg());
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Frac<T>> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Token::Star) => {
                    self.pos += 1;
                    acc = acc.mul(&self.unary()?);
                }
                Some(Token::Slash) => {
                    self.pos += 1;
                    let at = self.position();
                    let rhs = self.unary()?;
                    acc = acc.mul(&rhs.recip().ok_or(Error::Parse {
                        position: at,
                        message: "division by zero".into(),
                    })?);
                }
                Some(Token::Number(_) | Token::I | Token::Z | Token::LParen) => {
                    acc = acc.mul(&self.power()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<Frac<T>> {
        match self.peek() {
            Some(Token::Minus) => {
                self.pos += 1;
                Ok(self.unary()?.neg())
            }
            Some(Token::Plus) => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Frac<T>> {
        let base = self.primary()?;
        if self.peek() != Some(&Token::Caret) {
            return Ok(base);
        }
        self.pos += 1;
        let at = self.position();
        let exponent = self.integer_exponent()?;
        let magnitude = exponent.unsigned_abs() as u32;
        let raised = Frac {
            num: base.num.pow(magnitude),
            den: base.den.pow(magnitude),
        };
        if exponent >= 0 {
            Ok(raised)
        } else {
            raised.recip().ok_or(Error::Parse {
                position: at,
                message: "negative power of zero".into(),
            })
        }
    }

    fn integer_exponent(&mut self) -> Result<i64> {
        let parenthesized = self.peek() == Some(&Token::LParen);
        if parenthesized {
            self.pos += 1;
        }
        let negative = match self.peek() {
            Some(Token::Minus) => {
                self.pos += 1;
                true
            }
            Some(Token::Plus) => {
                self.pos += 1;
                false
            }
            _ => false,
        };
        let value = match self.peek() {
            Some(&Token::Number(v)) if v.fract() == 0.0 && v <= 4096.0 => {
                self.pos += 1;
                v as i64
            }
            _ => return self.err("exponent must be an integer literal"),
        };
        if parenthesized {
            if self.peek() != Some(&Token::RParen) {
                return self.err("expected `)`");
            }
            self.pos += 1;
        }
        Ok(if negative { -value } else { value })
    }

    fn primary(&mut self) -> Result<Frac<T>> {
        let tok = match self.peek() {
            Some(t) => t.clone(),
            None => return self.err("unexpected end of input"),
        };
        self.pos += 1;
        match tok {
            Token::Number(v) => Ok(Frac::poly(Polynomial::constant(Complex::new(T::lit(v), T::zero())))),
            Token::I => Ok(Frac::poly(Polynomial::constant(Complex::new(T::zero(), T::one())))),
            Token::Z => Ok(Frac::poly(Polynomial::identity())),
            Token::LParen => {
                let inner = self.expr()?;
                if self.peek() != Some(&Token::RParen) {
                    return self.err("expected `)`");
                }
                self.pos += 1;
                Ok(inner)
            }
            _ => {
                self.pos -= 1;
                self.err("expected a number, `i`, `z` or `(`")
            }
        }
    }
}

fn parse_frac<T: Real>(src: &str) -> Result<Frac<T>> {
    let tokens = tokenize(src)?;
    let mut parser = Parser {
        tokens,
        pos: 0,
        end: src.len(),
        _marker: std::marker::PhantomData,
    };
    let value = parser.expr()?;
    if parser.pos != parser.tokens.len() {
        return parser.err("unexpected trailing input");
    }
    Ok(value)
}

/// Parses a rational map and reduces it.
pub fn parse_rational<T: Real>(src: &str, tol: &ToleranceConfig<T>) -> Result<RationalMap<T>> {
    let f = parse_frac::<T>(src)?;
    RationalMap::new(f.num, f.den, tol)
}

/// Parses an expression that must reduce to a polynomial.
pub fn parse_polynomial<T: Real>(src: &str, tol: &ToleranceConfig<T>) -> Result<Polynomial<T>> {
    let r = parse_rational(src, tol)?;
    r.as_polynomial().ok_or(Error::Parse {
        position: 0,
        message: format!("`{src}` is not a polynomial"),
    })
}

/// Parses a constant expression such as `-1`, `0.5+0.2i` or `1/3`.
pub fn parse_complex<T: Real>(src: &str) -> Result<Complex<T>> {
    let f = parse_frac::<T>(src)?;
    if f.num.degree() > 0 || f.den.degree() > 0 {
        return Err(Error::Parse {
            position: 0,
            message: format!("`{src}` is not a constant"),
        });
    }
    if f.num.is_zero() {
        return Ok(Complex::zero());
    }
    Ok(f.num.coeff(0) / f.den.coeff(0))
}
