//! Expression syntax for polynomials and rational functions in `t`.
//!
//! Accepts integers, `t`, `+ - * / ^`, parentheses and implicit
//! multiplication (`3t^2`, `(t+1)(t-1)`). A bracketed list such as
//! `[0, -1, 1]` is read as coefficients, constant term first.

use num_bigint::BigInt;
use num_rational::BigRational;

use super::poly::Polynomial;
use super::ratfunc::RationalFunction;
use super::BelyiError;

type Q = Polynomial<BigRational>;
type R = RationalFunction<BigRational>;

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

fn err(pos: usize, message: impl Into<String>) -> BelyiError {
    BelyiError::Parse {
        column: pos + 1,
        message: message.into(),
    }
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<(), BelyiError> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(err(self.pos, format!("expected '{}'", c as char)))
        }
    }

    fn integer(&mut self) -> Result<BigInt, BelyiError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(err(start, "expected a number"));
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok(s.parse().expect("digits parse"))
    }

    fn expr(&mut self) -> Result<R, BelyiError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?);
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<R, BelyiError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = acc.mul(&self.unary()?);
                }
                Some(b'/') => {
                    self.pos += 1;
                    let at = self.pos;
                    let rhs = self.unary()?;
                    acc = acc.div(&rhs).map_err(|_| err(at, "division by zero"))?;
                }
                Some(c) if c == b't' || c == b'(' || c.is_ascii_digit() => {
                    acc = acc.mul(&self.unary()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<R, BelyiError> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(self.unary()?.neg())
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<R, BelyiError> {
        let base = self.atom()?;
        if self.peek() != Some(b'^') {
            return Ok(base);
        }
        self.pos += 1;
        let negative = if self.peek() == Some(b'-') {
            self.pos += 1;
            true
        } else {
            false
        };
        let at = self.pos;
        let e: i64 = self
            .integer()?
            .try_into()
            .map_err(|_| err(at, "exponent too large"))?;
        let e = if negative { -e } else { e };
        base.pow(e).map_err(|e| match e {
            BelyiError::ZeroDenominator => err(at, "zero raised to a negative power"),
            _ => err(at, "exponent too large"),
        })
    }

    fn atom(&mut self) -> Result<R, BelyiError> {
        match self.peek() {
            Some(b't') => {
                self.pos += 1;
                Ok(R::from_poly(Q::t()))
            }
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                self.expect(b')')?;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                Ok(R::constant(BigRational::from_integer(n)))
            }
            Some(c) => Err(err(self.pos, format!("unexpected '{}'", c as char))),
            None => Err(err(self.pos, "unexpected end of input")),
        }
    }

    fn coefficient_list(&mut self) -> Result<Q, BelyiError> {
        self.expect(b'[')?;
        let mut coeffs = Vec::new();
        if self.peek() == Some(b']') {
            self.pos += 1;
            return Ok(Q::zero());
        }
        loop {
            let negative = if self.peek() == Some(b'-') {
                self.pos += 1;
                true
            } else {
                false
            };
            let num = self.integer()?;
            let mut value = BigRational::from_integer(num);
            if self.peek() == Some(b'/') {
                self.pos += 1;
                let at = self.pos;
                let den = self.integer()?;
                if den == BigInt::from(0) {
                    return Err(err(at, "zero denominator"));
                }
                value /= BigRational::from_integer(den);
            }
            coeffs.push(if negative { -value } else { value });
            match self.peek() {
                Some(b',') => self.pos += 1,
                Some(b']') => {
                    self.pos += 1;
                    return Ok(Q::new(coeffs));
                }
                _ => return Err(err(self.pos, "expected ',' or ']'")),
            }
        }
    }

    fn finish(&mut self) -> Result<(), BelyiError> {
        match self.peek() {
            None => Ok(()),
            Some(c) => Err(err(self.pos, format!("unexpected '{}'", c as char))),
        }
    }
}

/// Parses a rational function of `t`.
pub fn parse_ratfunc(text: &str) -> Result<R, BelyiError> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
    };
    if p.peek() == Some(b'[') {
        let poly = p.coefficient_list()?;
        p.finish()?;
        return Ok(R::from_poly(poly));
    }
    let r = p.expr()?;
    p.finish()?;
    Ok(r)
}

/// Parses a polynomial in `t`; rejects expressions with a nontrivial
/// denominator.
pub fn parse_poly(text: &str) -> Result<Q, BelyiError> {
    let r = parse_ratfunc(text)?;
    if !r.den().is_constant() {
        return Err(BelyiError::NotPolynomial);
    }
    let c = r.den().leading();
    Ok(r.num().scale(&(BigRational::from_integer(1.into()) / c)))
}
