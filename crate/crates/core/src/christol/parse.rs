//! Text syntax for bivariate equations: sums and products of t, y, the field
//! generator g, integer constants and parentheses, with nonnegative integer
//! powers. Juxtaposition multiplies ("2t", "g t y").

use super::BiPoly;
use crate::coeff_fields::{Field, Poly};
use crate::error::{Error, Result};

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
    f: &'a Field,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, msg: &str) -> Result<T> {
        Err(Error::user(format!("parse error at position {}: {}", self.pos, msg)))
    }
    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }
    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }
    fn number(&mut self) -> Result<u64> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected a number");
        }
        std::str::from_utf8(&self.s[start..self.pos]).unwrap().parse().or_else(|_| {
            self.pos = start;
            self.err("number too large")
        })
    }

    fn expr(&mut self) -> Result<BiPoly> {
        let mut acc = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                self.term()?.neg(self.f)
            }
            Some(b'+') => {
                self.pos += 1;
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?, self.f);
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?.neg(self.f), self.f);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<BiPoly> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = acc.mul(&self.power()?, self.f);
                }
                Some(c) if c == b'(' || c.is_ascii_alphanumeric() => {
                    acc = acc.mul(&self.power()?, self.f);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn power(&mut self) -> Result<BiPoly> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let e = self.number()?;
            if e > 1 << 16 {
                return self.err("exponent too large");
            }
            let mut r = BiPoly::from_t(Poly::one());
            for _ in 0..e {
                r = r.mul(&base, self.f);
            }
            return Ok(r);
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<BiPoly> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return self.err("expected ')'");
                }
                self.pos += 1;
                Ok(e)
            }
            Some(b't') => {
                self.pos += 1;
                Ok(BiPoly::from_t(Poly::t()))
            }
            Some(b'y') => {
                self.pos += 1;
                Ok(BiPoly::y())
            }
            Some(b'g') => {
                self.pos += 1;
                Ok(BiPoly::from_t(Poly::constant(self.f.gen())))
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.number()?;
                let p = self.f.p() as u64;
                Ok(BiPoly::from_t(Poly::constant(self.f.from_int((n % p) as i64))))
            }
            Some(_) => self.err("unexpected character"),
            None => self.err("unexpected end of input"),
        }
    }
}

pub fn parse_bipoly(text: &str, f: &Field) -> Result<BiPoly> {
    let mut ps = Parser { s: text.as_bytes(), pos: 0, f };
    let e = ps.expr()?;
    if ps.peek().is_some() {
        return ps.err("trailing input");
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_common_forms() {
        let f = Field::default_for(2, 1).unwrap();
        let p = parse_bipoly("y^2 + y + t", &f).unwrap();
        assert_eq!(p.coeffs, vec![Poly::t(), Poly::one(), Poly::one()]);
        let q = parse_bipoly("(1+t)*y + 1", &f).unwrap();
        assert_eq!(q.coeffs, vec![Poly::one(), Poly::new(vec![1, 1])]);
        let f4 = Field::default_for(2, 2).unwrap();
        let r = parse_bipoly("y^2 + y + g t", &f4).unwrap();
        assert_eq!(r.coeff(0), Poly::new(vec![0, f4.gen()]));
        let f3 = Field::default_for(3, 1).unwrap();
        let s = parse_bipoly("y^2 - (1+t)", &f3).unwrap();
        assert_eq!(s.coeff(0), Poly::new(vec![2, 2]));
    }

    #[test]
    fn errors_carry_position() {
        let f = Field::default_for(2, 1).unwrap();
        let e = parse_bipoly("y^2 + + t", &f).unwrap_err().to_string();
        assert!(e.contains("position 6"), "{}", e);
        let e = parse_bipoly("y + x", &f).unwrap_err().to_string();
        assert!(e.contains("position 4"), "{}", e);
        assert!(parse_bipoly("(y + t", &f).is_err());
    }
}
