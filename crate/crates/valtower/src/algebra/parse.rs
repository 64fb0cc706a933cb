//! Text grammar for polynomials: terms `c*x^i*y^j` joined by `+`/`-`.
//!
//! `u` is read as the first chart variable and `v` as the second, so the same
//! parser serves the S-chart `(x, y)`, the A-chart `(x, v)` and the R-chart `(u, v)`.

use super::field::Field;
use super::poly::Poly2;
use crate::error::{Error, Result};

struct Cursor<'a> {
    s: &'a [u8],
    pos: usize,
}

impl Cursor<'_> {
    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse { pos: self.pos, msg: msg.into() })
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
        std::str::from_utf8(&self.s[start..self.pos])
            .expect("ascii digits")
            .parse()
            .map_err(|_| Error::Parse { pos: start, msg: "number too large".into() })
    }
}

/// Parses a polynomial over `field`; integer coefficients are reduced mod p.
pub fn parse_poly(text: &str, field: Field) -> Result<Poly2> {
    let mut c = Cursor { s: text.as_bytes(), pos: 0 };
    let mut out = Poly2::zero(field);
    let mut first = true;
    loop {
        let sign = match c.peek() {
            None if first => return c.err("empty polynomial"),
            None => break,
            Some(b'+') => {
                c.pos += 1;
                1
            }
            Some(b'-') => {
                c.pos += 1;
                -1
            }
            Some(_) if first => 1,
            Some(ch) => return c.err(format!("expected '+' or '-', found {:?}", ch as char)),
        };
        first = false;
        let mut coef: i64 = sign;
        let (mut ex, mut ey) = (0u32, 0u32);
        let mut factors = 0;
        loop {
            match c.peek() {
                Some(d) if d.is_ascii_digit() => {
                    let n = c.number()?;
                    coef = coef * (n % field.p() as u64) as i64 % field.p() as i64;
                }
                Some(v @ (b'x' | b'y' | b'u' | b'v')) => {
                    c.pos += 1;
                    let mut e = 1u64;
                    if c.peek() == Some(b'^') {
                        c.pos += 1;
                        e = c.number()?;
                    }
                    let e = u32::try_from(e).or_else(|_| c.err("exponent too large"))?;
                    if matches!(v, b'x' | b'u') {
                        ex += e;
                    } else {
                        ey += e;
                    }
                }
                Some(ch) => return c.err(format!("unexpected {:?}", ch as char)),
                None => return c.err("unexpected end of input"),
            }
            factors += 1;
            match c.peek() {
                Some(b'*') => {
                    c.pos += 1;
                }
                _ => break,
            }
        }
        debug_assert!(factors > 0);
        out = &out + &Poly2::monomial(field.from_int(coef), ex, ey);
    }
    Ok(out)
}
