//! Recursive-descent parser for polynomial expressions.
//!
//! Grammar (whitespace ignored):
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary ('*' unary)*
//! unary  := ('+' | '-') unary | power
//! power  := atom ('^' integer)?
//! atom   := integer | identifier | '(' expr ')'
//! ```

use super::{ArithError, Monomial, Poly, PolyRing};

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    ring: &'a PolyRing,
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

    fn syntax(&self, msg: &str) -> ArithError {
        ArithError::Syntax {
            offset: self.pos,
            message: msg.to_string(),
        }
    }

    fn expr(&mut self) -> Result<Poly, ArithError> {
        let field = self.ring.field();
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = acc.add(&self.term()?, field);
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = acc.sub(&self.term()?, field);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Poly, ArithError> {
        let field = self.ring.field();
        let mut acc = self.unary()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            acc = acc.mul(&self.unary()?, field);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Poly, ArithError> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(self.unary()?.neg(self.ring.field()))
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<Poly, ArithError> {
        let base = self.atom()?;
        if self.peek() != Some(b'^') {
            return Ok(base);
        }
        self.pos += 1;
        match self.peek() {
            Some(b'-') => Err(ArithError::NegativeExponent { offset: self.pos }),
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                let mut e: u64 = 0;
                while let Some(&c) = self.src.get(self.pos) {
                    if !c.is_ascii_digit() {
                        break;
                    }
                    e = e * 10 + (c - b'0') as u64;
                    if e > 255 {
                        return Err(ArithError::ExponentOverflow { offset: start });
                    }
                    self.pos += 1;
                }
                let total = base.total_degree().unwrap_or(0) as u64 * e;
                if total > 255 {
                    return Err(ArithError::ExponentOverflow { offset: start });
                }
                Ok(base.pow(e as u32, self.ring.field()))
            }
            _ => Err(self.syntax("expected exponent")),
        }
    }

    fn atom(&mut self) -> Result<Poly, ArithError> {
        let field = self.ring.field();
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.syntax("expected ')'"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let p = field.characteristic() as u64;
                let mut v: u64 = 0;
                while let Some(&c) = self.src.get(self.pos) {
                    if !c.is_ascii_digit() {
                        break;
                    }
                    v = (v * 10 + (c - b'0') as u64) % p;
                    self.pos += 1;
                }
                Ok(Poly::constant(v as u32))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while let Some(&c) = self.src.get(self.pos) {
                    if !(c.is_ascii_alphanumeric() || c == b'_') {
                        break;
                    }
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
                match self.ring.variable_index(name) {
                    Some(i) => Ok(Poly::var(i)),
                    None => Err(ArithError::UnknownVariable {
                        name: name.to_string(),
                        offset: start,
                    }),
                }
            }
            Some(_) => Err(self.syntax("unexpected character")),
            None => Err(self.syntax("unexpected end of input")),
        }
    }
}

pub(super) fn parse(text: &str, ring: &PolyRing) -> Result<Poly, ArithError> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
        ring,
    };
    let out = p.expr()?;
    if p.peek().is_some() {
        return Err(p.syntax("trailing input"));
    }
    Ok(out)
}

pub(super) fn format(poly: &Poly, ring: &PolyRing) -> String {
    if poly.is_zero() {
        return "0".to_string();
    }
    let field = ring.field();
    let mut out = String::new();
    for (k, &(m, c)) in poly.terms().iter().enumerate() {
        let s = field.signed(c);
        let (neg, mag) = if s < 0 { (true, -s) } else { (false, s) };
        if k == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let mono = format_monomial(&m, ring);
        match (mag, mono.is_empty()) {
            (_, true) => out.push_str(&mag.to_string()),
            (1, false) => out.push_str(&mono),
            (_, false) => {
                out.push_str(&mag.to_string());
                out.push('*');
                out.push_str(&mono);
            }
        }
    }
    out
}

fn format_monomial(m: &Monomial, ring: &PolyRing) -> String {
    let mut parts = Vec::new();
    for (i, name) in ring.variables().iter().enumerate() {
        match m.exponent(i) {
            0 => {}
            1 => parts.push(name.clone()),
            e => parts.push(format!("{name}^{e}")),
        }
    }
    parts.join("*")
}
