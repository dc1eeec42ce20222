//! Prime-field scalars, sparse homogeneous polynomials, and the text format
//! for polynomial expressions.

mod field;
mod monomial;
mod parse;
mod poly;

use std::collections::HashMap;
use std::sync::Arc;

use thiserror::Error;

pub use field::{PrimeField, DEFAULT_PRIME};
pub use monomial::{Monomial, MAX_VARS};
pub use poly::Poly;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ArithError {
    #[error("{0} is not a prime below 2^31")]
    NotPrime(u64),
    #[error("unknown variable `{name}` at byte {offset}")]
    UnknownVariable { name: String, offset: usize },
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("negative exponent at byte {offset}")]
    NegativeExponent { offset: usize },
    #[error("exponent too large at byte {offset}")]
    ExponentOverflow { offset: usize },
    #[error("at most {MAX_VARS} variables are supported, got {0}")]
    TooManyVariables(usize),
    #[error("invalid or duplicate variable name `{0}`")]
    BadVariable(String),
    #[error("polynomials belong to different rings")]
    ContextMismatch,
}

/// A polynomial ring `F_p[x_1, ..., x_n]` with named variables.
#[derive(Debug, PartialEq, Eq)]
pub struct PolyRing {
    field: PrimeField,
    vars: Vec<String>,
    index: HashMap<String, usize>,
}

impl PolyRing {
    pub fn new(field: PrimeField, vars: &[&str]) -> Result<Arc<PolyRing>, ArithError> {
        Self::from_names(field, vars.iter().map(|s| s.to_string()).collect())
    }

    pub fn from_names(field: PrimeField, vars: Vec<String>) -> Result<Arc<PolyRing>, ArithError> {
        if vars.len() > MAX_VARS {
            return Err(ArithError::TooManyVariables(vars.len()));
        }
        let mut index = HashMap::new();
        for (i, v) in vars.iter().enumerate() {
            let ok = v
                .bytes()
                .next()
                .is_some_and(|c| c.is_ascii_alphabetic() || c == b'_')
                && v.bytes().all(|c| c.is_ascii_alphanumeric() || c == b'_');
            if !ok || index.insert(v.clone(), i).is_some() {
                return Err(ArithError::BadVariable(v.clone()));
            }
        }
        Ok(Arc::new(PolyRing { field, vars, index }))
    }

    #[inline]
    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn variables(&self) -> &[String] {
        &self.vars
    }

    pub fn variable_index(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn var(&self, i: usize) -> Poly {
        Poly::var(i)
    }

    pub fn parse(&self, text: &str) -> Result<Poly, ArithError> {
        parse::parse(text, self)
    }

    pub fn format(&self, p: &Poly) -> String {
        parse::format(p, self)
    }

    /// Checks that `p` only uses variables of this ring and canonical
    /// coefficients.
    pub fn owns(&self, p: &Poly) -> bool {
        let n = self.nvars();
        p.terms().iter().all(|(m, c)| {
            *c < self.field.characteristic() && (n..MAX_VARS).all(|i| m.exponent(i) == 0)
        })
    }

    /// `a op b`, rejecting operands that do not live in this ring.
    pub fn checked(&self, a: &Poly, b: &Poly, op: PolyOp) -> Result<Poly, ArithError> {
        if !self.owns(a) || !self.owns(b) {
            return Err(ArithError::ContextMismatch);
        }
        let f = self.field;
        Ok(match op {
            PolyOp::Add => a.add(b, f),
            PolyOp::Sub => a.sub(b, f),
            PolyOp::Mul => a.mul(b, f),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolyOp {
    Add,
    Sub,
    Mul,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring(p: u32, vars: &[&str]) -> Arc<PolyRing> {
        PolyRing::new(PrimeField::new(p).unwrap(), vars).unwrap()
    }

    fn m(e: &[u32]) -> Monomial {
        Monomial::from_exponents(e).unwrap()
    }

    #[test]
    fn parse_canonical_terms() {
        let r = ring(101, &["x", "y", "z"]);
        let p = r.parse("x^2*y - 3*z").unwrap();
        assert_eq!(p.terms(), &[(m(&[2, 1, 0]), 1), (m(&[0, 0, 1]), 98)]);
        assert!(r.parse("0").unwrap().is_zero());
        let r2 = ring(101, &["x", "y"]);
        let q = r2.parse("(x+y)*(x-y)").unwrap();
        assert_eq!(q.terms(), &[(m(&[2, 0]), 1), (m(&[0, 2]), 100)]);
    }

    #[test]
    fn parse_errors() {
        let r = ring(101, &["x", "y"]);
        assert_eq!(
            r.parse("x + w"),
            Err(ArithError::UnknownVariable {
                name: "w".into(),
                offset: 4
            })
        );
        assert!(matches!(r.parse("x^-2"), Err(ArithError::NegativeExponent { offset: 2 })));
        assert!(matches!(r.parse("x + * y"), Err(ArithError::Syntax { offset: 4, .. })));
        assert!(matches!(r.parse("(x"), Err(ArithError::Syntax { .. })));
        assert!(matches!(r.parse("x y"), Err(ArithError::Syntax { offset: 2, .. })));
    }

    #[test]
    fn big_literals_reduce() {
        let r = ring(101, &["x"]);
        assert_eq!(r.parse("1010000000000000000000000001").unwrap(), Poly::constant(1));
    }

    #[test]
    fn printing() {
        let r = ring(101, &["x", "y", "z"]);
        let p = r.parse("x^2*y - 3*z + 1").unwrap();
        assert_eq!(r.format(&p), "x^2*y - 3*z + 1");
        assert_eq!(r.format(&r.parse("-x").unwrap()), "-x");
        assert_eq!(r.format(&Poly::zero()), "0");
    }

    #[test]
    fn context_mismatch() {
        let r2 = ring(101, &["x", "y"]);
        let r3 = ring(101, &["x", "y", "z"]);
        let z = r3.parse("z").unwrap();
        let x = r2.parse("x").unwrap();
        assert_eq!(r2.checked(&x, &z, PolyOp::Add), Err(ArithError::ContextMismatch));
        let prod = r2.checked(&x, &x, PolyOp::Mul).unwrap();
        assert_eq!(r2.format(&prod), "x^2");
    }
}
