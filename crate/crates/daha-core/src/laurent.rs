//! Multivariate Laurent polynomials over Q(v).
//!
//! Exponents live in Z^{width}. Throughout the crate the first coordinate is
//! the level (the exponent of the central coordinate zeta) and the remaining
//! coordinates are coweight coordinates in the simple-coroot basis, so
//! width = rank + 1. Terms are kept in a BTreeMap ordered lexicographically
//! with the level first; that order is the canonical term order for
//! serialization and for orienting denominator atoms.

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use std::collections::BTreeMap;
use std::fmt;

/// Exponent vector; lexicographic order with the level coordinate first.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExpVec(pub Vec<i64>);

impl ExpVec {
    pub fn zero(width: usize) -> Self {
        ExpVec(vec![0; width])
    }

    pub fn width(&self) -> usize {
        self.0.len()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    /// The level coordinate (first entry).
    pub fn level(&self) -> i64 {
        self.0[0]
    }

    /// The coweight part (all entries after the level).
    pub fn finite(&self) -> &[i64] {
        &self.0[1..]
    }

    pub fn add(&self, rhs: &ExpVec) -> ExpVec {
        debug_assert_eq!(self.width(), rhs.width());
        ExpVec(
            self.0
                .iter()
                .zip(&rhs.0)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn sub(&self, rhs: &ExpVec) -> ExpVec {
        debug_assert_eq!(self.width(), rhs.width());
        ExpVec(
            self.0
                .iter()
                .zip(&rhs.0)
                .map(|(a, b)| a - b)
                .collect(),
        )
    }

    pub fn neg(&self) -> ExpVec {
        ExpVec(self.0.iter().map(|a| -a).collect())
    }

    pub fn scale(&self, k: i64) -> ExpVec {
        ExpVec(self.0.iter().map(|a| a * k).collect())
    }

    pub fn dot(&self, rhs: &ExpVec) -> i64 {
        debug_assert_eq!(self.width(), rhs.width());
        self.0.iter().zip(&rhs.0).map(|(a, b)| a * b).sum()
    }

    /// Content: gcd of the entries (0 for the zero vector).
    pub fn content(&self) -> i64 {
        self.0
            .iter()
            .fold(0i64, |g, &c| gcd_i64(g, c.unsigned_abs() as i64))
    }

    /// Divide out the content, returning (primitive, content).
    /// Domain error on the zero vector.
    pub fn primitive_part(&self) -> Result<(ExpVec, i64)> {
        let c = self.content();
        if c == 0 {
            return Err(Error::Domain("primitive part of the zero exponent".into()));
        }
        Ok((ExpVec(self.0.iter().map(|a| a / c).collect()), c))
    }

    /// True when the first nonzero entry is positive (canonical orientation).
    pub fn is_lex_positive(&self) -> bool {
        self.0.iter().find(|&&c| c != 0).is_some_and(|&c| c > 0)
    }
}

fn gcd_i64(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

impl fmt::Display for ExpVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Laurent polynomial: finite Scalar-weighted sum of monomials t^e.
/// Invariant: no stored coefficient is zero; every key has length `width`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaurentPoly {
    width: usize,
    terms: BTreeMap<ExpVec, Scalar>,
}

impl LaurentPoly {
    pub fn zero(width: usize) -> Self {
        LaurentPoly {
            width,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(width: usize) -> Self {
        LaurentPoly::monomial(ExpVec::zero(width), Scalar::one())
    }

    pub fn monomial(exp: ExpVec, coeff: Scalar) -> Self {
        let width = exp.width();
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(exp, coeff);
        }
        LaurentPoly { width, terms }
    }

    pub fn from_terms(width: usize, entries: impl IntoIterator<Item = (ExpVec, Scalar)>) -> Self {
        let mut p = LaurentPoly::zero(width);
        for (e, c) in entries {
            p.add_term(e, c);
        }
        p
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ExpVec, &Scalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, e: &ExpVec) -> Scalar {
        self.terms.get(e).cloned().unwrap_or_else(Scalar::zero)
    }

    /// Leading term in the canonical (level-first lex) order.
    pub fn leading_term(&self) -> Option<(&ExpVec, &Scalar)> {
        self.terms.iter().next_back()
    }

    pub fn add_term(&mut self, e: ExpVec, c: Scalar) {
        debug_assert_eq!(e.width(), self.width);
        if c.is_zero() {
            return;
        }
        match self.terms.remove(&e) {
            None => {
                self.terms.insert(e, c);
            }
            Some(old) => {
                let s = &old + &c;
                if !s.is_zero() {
                    self.terms.insert(e, s);
                }
            }
        }
    }

    pub fn add(&self, rhs: &LaurentPoly) -> LaurentPoly {
        debug_assert_eq!(self.width, rhs.width);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> LaurentPoly {
        LaurentPoly {
            width: self.width,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, rhs: &LaurentPoly) -> LaurentPoly {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &LaurentPoly) -> LaurentPoly {
        debug_assert_eq!(self.width, rhs.width);
        let mut out = LaurentPoly::zero(self.width);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                out.add_term(e1.add(e2), c1 * c2);
            }
        }
        out
    }

    pub fn scale(&self, c: &Scalar) -> LaurentPoly {
        if c.is_zero() {
            return LaurentPoly::zero(self.width);
        }
        LaurentPoly {
            width: self.width,
            terms: self
                .terms
                .iter()
                .map(|(e, a)| (e.clone(), a * c))
                .collect(),
        }
    }

    pub fn mul_monomial(&self, e: &ExpVec, c: &Scalar) -> LaurentPoly {
        if c.is_zero() {
            return LaurentPoly::zero(self.width);
        }
        LaurentPoly {
            width: self.width,
            terms: self
                .terms
                .iter()
                .map(|(e0, a)| (e0.add(e), a * c))
                .collect(),
        }
    }

    /// Apply a monomial substitution t^e -> unit(e) * t^{image(e)}.
    /// The map must be injective on the support (exponent collisions from a
    /// non-injective image would silently merge; all substitutions used in
    /// this crate are linear and invertible, so collisions cannot happen).
    pub fn map_exponents(&self, f: impl Fn(&ExpVec) -> (ExpVec, Scalar)) -> LaurentPoly {
        let mut out = LaurentPoly::zero(self.width);
        for (e, c) in &self.terms {
            let (img, unit) = f(e);
            out.add_term(img, c * &unit);
        }
        out
    }

    pub fn is_monomial(&self) -> Option<(&ExpVec, &Scalar)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if e.is_zero() {
                write!(f, "[{c}]")?;
            } else {
                write!(f, "[{c}]*t^{e}")?;
            }
        }
        Ok(())
    }
}
