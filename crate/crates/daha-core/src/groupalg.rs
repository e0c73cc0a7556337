//! The twisted group algebra of the affine Weyl group over the rational
//! function field of the torus.
//!
//! Elements are finite sums sum_w f_w [w] with f_w a [`RatFun`]. The product
//! twists coefficients past group elements by the substitution action:
//!
//!   [w] f = (w . f) [w]
//!
//! where w . f transports exponents by the level-coweight action in straight
//! mode, and by its conjugate under the grading character in star mode. The
//! central coordinate zeta = t^{(1,0,...,0)} has a fixed exponent, so zeta
//! commutes with every basis element in both modes.

use crate::error::{Error, Result};
use crate::laurent::ExpVec;
use crate::ratfun::{Mode, RatFun};
use crate::rootdata::RootDatum;
use crate::scalar::Scalar;
use crate::weyl::AffineWeylElement;
use std::collections::BTreeMap;
use std::fmt;

/// Default cap on the support size of a twisted product.
pub const DEFAULT_SUPPORT_BOUND: usize = 512;

/// Finite sum of group-basis terms with rational-function coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraElement {
    mode: Mode,
    width: usize,
    terms: BTreeMap<AffineWeylElement, RatFun>,
}

impl AlgebraElement {
    pub fn zero(datum: &RootDatum, mode: Mode) -> Self {
        AlgebraElement {
            mode,
            width: datum.width(),
            terms: BTreeMap::new(),
        }
    }

    pub fn identity(datum: &RootDatum, mode: Mode) -> Self {
        AlgebraElement::basis(datum, AffineWeylElement::identity(datum), mode)
    }

    /// The basis element [w].
    pub fn basis(datum: &RootDatum, w: AffineWeylElement, mode: Mode) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(w, RatFun::one(datum.width()));
        AlgebraElement {
            mode,
            width: datum.width(),
            terms,
        }
    }

    /// The coefficient element f [e].
    pub fn scalar_fn(datum: &RootDatum, f: RatFun, mode: Mode) -> Self {
        let mut out = AlgebraElement::zero(datum, mode);
        out.add_term(AffineWeylElement::identity(datum), f);
        out
    }

    /// The central monomial zeta^k [e].
    pub fn zeta_pow(datum: &RootDatum, k: i64, mode: Mode) -> Self {
        let mut exp = ExpVec::zero(datum.width());
        exp.0[0] = k;
        AlgebraElement::scalar_fn(datum, RatFun::monomial(exp, Scalar::one()), mode)
    }

    pub fn from_terms(
        datum: &RootDatum,
        mode: Mode,
        entries: impl IntoIterator<Item = (AffineWeylElement, RatFun)>,
    ) -> Self {
        let mut out = AlgebraElement::zero(datum, mode);
        for (w, f) in entries {
            out.add_term(w, f);
        }
        out
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn support_size(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&AffineWeylElement, &RatFun)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, w: &AffineWeylElement) -> RatFun {
        self.terms
            .get(w)
            .cloned()
            .unwrap_or_else(|| RatFun::zero(self.width))
    }

    fn add_term(&mut self, w: AffineWeylElement, f: RatFun) {
        if f.is_zero() {
            return;
        }
        match self.terms.remove(&w) {
            None => {
                self.terms.insert(w, f);
            }
            Some(old) => {
                let s = old.add(&f);
                if !s.is_zero() {
                    self.terms.insert(w, s);
                }
            }
        }
    }

    pub fn add(&self, rhs: &AlgebraElement) -> Result<AlgebraElement> {
        self.check_compatible(rhs)?;
        let mut out = self.clone();
        for (w, f) in &rhs.terms {
            out.add_term(w.clone(), f.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, rhs: &AlgebraElement) -> Result<AlgebraElement> {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> AlgebraElement {
        AlgebraElement {
            mode: self.mode,
            width: self.width,
            terms: self
                .terms
                .iter()
                .map(|(w, f)| (w.clone(), f.neg()))
                .collect(),
        }
    }

    /// Left multiplication by a coefficient: f * x scales each term by f.
    pub fn scale_left(&self, f: &RatFun) -> AlgebraElement {
        let mut out = AlgebraElement {
            mode: self.mode,
            width: self.width,
            terms: BTreeMap::new(),
        };
        for (w, g) in &self.terms {
            out.add_term(w.clone(), f.mul(g));
        }
        out
    }

    pub fn scale_scalar(&self, c: &Scalar) -> AlgebraElement {
        let mut out = AlgebraElement {
            mode: self.mode,
            width: self.width,
            terms: BTreeMap::new(),
        };
        for (w, g) in &self.terms {
            out.add_term(w.clone(), g.scale(c));
        }
        out
    }

    fn check_compatible(&self, rhs: &AlgebraElement) -> Result<()> {
        if self.mode != rhs.mode {
            return Err(Error::Domain(format!(
                "mode mismatch: {} vs {}",
                self.mode, rhs.mode
            )));
        }
        if self.width != rhs.width {
            return Err(Error::Domain("width mismatch".into()));
        }
        Ok(())
    }

    /// Twisted product with the default support bound.
    pub fn mul(&self, datum: &RootDatum, rhs: &AlgebraElement) -> Result<AlgebraElement> {
        self.mul_bounded(datum, rhs, DEFAULT_SUPPORT_BOUND)
    }

    /// Twisted product: (f [w]) (g [v]) = f * (w . g) [w v].
    pub fn mul_bounded(
        &self,
        datum: &RootDatum,
        rhs: &AlgebraElement,
        bound: usize,
    ) -> Result<AlgebraElement> {
        self.check_compatible(rhs)?;
        // Bucket the contributions per target basis element and sum each
        // bucket over a single common denominator; folding pairwise adds
        // instead re-normalizes the partial sum after every contribution.
        let mut buckets: BTreeMap<AffineWeylElement, Vec<RatFun>> = BTreeMap::new();
        for (w, f) in &self.terms {
            for (v, g) in &rhs.terms {
                let twisted = g.weyl_substitute(datum, w, self.mode);
                buckets.entry(w.mul(v)).or_default().push(f.mul(&twisted));
                if buckets.len() > bound {
                    return Err(Error::Capacity {
                        what: "twisted product support",
                        limit: bound,
                        got: buckets.len(),
                    });
                }
            }
        }
        let mut out = AlgebraElement {
            mode: self.mode,
            width: self.width,
            terms: BTreeMap::new(),
        };
        for (w, items) in buckets {
            let s = RatFun::sum(self.width, &items);
            if !s.is_zero() {
                out.terms.insert(w, s);
            }
        }
        Ok(out)
    }

    /// Conjugation x y x^{-1} given an explicit inverse of x.
    pub fn conjugate_by(
        &self,
        datum: &RootDatum,
        x: &AlgebraElement,
        x_inv: &AlgebraElement,
    ) -> Result<AlgebraElement> {
        x.mul(datum, self)?.mul(datum, x_inv)
    }
}

impl fmt::Display for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (w, g) in &self.terms {
            if !first {
                writeln!(f)?;
            }
            first = false;
            write!(f, "({g}) [{w}]")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootdata::Label;

    fn x_fn(datum: &RootDatum) -> RatFun {
        // X = t^{(0,1,...)} (first coroot direction)
        let mut e = ExpVec::zero(datum.width());
        e.0[1] = 1;
        RatFun::monomial(e, Scalar::one())
    }

    #[test]
    fn twist_moves_coefficients_across_basis_elements() {
        let d = RootDatum::new(Label::A1);
        let s = AffineWeylElement::generator(&d, 1).unwrap();
        let x = x_fn(&d);
        let lhs = AlgebraElement::basis(&d, s.clone(), Mode::Straight)
            .mul(&d, &AlgebraElement::scalar_fn(&d, x.clone(), Mode::Straight))
            .unwrap();
        // [s] X = X^{-1} [s]
        let expect = AlgebraElement::from_terms(
            &d,
            Mode::Straight,
            [(
                s,
                RatFun::monomial(ExpVec(vec![0, -1]), Scalar::one()),
            )],
        );
        assert_eq!(lhs, expect);
    }

    #[test]
    fn star_twist_inserts_grading_units() {
        let d = RootDatum::new(Label::A1);
        let s = AffineWeylElement::generator(&d, 1).unwrap();
        let x = AlgebraElement::scalar_fn(&d, x_fn(&d), Mode::Star);
        let sx = AlgebraElement::basis(&d, s.clone(), Mode::Star)
            .mul(&d, &x)
            .unwrap();
        let coeff = sx.coefficient(&s);
        assert_eq!(
            coeff,
            RatFun::monomial(ExpVec(vec![0, -1]), Scalar::q_pow(-2))
        );
    }

    #[test]
    fn associativity_spot_check() {
        let d = RootDatum::new(Label::A2);
        for mode in [Mode::Straight, Mode::Star] {
            let s0 = AlgebraElement::basis(
                &d,
                AffineWeylElement::generator(&d, 0).unwrap(),
                mode,
            );
            let s1 = AlgebraElement::basis(
                &d,
                AffineWeylElement::generator(&d, 1).unwrap(),
                mode,
            );
            let f = AlgebraElement::scalar_fn(
                &d,
                RatFun::atom_inverse(3, Scalar::q(), ExpVec(vec![0, 1, 0])).unwrap(),
                mode,
            );
            let ab_c = s0.mul(&d, &s1).unwrap().mul(&d, &f).unwrap();
            let a_bc = s0.mul(&d, &s1.mul(&d, &f).unwrap()).unwrap();
            assert_eq!(ab_c, a_bc, "{mode}");
        }
    }

    #[test]
    fn zeta_is_central() {
        let d = RootDatum::new(Label::A2);
        for mode in [Mode::Straight, Mode::Star] {
            let zeta = AlgebraElement::zeta_pow(&d, 1, mode);
            for word in [vec![0], vec![1], vec![0, 1, 2]] {
                let w = AffineWeylElement::from_word(&d, &word).unwrap();
                let b = AlgebraElement::basis(&d, w, mode);
                assert_eq!(
                    b.mul(&d, &zeta).unwrap(),
                    zeta.mul(&d, &b).unwrap(),
                    "{mode} {word:?}"
                );
            }
        }
    }

    #[test]
    fn mode_mismatch_is_rejected() {
        let d = RootDatum::new(Label::A1);
        let a = AlgebraElement::identity(&d, Mode::Straight);
        let b = AlgebraElement::identity(&d, Mode::Star);
        assert!(matches!(a.mul(&d, &b), Err(Error::Domain(_))));
    }

    #[test]
    fn capacity_guard_trips() {
        let d = RootDatum::new(Label::A1);
        let s0 = AlgebraElement::basis(
            &d,
            AffineWeylElement::generator(&d, 0).unwrap(),
            Mode::Straight,
        );
        let s1 = AlgebraElement::basis(
            &d,
            AffineWeylElement::generator(&d, 1).unwrap(),
            Mode::Straight,
        );
        let sum = s0.add(&s1).unwrap();
        let sq = sum.mul(&d, &sum).unwrap();
        // support {e, s0 s1, s1 s0}; with bound 2 the same product must trip
        assert_eq!(sq.support_size(), 3);
        assert!(matches!(
            sum.mul_bounded(&d, &sum, 2),
            Err(Error::Capacity { .. })
        ));
    }

    #[test]
    fn left_scale_matches_identity_product() {
        let d = RootDatum::new(Label::A2);
        let f = RatFun::atom_inverse(3, Scalar::one(), ExpVec(vec![0, 1, 1])).unwrap();
        let w = AffineWeylElement::from_word(&d, &[0, 2]).unwrap();
        let x = AlgebraElement::basis(&d, w, Mode::Straight);
        let via_mul = AlgebraElement::scalar_fn(&d, f.clone(), Mode::Straight)
            .mul(&d, &x)
            .unwrap();
        assert_eq!(x.scale_left(&f), via_mul);
    }

    #[test]
    fn binomial_square_expands() {
        // (a+b)^2 = a^2 + ab + ba + b^2 with a = [s1], b = X [e]
        let d = RootDatum::new(Label::A1);
        let a = AlgebraElement::basis(
            &d,
            AffineWeylElement::generator(&d, 1).unwrap(),
            Mode::Straight,
        );
        let b = AlgebraElement::scalar_fn(&d, x_fn(&d), Mode::Straight);
        let lhs = a.add(&b).unwrap();
        let lhs = lhs.mul(&d, &lhs.clone()).unwrap();
        let mut rhs = a.mul(&d, &a).unwrap();
        rhs = rhs.add(&a.mul(&d, &b).unwrap()).unwrap();
        rhs = rhs.add(&b.mul(&d, &a).unwrap()).unwrap();
        rhs = rhs.add(&b.mul(&d, &b).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
    }
}
