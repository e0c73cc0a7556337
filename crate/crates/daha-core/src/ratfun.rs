//! Rational functions on the affine torus with controlled denominators.
//!
//! A [`RatFun`] is num / prod_i (1 - c_i t^{mu_i})^{m_i}: a Laurent
//! polynomial numerator over Q(v) divided by a multiset of binomial atoms.
//! Invariants:
//!
//! * every atom has a nonzero exponent mu oriented lex-positive (flipping
//!   1 - c t^mu = -c t^mu (1 - c^{-1} t^{-mu}) and absorbing the unit into
//!   the numerator) and a nonzero scalar coefficient;
//! * the numerator is divisible by no atom (division is tested exactly in an
//!   adapted unimodular basis, so reduction is canonical);
//! * equality is decided by cross multiplication, never by factoring.
//!
//! Orders and residues along a hypersurface {t^{mu0} = z} (mu0 primitive)
//! are computed exactly: the exponent lattice is rotated by a unimodular
//! matrix taking mu0 to the first basis vector, the function becomes a
//! univariate rational function in x = t^{mu0} over Laurent polynomials in
//! the remaining coordinates, and orders come from synthetic division by
//! (x - z). Residues of simple poles stay inside the binomial class. The
//! completion is deterministic, so residues along a common hypersurface are
//! directly comparable.

use crate::error::{Error, Result};
use crate::laurent::{ExpVec, LaurentPoly};
use crate::rootdata::{AffineRoot, RootDatum};
use crate::scalar::Scalar;
use crate::weyl::AffineWeylElement;
use std::collections::BTreeMap;
use std::fmt;

/// Sentinel order of the zero function along any hypersurface.
pub const ORD_INFINITY: i64 = i64::MAX / 4;

/// Substitution mode of the ambient twisted algebra.
///
/// Straight mode transports exponents by the level-coweight action alone.
/// Star mode conjugates that by the grading character t^l -> q^{<rho_hat,l>},
/// which multiplies the image monomial by the q-power of the pairing drop.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Mode {
    Straight,
    Star,
}

impl Mode {
    pub fn flip(self) -> Mode {
        match self {
            Mode::Straight => Mode::Star,
            Mode::Star => Mode::Straight,
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Straight => write!(f, "straight"),
            Mode::Star => write!(f, "star"),
        }
    }
}

/// A denominator factor (1 - coeff * t^exp)^mult.
/// Invariants: exp nonzero and lex-positive, coeff nonzero, mult >= 1.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct DenAtom {
    pub coeff: Scalar,
    pub exp: ExpVec,
    pub mult: usize,
}

impl DenAtom {
    /// The atom as a Laurent polynomial (single power).
    fn poly_once(&self, width: usize) -> LaurentPoly {
        let mut p = LaurentPoly::one(width);
        p.add_term(self.exp.clone(), -&self.coeff);
        p
    }
}

/// A hypersurface {t^exp = value} with exp primitive and lex-positive.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Hypersurface {
    exp: ExpVec,
    value: Scalar,
}

impl Hypersurface {
    /// Normalize: exp must be primitive; a lex-negative exp is flipped
    /// together with inverting the value.
    pub fn new(exp: ExpVec, value: Scalar) -> Result<Hypersurface> {
        if value.is_zero() {
            return Err(Error::Domain("hypersurface with value 0".into()));
        }
        let (prim, content) = exp.primitive_part()?;
        if content != 1 {
            return Err(Error::Domain(format!(
                "hypersurface exponent {exp} is not primitive"
            )));
        }
        if prim.is_lex_positive() {
            Ok(Hypersurface { exp: prim, value })
        } else {
            Ok(Hypersurface {
                exp: prim.neg(),
                value: value.inv()?,
            })
        }
    }

    /// The hypersurface attached to an affine root at a configured value.
    /// In straight mode the locus is {t^{chi(alpha)} = z} for the character
    /// exponent chi of the root; in star mode the value picks up the factor
    /// q^{1 - <rho_hat, chi>} so that the family stays equivariant under the
    /// star substitution and the simple-root loci keep their plain value.
    pub fn from_root(
        datum: &RootDatum,
        alpha: &AffineRoot,
        value: &Scalar,
        mode: Mode,
    ) -> Result<Hypersurface> {
        let chi = datum.root_character(alpha)?;
        let value = match mode {
            Mode::Straight => value.clone(),
            Mode::Star => {
                let m = datum.rho_hat_pair(&chi);
                value * &Scalar::q_pow(1 - m)
            }
        };
        Hypersurface::new(chi, value)
    }

    pub fn exp(&self) -> &ExpVec {
        &self.exp
    }

    pub fn value(&self) -> &Scalar {
        &self.value
    }
}

impl fmt::Display for Hypersurface {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{t^{} = {}}}", self.exp, self.value)
    }
}

/// Rational function with binomial-atom denominator.
#[derive(Debug, Clone)]
pub struct RatFun {
    width: usize,
    num: LaurentPoly,
    den: Vec<DenAtom>,
}

impl RatFun {
    pub fn zero(width: usize) -> RatFun {
        RatFun {
            width,
            num: LaurentPoly::zero(width),
            den: Vec::new(),
        }
    }

    pub fn one(width: usize) -> RatFun {
        RatFun::from_poly(LaurentPoly::one(width))
    }

    pub fn constant(width: usize, c: Scalar) -> RatFun {
        RatFun::from_poly(LaurentPoly::monomial(ExpVec::zero(width), c))
    }

    pub fn monomial(exp: ExpVec, c: Scalar) -> RatFun {
        RatFun::from_poly(LaurentPoly::monomial(exp, c))
    }

    pub fn from_poly(num: LaurentPoly) -> RatFun {
        RatFun {
            width: num.width(),
            num,
            den: Vec::new(),
        }
    }

    /// Build num / prod (1 - c t^mu)^m, normalizing and reducing.
    pub fn from_parts(
        num: LaurentPoly,
        den: impl IntoIterator<Item = (Scalar, ExpVec, usize)>,
    ) -> Result<RatFun> {
        let width = num.width();
        let mut f = RatFun {
            width,
            num,
            den: Vec::new(),
        };
        for (coeff, exp, mult) in den {
            f.push_atoms(coeff, exp, mult)?;
        }
        f.normalize();
        Ok(f)
    }

    /// 1 / (1 - c t^mu).
    pub fn atom_inverse(width: usize, coeff: Scalar, exp: ExpVec) -> Result<RatFun> {
        RatFun::from_parts(LaurentPoly::one(width), [(coeff, exp, 1)])
    }

    fn push_atoms(&mut self, coeff: Scalar, exp: ExpVec, mult: usize) -> Result<()> {
        if mult == 0 || coeff.is_zero() {
            // empty power, or (1 - 0 t^mu)^m = 1
            return Ok(());
        }
        if exp.is_zero() {
            // scalar factor (1 - c)^m
            let s = &Scalar::one() - &coeff;
            if s.is_zero() {
                return Err(Error::Domain(
                    "denominator factor (1 - c t^0) with c = 1 is zero".into(),
                ));
            }
            let inv = s.inv()?.pow(mult as i64)?;
            self.num = self.num.scale(&inv);
            return Ok(());
        }
        if exp.is_lex_positive() {
            self.den.push(DenAtom { coeff, exp, mult });
        } else {
            // 1/(1 - c t^mu) = (-c^{-1} t^{-mu}) / (1 - c^{-1} t^{-mu})
            let cinv = coeff.inv()?;
            let unit_exp = exp.neg();
            let unit_coeff = -&cinv;
            for _ in 0..mult {
                self.num = self.num.mul_monomial(&unit_exp, &unit_coeff);
            }
            self.den.push(DenAtom {
                coeff: cinv,
                exp: unit_exp,
                mult,
            });
        }
        Ok(())
    }

    /// Merge equal atoms, sort, and cancel atom factors out of the numerator.
    fn normalize(&mut self) {
        if self.num.is_zero() {
            self.den.clear();
            return;
        }
        let mut merged: BTreeMap<(ExpVec, Scalar), usize> = BTreeMap::new();
        for a in self.den.drain(..) {
            *merged.entry((a.exp, a.coeff)).or_insert(0) += a.mult;
        }
        let mut den = Vec::new();
        for ((exp, coeff), mut mult) in merged {
            while mult > 0 {
                match divide_exact(&self.num, &coeff, &exp) {
                    Some(q) => {
                        self.num = q;
                        mult -= 1;
                    }
                    None => break,
                }
            }
            if mult > 0 {
                den.push(DenAtom { coeff, exp, mult });
            }
        }
        self.den = den;
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn num(&self) -> &LaurentPoly {
        &self.num
    }

    pub fn den_atoms(&self) -> &[DenAtom] {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_empty()
    }

    /// The denominator expanded as a Laurent polynomial.
    pub fn den_expanded(&self) -> LaurentPoly {
        let mut d = LaurentPoly::one(self.width);
        for a in &self.den {
            let p = a.poly_once(self.width);
            for _ in 0..a.mult {
                d = d.mul(&p);
            }
        }
        d
    }

    pub fn add(&self, rhs: &RatFun) -> RatFun {
        assert_eq!(self.width, rhs.width, "width mismatch");
        RatFun::sum(self.width, [self, rhs])
    }

    /// Multiway sum over one common denominator (per atom key, the max
    /// multiplicity across summands) with a single final normalization.
    /// Much cheaper than folding pairwise adds, which re-normalize the
    /// growing partial sum at every step.
    pub fn sum<'a, I>(width: usize, items: I) -> RatFun
    where
        I: IntoIterator<Item = &'a RatFun>,
    {
        let items: Vec<&RatFun> = items.into_iter().collect();
        let mut common: BTreeMap<(ExpVec, Scalar), usize> = BTreeMap::new();
        for f in &items {
            assert_eq!(f.width, width, "width mismatch");
            let mut local: BTreeMap<(&ExpVec, &Scalar), usize> = BTreeMap::new();
            for a in &f.den {
                *local.entry((&a.exp, &a.coeff)).or_insert(0) += a.mult;
            }
            for ((exp, coeff), mult) in local {
                let e = common
                    .entry((exp.clone(), coeff.clone()))
                    .or_insert(0);
                *e = (*e).max(mult);
            }
        }
        let mut num = LaurentPoly::zero(width);
        for f in &items {
            let mut cof = f.num.clone();
            for ((exp, coeff), mult) in &common {
                let have: usize = f
                    .den
                    .iter()
                    .filter(|a| &a.exp == exp && &a.coeff == coeff)
                    .map(|a| a.mult)
                    .sum();
                if have < *mult {
                    let atom = DenAtom {
                        coeff: coeff.clone(),
                        exp: exp.clone(),
                        mult: 1,
                    }
                    .poly_once(width);
                    for _ in have..*mult {
                        cof = cof.mul(&atom);
                    }
                }
            }
            num = num.add(&cof);
        }
        let mut f = RatFun {
            width,
            num,
            den: common
                .into_iter()
                .map(|((exp, coeff), mult)| DenAtom { coeff, exp, mult })
                .collect(),
        };
        f.normalize();
        f
    }

    pub fn neg(&self) -> RatFun {
        RatFun {
            width: self.width,
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, rhs: &RatFun) -> RatFun {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &RatFun) -> RatFun {
        assert_eq!(self.width, rhs.width, "width mismatch");
        let mut f = RatFun {
            width: self.width,
            num: self.num.mul(&rhs.num),
            den: self.den.iter().chain(&rhs.den).cloned().collect(),
        };
        f.normalize();
        f
    }

    pub fn scale(&self, c: &Scalar) -> RatFun {
        if c.is_zero() {
            return RatFun::zero(self.width);
        }
        RatFun {
            width: self.width,
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn mul_poly(&self, p: &LaurentPoly) -> RatFun {
        let mut f = RatFun {
            width: self.width,
            num: self.num.mul(p),
            den: self.den.clone(),
        };
        f.normalize();
        f
    }

    /// Multiplicative inverse. The numerator must be expressible as a unit
    /// monomial times binomial atoms; the factorization is found greedily
    /// (peel the lex-lowest term, guess the atom from the next-lowest term).
    /// Genuine members of the class with clustered exponents can defeat the
    /// greedy search; that surfaces as a representation error, never as a
    /// wrong answer.
    pub fn inv(&self) -> Result<RatFun> {
        if self.is_zero() {
            return Err(Error::Domain("inverse of the zero function".into()));
        }
        let mut new_den: Vec<DenAtom> = Vec::new();
        let mut rest = self.num.clone();
        loop {
            if let Some((e, c)) = rest.is_monomial() {
                let e = e.clone();
                let c = c.clone();
                // inverse = c^{-1} t^{-e} * old_den / new_den
                let mut num = LaurentPoly::monomial(e.neg(), c.inv()?);
                for a in &self.den {
                    let p = a.poly_once(self.width);
                    for _ in 0..a.mult {
                        num = num.mul(&p);
                    }
                }
                let mut f = RatFun {
                    width: self.width,
                    num,
                    den: new_den,
                };
                f.normalize();
                return Ok(f);
            }
            // lowest term e0 (canonical order), next-lowest e1
            let mut it = rest.terms();
            let (e0, c0) = it.next().expect("nonzero");
            let (e1, c1) = it.next().expect("at least two terms");
            let mu = e1.sub(e0);
            let c = -&(c1 / c0);
            drop(it);
            let (c0, e0) = (c0.clone(), e0.clone());
            // rest = c0 t^{e0} (1 - c t^mu) * q  =>  try the division
            let shifted = rest.mul_monomial(&e0.neg(), &c0.inv()?);
            match divide_exact(&shifted, &c, &mu) {
                Some(q) => {
                    new_den.push(DenAtom {
                        coeff: c,
                        exp: mu,
                        mult: 1,
                    });
                    rest = q.mul_monomial(&e0, &c0);
                }
                None => {
                    return Err(Error::Representation(format!(
                        "numerator with {} terms does not factor into binomial atoms greedily",
                        rest.num_terms()
                    )));
                }
            }
        }
    }

    /// Apply a monomial substitution t^e -> unit(e) t^{image(e)} given by an
    /// invertible linear map on exponents. Both numerator terms and
    /// denominator atoms are transported; orientations are re-normalized.
    pub fn substitute_monomial(
        &self,
        f: impl Fn(&ExpVec) -> (ExpVec, Scalar),
    ) -> Result<RatFun> {
        let num = self.num.map_exponents(&f);
        let den: Vec<(Scalar, ExpVec, usize)> = self
            .den
            .iter()
            .map(|a| {
                let (img, unit) = f(&a.exp);
                (&a.coeff * &unit, img, a.mult)
            })
            .collect();
        RatFun::from_parts(num, den)
    }

    /// The substitution action of an affine Weyl element in the given mode.
    pub fn weyl_substitute(
        &self,
        datum: &RootDatum,
        w: &AffineWeylElement,
        mode: Mode,
    ) -> RatFun {
        let sub = |e: &ExpVec| -> (ExpVec, Scalar) {
            let img = w.act_exponent(datum, e);
            let unit = match mode {
                Mode::Straight => Scalar::one(),
                Mode::Star => {
                    let k = datum.rho_hat_pair(&img) - datum.rho_hat_pair(e);
                    Scalar::q_pow(k)
                }
            };
            (img, unit)
        };
        self.substitute_monomial(sub)
            .expect("linear substitution stays in class")
    }

    /// Coefficientwise grading twist t^l -> q^{k <rho_hat, l>} t^l
    /// (k = +1 or -1); the map underlying the mode flip isomorphism.
    pub fn grading_twist(&self, datum: &RootDatum, k: i64) -> RatFun {
        self.substitute_monomial(|e| {
            (e.clone(), Scalar::q_pow(k * datum.rho_hat_pair(e)))
        })
        .expect("diagonal substitution stays in class")
    }

    /// Order of vanishing along the hypersurface (negative = pole order,
    /// ORD_INFINITY for the zero function).
    pub fn ord_along(&self, h: &Hypersurface) -> i64 {
        if self.is_zero() {
            return ORD_INFINITY;
        }
        let adapted = Adapted::for_direction(h.exp());
        let num_x = adapted.slices(&self.num);
        let num_ord = x_order_at(&num_x, h.value(), self.width);
        let mut den_ord: i64 = 0;
        for a in &self.den {
            let (prim, d) = a.exp.primitive_part().expect("atom exp nonzero");
            if &prim == h.exp() {
                let on_locus = &a.coeff * &h.value().pow(d).expect("nonzero value");
                if on_locus.is_one() {
                    den_ord += a.mult as i64;
                }
            }
        }
        num_ord - den_ord
    }

    /// Residue along a hypersurface. Zero if the function is regular there;
    /// domain error on a pole of order >= 2. The result is a rational
    /// function in the complementary coordinates of the deterministic
    /// adapted basis, re-embedded in the ambient exponent lattice, so
    /// residues along the same hypersurface are directly comparable.
    pub fn residue_along(&self, h: &Hypersurface) -> Result<RatFun> {
        let ord = self.ord_along(h);
        if ord >= 0 {
            return Ok(RatFun::zero(self.width));
        }
        if ord <= -2 {
            return Err(Error::Domain(format!(
                "residue along {h} of a pole of order {}",
                -ord
            )));
        }
        let adapted = Adapted::for_direction(h.exp());
        let z = h.value();

        // numerator: strip (x - z)^k, evaluate the cofactor at x = z
        let mut num_x = adapted.slices(&self.num);
        let mut scalar_den = Scalar::one();
        let mut rest_atoms: Vec<(Scalar, ExpVec, usize)> = Vec::new();
        loop {
            let (q, r) = divide_x_minus_z(&num_x, z, self.width);
            if r.is_zero() {
                num_x = q;
            } else {
                break;
            }
        }
        // eval_slices_at leaves exponents in adapted coordinates; re-embed.
        let mut num_at_z = LaurentPoly::zero(self.width);
        for (e, c) in eval_slices_at(&num_x, z, self.width).terms() {
            num_at_z.add_term(adapted.rotate_back(e), c.clone());
        }

        for a in &self.den {
            let (prim, d) = a.exp.primitive_part().expect("atom exp nonzero");
            if &prim == h.exp() {
                let on = &a.coeff * &z.pow(d).expect("nonzero value");
                if on.is_one() {
                    // 1 - c x^d = (x - z) * Q(x) with Q(z) = -c d z^{d-1}
                    let qz = -&(&(&a.coeff * &Scalar::from_int(d)) * &z.pow(d - 1)?);
                    scalar_den = &scalar_den * &qz.pow(a.mult as i64)?;
                } else {
                    let at_z = &Scalar::one() - &on;
                    scalar_den = &scalar_den * &at_z.pow(a.mult as i64)?;
                }
            } else {
                // transversal atom: substitute x = z, keep the y part
                let rotated = adapted.rotate(&a.exp);
                let xd = rotated.0[0];
                let mut y_exp = rotated.clone();
                y_exp.0[0] = 0;
                let coeff = &a.coeff * &z.pow(xd)?;
                let back = adapted.rotate_back(&y_exp);
                rest_atoms.push((coeff, back, a.mult));
            }
        }
        let mut res = RatFun::from_parts(num_at_z, rest_atoms)?;
        res = res.scale(&scalar_den.inv()?);
        Ok(res)
    }
}

impl PartialEq for RatFun {
    /// Cross multiplication: a/D == b/E iff a*E == b*D as polynomials.
    fn eq(&self, other: &RatFun) -> bool {
        if self.width != other.width {
            return false;
        }
        self.num.mul(&other.den_expanded()) == other.num.mul(&self.den_expanded())
    }
}

impl Eq for RatFun {}

impl fmt::Display for RatFun {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_empty() {
            return write!(f, "{}", self.num);
        }
        write!(f, "({}) / [", self.num)?;
        for (i, a) in self.den.iter().enumerate() {
            if i > 0 {
                write!(f, " * ")?;
            }
            write!(f, "(1 - [{}]*t^{})", a.coeff, a.exp)?;
            if a.mult > 1 {
                write!(f, "^{}", a.mult)?;
            }
        }
        write!(f, "]")
    }
}

/// Deterministic unimodular change of exponent basis sending a primitive
/// direction to the first coordinate.
struct Adapted {
    /// new = u * old
    u: Vec<Vec<i64>>,
    /// old = u_inv * new
    u_inv: Vec<Vec<i64>>,
}

impl Adapted {
    /// Row-reduce mu0 to e_1 by integer row operations (Euclid on entries),
    /// accumulating the operations in u and their inverses in u_inv.
    fn for_direction(mu0: &ExpVec) -> Adapted {
        let n = mu0.width();
        let mut v: Vec<i64> = mu0.0.clone();
        let mut u: Vec<Vec<i64>> = (0..n)
            .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
            .collect();
        let mut u_inv = u.clone();

        // row_k -= q row_0 on u  <=>  col_0 += q col_k on u_inv
        // swap rows i,j on u     <=>  swap cols i,j on u_inv
        for k in 1..n {
            while v[k] != 0 {
                if v[0] == 0 {
                    v.swap(0, k);
                    u.swap(0, k);
                    for row in u_inv.iter_mut() {
                        row.swap(0, k);
                    }
                    continue;
                }
                let q = v[k].div_euclid(v[0]);
                v[k] -= q * v[0];
                for j in 0..n {
                    let delta = q * u[0][j];
                    u[k][j] -= delta;
                }
                for row in u_inv.iter_mut() {
                    let delta = q * row[k];
                    row[0] += delta;
                }
                if v[k] != 0 {
                    v.swap(0, k);
                    u.swap(0, k);
                    for row in u_inv.iter_mut() {
                        row.swap(0, k);
                    }
                }
            }
        }
        if v[0] < 0 {
            v[0] = -v[0];
            for x in u[0].iter_mut() {
                *x = -*x;
            }
            for row in u_inv.iter_mut() {
                row[0] = -row[0];
            }
        }
        debug_assert_eq!(v[0], 1, "direction must be primitive");
        Adapted { u, u_inv }
    }

    fn rotate(&self, e: &ExpVec) -> ExpVec {
        ExpVec(
            self.u
                .iter()
                .map(|row| row.iter().zip(&e.0).map(|(a, b)| a * b).sum())
                .collect(),
        )
    }

    fn rotate_back(&self, e: &ExpVec) -> ExpVec {
        ExpVec(
            self.u_inv
                .iter()
                .map(|row| row.iter().zip(&e.0).map(|(a, b)| a * b).sum())
                .collect(),
        )
    }

    /// Slice a polynomial by the x-degree (first adapted coordinate). The
    /// slice polynomials stay in adapted coordinates, with the first
    /// coordinate zeroed; callers rotate back when re-embedding.
    fn slices(&self, p: &LaurentPoly) -> BTreeMap<i64, LaurentPoly> {
        let mut out: BTreeMap<i64, LaurentPoly> = BTreeMap::new();
        for (e, c) in p.terms() {
            let r = self.rotate(e);
            let x = r.0[0];
            let mut y = r;
            y.0[0] = 0;
            out.entry(x)
                .or_insert_with(|| LaurentPoly::zero(p.width()))
                .add_term(y, c.clone());
        }
        out.retain(|_, p| !p.is_zero());
        out
    }
}

/// Order of vanishing at x = z of a nonzero sliced polynomial: the number of
/// times (x - z) divides it. Slices hold the y-parts per x-degree.
fn x_order_at(slices: &BTreeMap<i64, LaurentPoly>, z: &Scalar, width: usize) -> i64 {
    let mut cur = slices.clone();
    let mut k = 0;
    loop {
        let (q, r) = divide_x_minus_z(&cur, z, width);
        if r.is_zero() {
            k += 1;
            cur = q;
            if cur.is_empty() {
                // the polynomial was a pure power of (x - z)?? impossible:
                // quotient of a nonzero polynomial is smaller but nonzero
                // until the constant survives; an empty quotient means the
                // input was zero, which callers exclude.
                return k;
            }
        } else {
            return k;
        }
    }
}

/// Synthetic division of a sliced polynomial by (x - z):
/// returns (quotient slices, remainder in y only).
fn divide_x_minus_z(
    slices: &BTreeMap<i64, LaurentPoly>,
    z: &Scalar,
    width: usize,
) -> (BTreeMap<i64, LaurentPoly>, LaurentPoly) {
    if slices.is_empty() {
        return (BTreeMap::new(), LaurentPoly::zero(width));
    }
    let lo = *slices.keys().next().unwrap();
    let hi = *slices.keys().next_back().unwrap();
    // peel the monomial unit x^{lo}: order at z != 0 is unaffected
    let coeff_at = |k: i64| -> LaurentPoly {
        slices
            .get(&k)
            .cloned()
            .unwrap_or_else(|| LaurentPoly::zero(width))
    };
    // coefficients p_0..p_d of x^{lo} * (p_0 + p_1 x + ... + p_d x^d)
    let d = (hi - lo) as usize;
    let mut quot: Vec<LaurentPoly> = vec![LaurentPoly::zero(width); d.max(1)];
    // synthetic division from the top: q_{d-1} = p_d, q_{k-1} = p_k + z q_k
    let mut carry = LaurentPoly::zero(width);
    for k in (0..=d).rev() {
        let pk = coeff_at(lo + k as i64);
        let acc = pk.add(&carry.scale(z));
        if k == 0 {
            // remainder = acc
            let mut q_slices = BTreeMap::new();
            for (i, qp) in quot.iter().enumerate() {
                if !qp.is_zero() {
                    q_slices.insert(lo + i as i64, qp.clone());
                }
            }
            return (q_slices, acc);
        }
        quot[k - 1] = acc.clone();
        carry = acc;
    }
    unreachable!()
}

/// Evaluate a sliced polynomial at x = z, leaving a y-polynomial.
fn eval_slices_at(
    slices: &BTreeMap<i64, LaurentPoly>,
    z: &Scalar,
    width: usize,
) -> LaurentPoly {
    let mut acc = LaurentPoly::zero(width);
    for (k, p) in slices {
        acc = acc.add(&p.scale(&z.pow(*k).expect("nonzero value")));
    }
    acc
}

/// Exact division of p by (1 - c t^mu); None if not divisible.
/// Works in the adapted basis of mu's primitive direction, where the atom is
/// univariate: 1 - c x^d.
fn divide_exact(p: &LaurentPoly, c: &Scalar, mu: &ExpVec) -> Option<LaurentPoly> {
    if p.is_zero() {
        return Some(p.clone());
    }
    let (prim, d) = mu.primitive_part().ok()?;
    let adapted = Adapted::for_direction(&prim);
    let slices = adapted.slices(p);
    let lo = *slices.keys().next().unwrap();
    let hi = *slices.keys().next_back().unwrap();
    if hi - lo < d {
        return None;
    }
    let width = p.width();
    let coeff_at = |k: i64| -> LaurentPoly {
        slices
            .get(&k)
            .cloned()
            .unwrap_or_else(|| LaurentPoly::zero(width))
    };
    // q_k = p_k + c q_{k-d}, ascending; then the top d equations must close.
    let mut q: BTreeMap<i64, LaurentPoly> = BTreeMap::new();
    let q_at = |q: &BTreeMap<i64, LaurentPoly>, k: i64| -> LaurentPoly {
        q.get(&k).cloned().unwrap_or_else(|| LaurentPoly::zero(width))
    };
    for k in lo..=(hi - d) {
        let val = coeff_at(k).add(&q_at(&q, k - d).scale(c));
        if !val.is_zero() {
            q.insert(k, val);
        }
    }
    for k in (hi - d + 1)..=hi {
        // remaining equations: p_k + c q_{k-d} = 0
        let val = coeff_at(k).add(&q_at(&q, k - d).scale(c));
        if !val.is_zero() {
            return None;
        }
    }
    // reassemble in the original basis
    let mut out = LaurentPoly::zero(width);
    for (k, yp) in q {
        for (ye, coeff) in yp.terms() {
            let mut full = ye.clone();
            full.0[0] = k;
            out.add_term(adapted.rotate_back(&full), coeff.clone());
        }
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootdata::Label;

    fn x_exp() -> ExpVec {
        // A1 coroot character (0, 1)
        ExpVec(vec![0, 1])
    }

    fn one_minus_x_inv() -> RatFun {
        // 1 / (1 - X)
        RatFun::atom_inverse(2, Scalar::one(), x_exp()).unwrap()
    }

    #[test]
    fn reduction_cancels_common_atoms() {
        // (1 - X^2) / (1 - X) = 1 + X
        let mut num = LaurentPoly::one(2);
        num.add_term(ExpVec(vec![0, 2]), -&Scalar::one());
        let f = RatFun::from_parts(num, [(Scalar::one(), x_exp(), 1)]).unwrap();
        assert!(f.is_polynomial());
        let mut expect = LaurentPoly::one(2);
        expect.add_term(x_exp(), Scalar::one());
        assert_eq!(f.num(), &expect);
    }

    #[test]
    fn orientation_flip_absorbs_unit() {
        // 1/(1 - X^{-1}) = -X/(1 - X)
        let f = RatFun::atom_inverse(2, Scalar::one(), ExpVec(vec![0, -1])).unwrap();
        let expect = RatFun::from_parts(
            LaurentPoly::monomial(x_exp(), -&Scalar::one()),
            [(Scalar::one(), x_exp(), 1)],
        )
        .unwrap();
        assert_eq!(f, expect);
    }

    #[test]
    fn cross_multiplication_equality() {
        // 1/(1 - X) == (1 + X)/(1 - X^2)
        let lhs = one_minus_x_inv();
        let mut num = LaurentPoly::one(2);
        num.add_term(x_exp(), Scalar::one());
        let rhs = RatFun::from_parts(num, [(Scalar::one(), ExpVec(vec![0, 2]), 1)]).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn arithmetic_spot_checks() {
        let f = one_minus_x_inv();
        // f - f = 0
        assert!(f.sub(&f).is_zero());
        // f * (1 - X) = 1
        let atom = RatFun::from_parts(
            {
                let mut p = LaurentPoly::one(2);
                p.add_term(x_exp(), -&Scalar::one());
                p
            },
            [],
        )
        .unwrap();
        assert_eq!(f.mul(&atom), RatFun::one(2));
        // 1/(1-X) + X/(1-X)... = (1+X)/(1-X); then minus 1/(1-X) twice
        let g = f.mul_poly(&LaurentPoly::monomial(x_exp(), Scalar::one()));
        let sum = f.add(&g);
        let direct = RatFun::from_parts(
            {
                let mut p = LaurentPoly::one(2);
                p.add_term(x_exp(), Scalar::one());
                p
            },
            [(Scalar::one(), x_exp(), 1)],
        )
        .unwrap();
        assert_eq!(sum, direct);
    }

    #[test]
    fn inverse_greedy_roundtrip() {
        // ((1 - qX)/(1 - X))^{-1} = (1 - X)/(1 - qX)
        let mut num = LaurentPoly::one(2);
        num.add_term(x_exp(), -&Scalar::q());
        let f = RatFun::from_parts(num, [(Scalar::one(), x_exp(), 1)]).unwrap();
        let g = f.inv().unwrap();
        assert_eq!(f.mul(&g), RatFun::one(2));
    }

    #[test]
    fn frozen_residue_of_simple_pole() {
        // Res_{X=1} 1/(1 - X) = -1
        let h = Hypersurface::new(x_exp(), Scalar::one()).unwrap();
        let f = one_minus_x_inv();
        assert_eq!(f.ord_along(&h), -1);
        let res = f.residue_along(&h).unwrap();
        assert_eq!(res, RatFun::constant(2, -&Scalar::one()));
    }

    #[test]
    fn frozen_residue_opposite_orientation() {
        // Res_{X=1} X/(X - 1) = +1; X/(X-1) = -X/(1-X)
        let h = Hypersurface::new(x_exp(), Scalar::one()).unwrap();
        let f = RatFun::from_parts(
            LaurentPoly::monomial(x_exp(), -&Scalar::one()),
            [(Scalar::one(), x_exp(), 1)],
        )
        .unwrap();
        let res = f.residue_along(&h).unwrap();
        assert_eq!(res, RatFun::constant(2, Scalar::one()));
    }

    #[test]
    fn ord_counts_zeros_and_poles() {
        // (1 - X)^2 / (1 - qX): ord 2 at {X=1}, ord -1 at {X=q^{-1}}
        let mut one_minus_x = LaurentPoly::one(2);
        one_minus_x.add_term(x_exp(), -&Scalar::one());
        let num = one_minus_x.mul(&one_minus_x);
        let f = RatFun::from_parts(num, [(Scalar::q(), x_exp(), 1)]).unwrap();
        let h1 = Hypersurface::new(x_exp(), Scalar::one()).unwrap();
        let hq = Hypersurface::new(x_exp(), Scalar::q_pow(-1)).unwrap();
        assert_eq!(f.ord_along(&h1), 2);
        assert_eq!(f.ord_along(&hq), -1);
        assert_eq!(f.residue_along(&h1).unwrap(), RatFun::zero(2));
        assert!(f.residue_along(&hq).is_ok());
    }

    #[test]
    fn double_pole_is_a_domain_error() {
        let f = RatFun::from_parts(
            LaurentPoly::one(2),
            [(Scalar::one(), x_exp(), 2)],
        )
        .unwrap();
        let h = Hypersurface::new(x_exp(), Scalar::one()).unwrap();
        assert_eq!(f.ord_along(&h), -2);
        assert!(matches!(f.residue_along(&h), Err(Error::Domain(_))));
    }

    #[test]
    fn multivariate_residue_keeps_transversal_atoms() {
        // A2 width 3: f = 1/((1 - t^{a1v})(1 - q t^{theta_v}));
        // along {t^{a1v} = 1}: residue = -1/(1 - q t^{a2v})
        let a1 = ExpVec(vec![0, 1, 0]);
        let a2 = ExpVec(vec![0, 0, 1]);
        let theta = ExpVec(vec![0, 1, 1]);
        let f = RatFun::from_parts(
            LaurentPoly::one(3),
            [(Scalar::one(), a1.clone(), 1), (Scalar::q(), theta, 1)],
        )
        .unwrap();
        let h = Hypersurface::new(a1, Scalar::one()).unwrap();
        let res = f.residue_along(&h).unwrap();
        let expect = RatFun::from_parts(
            LaurentPoly::monomial(ExpVec::zero(3), -&Scalar::one()),
            [(Scalar::q(), a2, 1)],
        )
        .unwrap();
        assert_eq!(res, expect);
    }

    #[test]
    fn residue_additivity() {
        // residues along a fixed hypersurface are additive
        let h = Hypersurface::new(x_exp(), Scalar::one()).unwrap();
        let f = one_minus_x_inv();
        let g = RatFun::from_parts(
            LaurentPoly::monomial(x_exp(), Scalar::r()),
            [(Scalar::one(), x_exp(), 1)],
        )
        .unwrap();
        let lhs = f.add(&g).residue_along(&h).unwrap();
        let rhs = f
            .residue_along(&h)
            .unwrap()
            .add(&g.residue_along(&h).unwrap());
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn straight_substitution_transports_atoms() {
        // In A1, s_1 sends 1/(1 - X) to 1/(1 - X^{-1}) = -X/(1 - X)
        let d = RootDatum::new(Label::A1);
        let s1 = AffineWeylElement::generator(&d, 1).unwrap();
        let f = one_minus_x_inv();
        let img = f.weyl_substitute(&d, &s1, Mode::Straight);
        let expect = RatFun::from_parts(
            LaurentPoly::monomial(x_exp(), -&Scalar::one()),
            [(Scalar::one(), x_exp(), 1)],
        )
        .unwrap();
        assert_eq!(img, expect);
    }

    #[test]
    fn star_substitution_fixes_shifted_locus() {
        // sigma*_{s_1}(X) = q^{-2} X^{-1}: the fixed points are X = ±q^{-1},
        // i.e. the star action fixes the locus {X = q^{-1}}.
        let d = RootDatum::new(Label::A1);
        let s1 = AffineWeylElement::generator(&d, 1).unwrap();
        let x = RatFun::monomial(x_exp(), Scalar::one());
        let img = x.weyl_substitute(&d, &s1, Mode::Star);
        let expect = RatFun::monomial(ExpVec(vec![0, -1]), Scalar::q_pow(-2));
        assert_eq!(img, expect);
    }

    #[test]
    fn substitution_composes() {
        let d = RootDatum::new(Label::A2);
        let w1 = AffineWeylElement::from_word(&d, &[0, 1]).unwrap();
        let w2 = AffineWeylElement::from_word(&d, &[2, 0]).unwrap();
        let f = RatFun::atom_inverse(3, Scalar::q(), ExpVec(vec![0, 1, 1])).unwrap();
        for mode in [Mode::Straight, Mode::Star] {
            let seq = f
                .weyl_substitute(&d, &w2, mode)
                .weyl_substitute(&d, &w1, mode);
            let joint = f.weyl_substitute(&d, &w1.mul(&w2), mode);
            assert_eq!(seq, joint, "{mode}");
        }
    }

    #[test]
    fn grading_twist_is_invertible() {
        let d = RootDatum::new(Label::A2);
        let f = RatFun::from_parts(
            LaurentPoly::monomial(ExpVec(vec![1, -1, 2]), Scalar::r()),
            [(Scalar::q(), ExpVec(vec![0, 1, 0]), 1)],
        )
        .unwrap();
        let back = f.grading_twist(&d, 1).grading_twist(&d, -1);
        assert_eq!(back, f);
    }

    #[test]
    fn hypersurface_from_root_star_shift() {
        // finite simple roots keep their value in star mode; the affine
        // simple root picks up q^{1 - (1 - 2 h_dual)} = q^{2 h_dual}
        let d = RootDatum::new(Label::A2);
        let roots = d.simple_affine_roots();
        let z = Scalar::q_pow(-1);
        let finite = Hypersurface::from_root(&d, &roots[1], &z, Mode::Star).unwrap();
        assert_eq!(finite.value(), &z);
        let affine = Hypersurface::from_root(&d, &roots[0], &z, Mode::Star).unwrap();
        let m = datum_m(&d);
        assert_eq!(affine.value(), &(&z * &Scalar::q_pow(1 - m)));
    }

    fn datum_m(d: &RootDatum) -> i64 {
        let chi = d.root_character(&d.simple_affine_roots()[0]).unwrap();
        d.rho_hat_pair(&chi)
    }

    #[test]
    fn hypersurface_normalizes_orientation() {
        let h = Hypersurface::new(ExpVec(vec![0, -1]), Scalar::q()).unwrap();
        assert_eq!(h.exp(), &ExpVec(vec![0, 1]));
        assert_eq!(h.value(), &Scalar::q_pow(-1));
    }
}
