//! Lattice-torsor function spaces and their Laurent avatars: the finite
//! Mellin transform, simplicial-cone expansions of rational functions with
//! the inverse summation map, and the grading bridge between the straight
//! and star substitution conventions.
//!
//! A finite torsor is a finite index set X with one lattice orbit attached
//! to each x, trivialized by a chosen base point b_x; points are pairs
//! (x, a) with a a lattice offset. The Mellin transform of a finitely
//! supported function phi is the tuple of Laurent polynomials
//!
//!   mellin(phi)_x = sum_a phi(x, a) t^{b_x + a},
//!
//! an exact linear isomorphism onto finitely supported Laurent tuples; it
//! intertwines lattice translation of phi with monomial multiplication
//! (shifting by b multiplies component x by t^b).
//!
//! A cone here is a full-rank simplicial lattice cone, given by width-many
//! independent generators; membership and the grade of a point are read off
//! the exact rational coordinates in the generator basis (the grade is the
//! coordinate sum, so each generator has grade 1, and ties in the induced
//! enumeration order break lexicographically). The positive cone is spanned
//! by the characters of the simple affine roots, and its Weyl images are
//! the cones of interest.
//!
//! cone_expand orients every denominator binomial of a rational function
//! into a chosen cone, flipping (1 - c t^e) to -c t^e (1 - c^{-1} t^{-e})
//! where needed, and records the result as a ConeSeries: a closed form
//! whose geometric expansion is supported in shift + cone, together with a
//! truncation order. cone_sum rebuilds the rational function from the
//! closed form; summing an expansion returns the original function
//! regardless of which cone was used, which is the regularization
//! independence the expansion layer exists to witness.
//!
//! rho_shift toggles an algebra element between the straight and star
//! substitution conventions by conjugating every coefficient with the
//! grading character t^l -> q^{<rho_hat, l>} t^l and flipping the mode
//! flag. It is a self-inverse algebra isomorphism, and it carries the
//! straight-side membership configuration onto the star-side one.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::groupalg::AlgebraElement;
use crate::laurent::{ExpVec, LaurentPoly};
use crate::ratfun::{Mode, RatFun};
use crate::rootdata::RootDatum;
use crate::scalar::Scalar;
use crate::weyl::AffineWeylElement;
use num::{BigInt, BigRational, Signed, ToPrimitive, Zero};

/// A finite index set with one trivialized lattice orbit per index: points
/// are pairs (x, a) of an index and a lattice offset from the chosen base
/// point of x.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteTorsor {
    width: usize,
    base_points: Vec<ExpVec>,
}

impl FiniteTorsor {
    /// Build from the lattice width and one base point per index.
    pub fn new(width: usize, base_points: Vec<ExpVec>) -> Result<FiniteTorsor> {
        if base_points.is_empty() {
            return Err(Error::Domain("torsor base set is empty".into()));
        }
        for b in &base_points {
            if b.width() != width {
                return Err(Error::Domain(format!(
                    "base point {b} has width {}, expected {width}",
                    b.width()
                )));
            }
        }
        Ok(FiniteTorsor { width, base_points })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn size(&self) -> usize {
        self.base_points.len()
    }

    pub fn base_point(&self, x: usize) -> &ExpVec {
        &self.base_points[x]
    }
}

/// A finitely supported scalar function on torsor points (x, a); zero
/// coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TorsorFunction {
    width: usize,
    size: usize,
    terms: BTreeMap<(usize, ExpVec), Scalar>,
}

impl TorsorFunction {
    pub fn zero(torsor: &FiniteTorsor) -> TorsorFunction {
        TorsorFunction {
            width: torsor.width(),
            size: torsor.size(),
            terms: BTreeMap::new(),
        }
    }

    /// Add c at the point (x, offset), accumulating with any existing value.
    pub fn add_term(&mut self, x: usize, offset: ExpVec, c: Scalar) -> Result<()> {
        if x >= self.size {
            return Err(Error::Domain(format!(
                "torsor index {x} out of range 0..{}",
                self.size
            )));
        }
        if offset.width() != self.width {
            return Err(Error::Domain(format!(
                "offset {offset} has width {}, expected {}",
                offset.width(),
                self.width
            )));
        }
        let key = (x, offset);
        let acc = match self.terms.remove(&key) {
            Some(old) => &old + &c,
            None => c,
        };
        if !acc.is_zero() {
            self.terms.insert(key, acc);
        }
        Ok(())
    }

    /// The indicator of the base point of x.
    pub fn delta(torsor: &FiniteTorsor, x: usize) -> Result<TorsorFunction> {
        let mut phi = TorsorFunction::zero(torsor);
        phi.add_term(x, ExpVec::zero(torsor.width()), Scalar::one())?;
        Ok(phi)
    }

    /// Translate every point by the lattice element b: the result takes at
    /// (x, a + b) the value this function takes at (x, a).
    pub fn translate(&self, b: &ExpVec) -> TorsorFunction {
        let terms = self
            .terms
            .iter()
            .map(|((x, a), c)| ((*x, a.add(b)), c.clone()))
            .collect();
        TorsorFunction {
            width: self.width,
            size: self.size,
            terms,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn support_len(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(usize, ExpVec), &Scalar)> {
        self.terms.iter()
    }
}

fn check_torsor_compat(torsor: &FiniteTorsor, width: usize, size: usize) -> Result<()> {
    if width != torsor.width() || size != torsor.size() {
        return Err(Error::Domain(format!(
            "function shaped ({size}, width {width}) does not match torsor ({}, width {})",
            torsor.size(),
            torsor.width()
        )));
    }
    Ok(())
}

/// The finite Mellin transform: component x is sum_a phi(x, a) t^{b_x + a}.
pub fn mellin(torsor: &FiniteTorsor, phi: &TorsorFunction) -> Result<Vec<LaurentPoly>> {
    check_torsor_compat(torsor, phi.width, phi.size)?;
    let mut out = vec![LaurentPoly::zero(torsor.width()); torsor.size()];
    for ((x, a), c) in phi.terms() {
        out[*x].add_term(torsor.base_point(*x).add(a), c.clone());
    }
    Ok(out)
}

/// Inverse Mellin transform: reads each monomial c t^e of component x back
/// as the value c at offset e - b_x. Exact inverse of mellin.
pub fn mellin_inv(torsor: &FiniteTorsor, image: &[LaurentPoly]) -> Result<TorsorFunction> {
    if image.len() != torsor.size() {
        return Err(Error::Domain(format!(
            "image has {} components, torsor has {}",
            image.len(),
            torsor.size()
        )));
    }
    let mut phi = TorsorFunction::zero(torsor);
    for (x, p) in image.iter().enumerate() {
        if p.width() != torsor.width() {
            return Err(Error::Domain(format!(
                "image component {x} has width {}, expected {}",
                p.width(),
                torsor.width()
            )));
        }
        for (e, c) in p.terms() {
            phi.add_term(x, e.sub(torsor.base_point(x)), c.clone())?;
        }
    }
    Ok(phi)
}

// ---------------------------------------------------------------------------
// simplicial cones with exact rational coordinates

fn big(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Invert the square matrix whose columns are the generators; None when the
/// generators are dependent. Rows of the result give the coordinate
/// functionals.
fn invert_columns(width: usize, gens: &[ExpVec]) -> Option<Vec<Vec<BigRational>>> {
    let n = width;
    let mut aug: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            let mut row: Vec<BigRational> = (0..n).map(|j| big(gens[j].0[i])).collect();
            for k in 0..n {
                row.push(if k == i { big(1) } else { big(0) });
            }
            row
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !aug[r][col].is_zero())?;
        aug.swap(col, piv);
        let p = aug[col][col].clone();
        for entry in aug[col].iter_mut() {
            *entry = &*entry / &p;
        }
        for r in 0..n {
            if r != col && !aug[r][col].is_zero() {
                let f = aug[r][col].clone();
                for c2 in 0..2 * n {
                    let d = &aug[col][c2] * &f;
                    aug[r][c2] = &aug[r][c2] - &d;
                }
            }
        }
    }
    Some(aug.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// A full-rank simplicial lattice cone: width-many independent generators.
/// Membership, coordinates, and the grade (coordinate sum; each generator
/// has grade 1) are exact rational computations in the generator basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cone {
    width: usize,
    gens: Vec<ExpVec>,
    inv: Vec<Vec<BigRational>>,
}

impl Cone {
    /// Build from generators; they must number exactly the lattice width and
    /// be linearly independent.
    pub fn new(width: usize, gens: Vec<ExpVec>) -> Result<Cone> {
        if gens.len() != width {
            return Err(Error::Domain(format!(
                "cone needs {width} generators, got {}",
                gens.len()
            )));
        }
        for g in &gens {
            if g.width() != width {
                return Err(Error::Domain(format!(
                    "cone generator {g} has width {}, expected {width}",
                    g.width()
                )));
            }
        }
        let inv = invert_columns(width, &gens).ok_or_else(|| {
            Error::Domain("cone generators are linearly dependent".into())
        })?;
        Ok(Cone { width, gens, inv })
    }

    /// The dominant cone: spanned by the characters of the simple affine
    /// roots.
    pub fn positive(datum: &RootDatum) -> Cone {
        let gens = datum
            .simple_affine_roots()
            .iter()
            .map(|alpha| {
                datum
                    .root_character(alpha)
                    .expect("simple roots carry character exponents")
            })
            .collect();
        Cone::new(datum.width(), gens).expect("simple-root characters are independent")
    }

    /// The image of the dominant cone under w's exponent action.
    pub fn weyl_image(datum: &RootDatum, w: &AffineWeylElement) -> Cone {
        let gens = Cone::positive(datum)
            .gens
            .iter()
            .map(|g| w.act_exponent(datum, g))
            .collect();
        Cone::new(datum.width(), gens).expect("the exponent action is invertible")
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn generators(&self) -> &[ExpVec] {
        &self.gens
    }

    /// Exact coordinates of v in the generator basis.
    pub fn coordinates(&self, v: &ExpVec) -> Vec<BigRational> {
        assert_eq!(v.width(), self.width, "width mismatch in cone coordinates");
        self.inv
            .iter()
            .map(|row| {
                let mut acc = BigRational::zero();
                for (j, r) in row.iter().enumerate() {
                    if !r.is_zero() && v.0[j] != 0 {
                        acc += r * big(v.0[j]);
                    }
                }
                acc
            })
            .collect()
    }

    /// Whether v lies in the cone (all coordinates nonnegative).
    pub fn contains(&self, v: &ExpVec) -> bool {
        self.coordinates(v).iter().all(|c| !c.is_negative())
    }

    /// The grade of v: the sum of its coordinates, so each generator has
    /// grade 1. Positive on nonzero cone points; defined (possibly negative)
    /// everywhere.
    pub fn grade(&self, v: &ExpVec) -> BigRational {
        self.coordinates(v).into_iter().sum()
    }
}

/// A rational function presented for expansion along a cone: the closed
/// form numerator / prod (1 - c t^e) with every e in the cone, a lattice
/// shift with the expansion supported in shift + cone, and the truncation
/// order for term enumeration (graded degree counted from the shift; the
/// enumeration sorts by grade, then lexicographically).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConeSeries {
    cone: Cone,
    shift: ExpVec,
    numerator: LaurentPoly,
    denominators: Vec<(Scalar, ExpVec)>,
    order: usize,
}

impl ConeSeries {
    /// Build and validate: denominator exponents must be nonzero cone
    /// members, and every numerator exponent must lie in shift + cone.
    pub fn new(
        cone: Cone,
        shift: ExpVec,
        numerator: LaurentPoly,
        denominators: Vec<(Scalar, ExpVec)>,
        order: usize,
    ) -> Result<ConeSeries> {
        let width = cone.width();
        if shift.width() != width || numerator.width() != width {
            return Err(Error::Domain(
                "cone series parts disagree on lattice width".into(),
            ));
        }
        for (c, e) in &denominators {
            if e.width() != width || e.is_zero() || c.is_zero() || !cone.contains(e) {
                return Err(Error::Domain(format!(
                    "denominator binomial exponent {e} is not a nonzero cone member"
                )));
            }
        }
        for (e, _) in numerator.terms() {
            if !cone.contains(&e.sub(&shift)) {
                return Err(Error::Domain(format!(
                    "numerator exponent {e} lies outside shift + cone"
                )));
            }
        }
        Ok(ConeSeries {
            cone,
            shift,
            numerator,
            denominators,
            order,
        })
    }

    pub fn cone(&self) -> &Cone {
        &self.cone
    }

    pub fn shift(&self) -> &ExpVec {
        &self.shift
    }

    pub fn numerator(&self) -> &LaurentPoly {
        &self.numerator
    }

    pub fn denominators(&self) -> &[(Scalar, ExpVec)] {
        &self.denominators
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// The geometric expansion, truncated to graded degree `order` above the
    /// shift and sorted by (grade, lexicographic exponent).
    pub fn terms(&self) -> Vec<(ExpVec, Scalar)> {
        let cap = big(self.order as i64);
        let rel = |e: &ExpVec| self.cone.grade(&e.sub(&self.shift));
        let mut acc: BTreeMap<ExpVec, Scalar> = BTreeMap::new();
        for (e, c) in self.numerator.terms() {
            if rel(e) <= cap {
                let entry = acc.entry(e.clone()).or_insert_with(Scalar::zero);
                *entry = &*entry + c;
            }
        }
        for (c, mu) in &self.denominators {
            let gamma = self.cone.grade(mu);
            let mut next: BTreeMap<ExpVec, Scalar> = BTreeMap::new();
            for (e, a) in &acc {
                if a.is_zero() {
                    continue;
                }
                let mut g = rel(e);
                let mut exp = e.clone();
                let mut coef = a.clone();
                loop {
                    let entry = next.entry(exp.clone()).or_insert_with(Scalar::zero);
                    *entry = &*entry + &coef;
                    g += &gamma;
                    if g > cap {
                        break;
                    }
                    exp = exp.add(mu);
                    coef = &coef * c;
                }
            }
            acc = next;
        }
        let mut out: Vec<(ExpVec, Scalar)> = acc
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .collect();
        out.sort_by(|(a, _), (b, _)| rel(a).cmp(&rel(b)).then_with(|| a.cmp(b)));
        out
    }
}

/// Orient every denominator binomial of f into the cone, flipping
/// (1 - c t^e) to -c t^e (1 - c^{-1} t^{-e}) where the opposite exponent is
/// the cone member, and package the result as a ConeSeries truncated at the
/// given order. Errors when some exponent orients neither way.
pub fn cone_expand(f: &RatFun, cone: &Cone, order: usize) -> Result<ConeSeries> {
    let width = cone.width();
    if f.num().width() != width {
        return Err(Error::Domain(
            "rational function and cone disagree on lattice width".into(),
        ));
    }
    let mut numerator = f.num().clone();
    let mut denominators: Vec<(Scalar, ExpVec)> = Vec::new();
    for atom in f.den_atoms() {
        let (coeff, exp) = if cone.contains(&atom.exp) {
            (atom.coeff.clone(), atom.exp.clone())
        } else if cone.contains(&atom.exp.neg()) {
            // 1/(1 - c t^e) = -c^{-1} t^{-e} / (1 - c^{-1} t^{-e})
            let cinv = atom.coeff.inv().expect("denominator coefficients are nonzero");
            let zero = Scalar::zero();
            let unit = &zero - &cinv;
            for _ in 0..atom.mult {
                numerator = numerator.mul_monomial(&atom.exp.neg(), &unit);
            }
            (cinv, atom.exp.neg())
        } else {
            return Err(Error::Domain(format!(
                "denominator exponent {} does not orient into the cone",
                atom.exp
            )));
        };
        for _ in 0..atom.mult {
            denominators.push((coeff.clone(), exp.clone()));
        }
    }
    let shift = if numerator.is_zero() {
        ExpVec::zero(width)
    } else {
        // the floor of the coordinatewise minimum over numerator exponents,
        // taken in the generator basis, is a lattice point below the support
        let mut mins: Option<Vec<BigRational>> = None;
        for (e, _) in numerator.terms() {
            let coords = cone.coordinates(e);
            mins = Some(match mins {
                None => coords,
                Some(m) => m
                    .into_iter()
                    .zip(coords)
                    .map(|(a, b)| if b < a { b } else { a })
                    .collect(),
            });
        }
        let mut shift = ExpVec::zero(width);
        for (m, g) in mins.expect("nonzero numerator").iter().zip(cone.generators()) {
            let k = m.floor().to_integer().to_i64().ok_or_else(|| {
                Error::Domain("cone shift coordinate overflows".into())
            })?;
            shift = shift.add(&g.scale(k));
        }
        shift
    };
    ConeSeries::new(cone.clone(), shift, numerator, denominators, order)
}

/// Rebuild the rational function a ConeSeries is the expansion of. Summing
/// any expansion of f returns f itself, whichever cone was used.
pub fn cone_sum(series: &ConeSeries) -> Result<RatFun> {
    let mut grouped: Vec<(Scalar, ExpVec, usize)> = Vec::new();
    for (c, e) in series.denominators() {
        match grouped
            .iter_mut()
            .find(|(gc, ge, _)| gc == c && ge == e)
        {
            Some((_, _, m)) => *m += 1,
            None => grouped.push((c.clone(), e.clone(), 1)),
        }
    }
    RatFun::from_parts(series.numerator().clone(), grouped)
}

/// Toggle an algebra element between the straight and star substitution
/// conventions: conjugate every coefficient by the grading character
/// t^l -> q^{<rho_hat, l>} t^l (inverted in the star-to-straight direction)
/// and flip the mode flag. Self-inverse, and an algebra isomorphism.
pub fn rho_shift(datum: &RootDatum, x: &AlgebraElement) -> AlgebraElement {
    let (twist, mode) = match x.mode() {
        Mode::Straight => (1, Mode::Star),
        Mode::Star => (-1, Mode::Straight),
    };
    AlgebraElement::from_terms(
        datum,
        mode,
        x.terms()
            .map(|(w, f)| (w.clone(), f.grading_twist(datum, twist))),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cherednik::{cherednik_config, check_membership, make_tau};
    use crate::heckereg::check_h_membership;
    use crate::rootdata::Label;
    use crate::weyl::bfs_ball;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn rq(n: i64, d: i64) -> Scalar {
        Scalar::from_rational(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    fn random_torsor(rng: &mut ChaCha8Rng, width: usize, size: usize) -> FiniteTorsor {
        let base_points = (0..size)
            .map(|_| ExpVec((0..width).map(|_| rng.gen_range(-2..=2)).collect()))
            .collect();
        FiniteTorsor::new(width, base_points).unwrap()
    }

    fn random_function(
        rng: &mut ChaCha8Rng,
        torsor: &FiniteTorsor,
        terms: usize,
    ) -> TorsorFunction {
        let mut phi = TorsorFunction::zero(torsor);
        for _ in 0..terms {
            let x = rng.gen_range(0..torsor.size());
            let a = ExpVec((0..torsor.width()).map(|_| rng.gen_range(-3..=3)).collect());
            let c = rq(rng.gen_range(-5..=5), rng.gen_range(1..=3));
            phi.add_term(x, a, c).unwrap();
        }
        phi
    }

    #[test]
    fn mellin_of_delta_is_base_monomial() {
        let torsor = FiniteTorsor::new(
            2,
            vec![ExpVec(vec![0, 0]), ExpVec(vec![1, -2])],
        )
        .unwrap();
        let phi = TorsorFunction::delta(&torsor, 1).unwrap();
        let img = mellin(&torsor, &phi).unwrap();
        assert!(img[0].is_zero());
        assert_eq!(
            img[1],
            LaurentPoly::monomial(ExpVec(vec![1, -2]), Scalar::one())
        );
    }

    #[test]
    fn mellin_roundtrip_and_homogeneity() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x4d454c4c);
        for _ in 0..20 {
            let torsor = random_torsor(&mut rng, 3, 3);
            let phi = random_function(&mut rng, &torsor, 6);
            let img = mellin(&torsor, &phi).unwrap();
            assert_eq!(mellin_inv(&torsor, &img).unwrap(), phi);

            let b = ExpVec((0..3).map(|_| rng.gen_range(-2..=2)).collect());
            let shifted = mellin(&torsor, &phi.translate(&b)).unwrap();
            for (x, p) in img.iter().enumerate() {
                assert_eq!(shifted[x], p.mul_monomial(&b, &Scalar::one()));
            }
        }
    }

    #[test]
    fn mellin_shape_mismatch_is_rejected() {
        let torsor = FiniteTorsor::new(2, vec![ExpVec(vec![0, 0])]).unwrap();
        let other = FiniteTorsor::new(2, vec![ExpVec(vec![0, 0]), ExpVec(vec![0, 1])]).unwrap();
        let phi = TorsorFunction::delta(&other, 1).unwrap();
        assert!(mellin(&torsor, &phi).is_err());
        assert!(mellin_inv(&torsor, &[]).is_err());
    }

    #[test]
    fn positive_cone_grades_generators_at_one() {
        for label in [Label::A1, Label::A2] {
            let d = RootDatum::new(label);
            let cone = Cone::positive(&d);
            for g in cone.generators() {
                assert!(cone.contains(g));
                assert_eq!(cone.grade(g), big(1));
                assert!(!cone.contains(&g.neg()));
            }
            let both = cone.generators()[0].add(&cone.generators()[1]);
            assert!(cone.contains(&both));
            assert_eq!(cone.grade(&both), big(2));
            let e = AffineWeylElement::identity(&d);
            assert_eq!(Cone::weyl_image(&d, &e), cone);
        }
    }

    #[test]
    fn degenerate_cones_are_rejected() {
        assert!(Cone::new(2, vec![ExpVec(vec![1, 0])]).is_err());
        assert!(Cone::new(
            2,
            vec![ExpVec(vec![1, 1]), ExpVec(vec![2, 2])]
        )
        .is_err());
    }

    #[test]
    fn expansion_of_geometric_atom_matches_series() {
        let d = RootDatum::new(Label::A1);
        let cone = Cone::positive(&d);
        let mu = cone.generators()[1].clone();
        let f = RatFun::atom_inverse(d.width(), Scalar::one(), mu.clone()).unwrap();
        let series = cone_expand(&f, &cone, 4).unwrap();
        assert_eq!(series.shift(), &ExpVec::zero(d.width()));
        let expected: Vec<(ExpVec, Scalar)> = (0..=4)
            .map(|k| (mu.scale(k), Scalar::one()))
            .collect();
        assert_eq!(series.terms(), expected);
        assert_eq!(cone_sum(&series).unwrap(), f);
    }

    #[test]
    fn opposite_cone_reorients_and_sums_back() {
        let d = RootDatum::new(Label::A1);
        let cone = Cone::positive(&d);
        let s1 = AffineWeylElement::generator(&d, 1).unwrap();
        let flipped = Cone::weyl_image(&d, &s1);
        let mu = cone.generators()[1].clone();
        let f = RatFun::atom_inverse(d.width(), Scalar::one(), mu.clone()).unwrap();

        let series = cone_expand(&f, &flipped, 3).unwrap();
        let minus_one = &Scalar::zero() - &Scalar::one();
        let expected: Vec<(ExpVec, Scalar)> = (1..=4)
            .map(|k| (mu.scale(-k), minus_one.clone()))
            .collect();
        assert_eq!(series.terms(), expected);

        // both expansions resum to the same rational function
        let straight = cone_expand(&f, &cone, 3).unwrap();
        assert_eq!(cone_sum(&straight).unwrap(), f);
        assert_eq!(cone_sum(&series).unwrap(), f);
    }

    #[test]
    fn polynomials_expand_to_their_own_terms() {
        let d = RootDatum::new(Label::A1);
        let cone = Cone::positive(&d);
        let s1 = AffineWeylElement::generator(&d, 1).unwrap();
        let flipped = Cone::weyl_image(&d, &s1);
        let chi = cone.generators()[1].clone();
        let mut p = LaurentPoly::one(d.width());
        p.add_term(chi.clone(), Scalar::from_int(2));
        let f = RatFun::from_parts(p.clone(), []).unwrap();
        for c in [&cone, &flipped] {
            let got = cone_expand(&f, c, 8).unwrap().terms();
            let mut want: Vec<(ExpVec, Scalar)> = p
                .terms()
                .map(|(e, s)| (e.clone(), s.clone()))
                .collect();
            want.sort_by(|(a, _), (b, _)| {
                let (sa, sb) = (c.grade(a), c.grade(b));
                sa.cmp(&sb).then_with(|| a.cmp(b))
            });
            assert_eq!(got, want);
        }
    }

    #[test]
    fn unorientable_denominator_is_a_domain_error() {
        let d = RootDatum::new(Label::A2);
        let cone = Cone::positive(&d);
        // chi_1 - chi_2 is on neither side of the dominant cone
        let mixed = cone.generators()[1].sub(&cone.generators()[2]);
        let f = RatFun::atom_inverse(d.width(), Scalar::one(), mixed).unwrap();
        assert!(matches!(cone_expand(&f, &cone, 3), Err(Error::Domain(_))));
    }

    #[test]
    fn expansion_is_multiplicative_to_the_truncation_order() {
        let d = RootDatum::new(Label::A1);
        let cone = Cone::positive(&d);
        let g0 = cone.generators()[0].clone();
        let g1 = cone.generators()[1].clone();
        let order = 6usize;

        let f = RatFun::atom_inverse(d.width(), Scalar::v_pow(1), g0).unwrap();
        let mut p = LaurentPoly::one(d.width());
        p.add_term(g1.clone(), Scalar::from_int(3));
        let g = RatFun::from_parts(p, [(Scalar::one(), g1, 1usize)]).unwrap();

        let fg = f.mul(&g);
        let want: BTreeMap<ExpVec, Scalar> =
            cone_expand(&fg, &cone, order).unwrap().terms().into_iter().collect();

        let mut got: BTreeMap<ExpVec, Scalar> = BTreeMap::new();
        let cap = big(order as i64);
        for (ea, ca) in cone_expand(&f, &cone, order).unwrap().terms() {
            for (eb, cb) in cone_expand(&g, &cone, order).unwrap().terms() {
                let e = ea.add(&eb);
                if cone.grade(&e) <= cap {
                    let entry = got.entry(e).or_insert_with(Scalar::zero);
                    *entry = &*entry + &(&ca * &cb);
                }
            }
        }
        got.retain(|_, c| !c.is_zero());
        assert_eq!(got, want);
    }

    #[test]
    fn cone_sum_of_random_series_expands_back() {
        let d = RootDatum::new(Label::A2);
        let mut rng = ChaCha8Rng::seed_from_u64(0x434f4e45);
        let ball = bfs_ball(&d, 2);
        for trial in 0..10 {
            let (w, _) = &ball[rng.gen_range(0..ball.len())];
            let cone = Cone::weyl_image(&d, w);
            let gens: Vec<ExpVec> = cone.generators().to_vec();
            let mut numerator = LaurentPoly::zero(d.width());
            for _ in 0..3 {
                let e = gens[rng.gen_range(0..gens.len())]
                    .scale(rng.gen_range(0..=2))
                    .add(&gens[rng.gen_range(0..gens.len())].scale(rng.gen_range(0..=1)));
                numerator.add_term(e, rq(rng.gen_range(-4..=4), 1));
            }
            if numerator.is_zero() {
                numerator = LaurentPoly::one(d.width());
            }
            let mut denominators = Vec::new();
            for _ in 0..rng.gen_range(1..=2) {
                let mu = gens[rng.gen_range(0..gens.len())].clone();
                let c = Scalar::v_pow(rng.gen_range(-1..=1));
                denominators.push((c, mu));
            }
            let series = ConeSeries::new(
                cone.clone(),
                ExpVec::zero(d.width()),
                numerator,
                denominators,
                8,
            )
            .unwrap();
            let f = cone_sum(&series).unwrap();
            let back = cone_expand(&f, &cone, 8).unwrap();
            // the two presentations may truncate at different graded depths
            // (cone_expand picks the minimal shift); compare on the window
            // both enumerations cover
            let window = (cone.grade(series.shift()) + big(8))
                .min(cone.grade(back.shift()) + big(8));
            let restrict = |s: &ConeSeries| -> BTreeMap<ExpVec, Scalar> {
                s.terms()
                    .into_iter()
                    .filter(|(e, _)| cone.grade(e) <= window)
                    .collect()
            };
            assert_eq!(
                restrict(&back),
                restrict(&series),
                "trial {trial}: expansion does not reproduce the series"
            );
            assert_eq!(cone_sum(&back).unwrap(), f);
        }
    }

    #[test]
    fn cone_series_validates_support() {
        let d = RootDatum::new(Label::A1);
        let cone = Cone::positive(&d);
        let outside = LaurentPoly::monomial(cone.generators()[1].neg(), Scalar::one());
        assert!(ConeSeries::new(
            cone.clone(),
            ExpVec::zero(d.width()),
            outside,
            Vec::new(),
            3
        )
        .is_err());
        assert!(ConeSeries::new(
            cone.clone(),
            ExpVec::zero(d.width()),
            LaurentPoly::one(d.width()),
            vec![(Scalar::one(), ExpVec::zero(d.width()))],
            3
        )
        .is_err());
    }

    fn random_element(
        rng: &mut ChaCha8Rng,
        datum: &RootDatum,
        ball: &[(AffineWeylElement, usize)],
    ) -> AlgebraElement {
        let mut entries = Vec::new();
        for _ in 0..2 {
            let (w, _) = &ball[rng.gen_range(0..ball.len())];
            let exp = ExpVec(
                (0..datum.width()).map(|_| rng.gen_range(-1..=1)).collect(),
            );
            let coeff = RatFun::monomial(exp, rq(rng.gen_range(-3..=3), 1));
            entries.push((w.clone(), coeff));
        }
        AlgebraElement::from_terms(datum, Mode::Straight, entries)
    }

    #[test]
    fn rho_shift_is_a_self_inverse_isomorphism()
    {
        let d = RootDatum::new(Label::A1);
        let e = AlgebraElement::identity(&d, Mode::Straight);
        let shifted = rho_shift(&d, &e);
        assert_eq!(shifted, AlgebraElement::identity(&d, Mode::Star));
        assert_eq!(rho_shift(&d, &shifted), e);

        let ball = bfs_ball(&d, 2);
        let mut rng = ChaCha8Rng::seed_from_u64(0x52484f53);
        for _ in 0..15 {
            let x = random_element(&mut rng, &d, &ball);
            let y = random_element(&mut rng, &d, &ball);
            assert_eq!(rho_shift(&d, &rho_shift(&d, &x)), x);
            let lhs = rho_shift(&d, &x.mul(&d, &y).unwrap());
            let rhs = rho_shift(&d, &x).mul(&d, &rho_shift(&d, &y)).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn rho_shift_bridges_the_membership_configurations() {
        let d = RootDatum::new(Label::A1);
        let prod = make_tau(&d, 0)
            .unwrap()
            .mul(&d, &make_tau(&d, 1).unwrap())
            .unwrap();
        assert!(check_membership(&d, &prod, &cherednik_config())
            .unwrap()
            .compliant());
        let image = rho_shift(&d, &prod);
        assert!(check_h_membership(&d, &image).unwrap().compliant());
        assert_eq!(rho_shift(&d, &image), prod);
    }
}
