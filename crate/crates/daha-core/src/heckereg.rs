//! Normalized intertwiners in the twisted-substitution (star) group algebra:
//! inversion c-functions, the multiplicative A-basis, shifted Hecke elements,
//! the star-side membership test, a one-variable lattice-preservation
//! criterion with a brute-force series oracle, and a rank-1 residue-ring
//! integration oracle whose full limit rebuilds the c-function factor.
//!
//! The c-function of an affine Weyl element is
//!
//!   c_w = prod_{alpha in D(w)} (1 - t^{chi(alpha)}) / (1 - q t^{chi(alpha)})
//!
//! over the inversion set D(w). With this crate's (left) inversion sets it
//! obeys the cocycle law c_{uv} = c_u * (c_v substituted by u) whenever
//! lengths add. The A-basis consists of the bare star-mode basis vectors
//! A_w = [w], multiplying by the plain group law A_w A_{w'} = A_{ww'}; the
//! normalized Hecke elements are tau_{w,l} = c_w [w] t^l [e], and the shift
//! identity tau_{w,l+l'} = tau_{w,l'} tau_{e,l} holds identically.
//!
//! Star-side membership reuses the residue/vanishing checker with poles
//! allowed at value q^{-1} and vanishing required at value 1 (the straight
//! side uses 1 and q; the coefficientwise grading twist q^{<rho_hat, .>}
//! carries one configuration onto the other). A lone normalized reflection
//! c_s [s] is NOT a member: its residue at the pole locus has no partner
//! term to cancel against. Members with poles carry matched pairs across
//! each reflection, as the grading-twisted Demazure-Lusztig images do.
//!
//! Lattice preservation in one variable: f_0(x) + f_1(x) [s], with [s] the
//! sign involution e(x) -> e(-x), preserves the power-series lattice iff
//! ord(f_0) >= -1, ord(f_1) >= -1, and Res(f_0) + Res(f_1) = 0. The brute
//! force oracle applies the operator to the monomial basis and inspects the
//! expansions for negative powers.
//!
//! Rank-1 oracle: stratify the affine line over the residue ring Z/q0^d by
//! valuation, weight the nonnegative strata by normalized point counts
//! (the depth-0 stratum gets 1 - 1/q0) and each unit class at valuation -n
//! by 1, and integrate the character Lambda^n with Lambda = q0^{-s} v. The
//! point-count sum equals the closed-form partial geometric sum with ratio
//! q0 Lambda exactly, and the full limit is (1 - Lambda)/(1 - q0 Lambda),
//! the c-function factor. The free unit v keeps the ratio away from 1 at
//! s = 1, where the raw series diverges.

use crate::cherednik::{check_membership, MembershipConfig, MembershipReport, ResidueTwist};
use crate::error::{Error, Result};
use crate::groupalg::AlgebraElement;
use crate::laurent::ExpVec;
use crate::ratfun::{Mode, RatFun, ORD_INFINITY};
use crate::rootdata::RootDatum;
use crate::scalar::Scalar;
use crate::weyl::AffineWeylElement;
use num::{BigInt, BigRational};

/// The c-function of w: the product over the inversion set D(w) of
/// (1 - t^{chi(alpha)}) / (1 - q t^{chi(alpha)}).
pub fn c_function(datum: &RootDatum, w: &AffineWeylElement) -> RatFun {
    let width = datum.width();
    let mut c = RatFun::one(width);
    for alpha in w.inversion_set(datum) {
        let chi = datum
            .root_character(&alpha)
            .expect("inversion roots carry character exponents");
        let num = RatFun::one(width).sub(&RatFun::monomial(chi.clone(), Scalar::one()));
        let den_inv = RatFun::atom_inverse(width, Scalar::q(), chi)
            .expect("q is a nonzero atom coefficient");
        c = c.mul(&num).mul(&den_inv);
    }
    c
}

/// The A-basis element attached to w: the bare star-mode basis vector [w].
/// These multiply by the plain group law, make_a(u) make_a(v) = make_a(uv).
pub fn make_a(datum: &RootDatum, w: &AffineWeylElement) -> AlgebraElement {
    AlgebraElement::basis(datum, w.clone(), Mode::Star)
}

/// The normalized Hecke element tau_{w,l} = c_w [w] t^l [e] in star mode:
/// the c-function sits on the left of the A-basis vector and l shifts by a
/// lattice monomial. tau_{e,l} = t^l [e], and the shift identity
/// tau_{w,l+l'} = tau_{w,l'} tau_{e,l} holds identically.
pub fn make_tau_hecke(
    datum: &RootDatum,
    w: &AffineWeylElement,
    l: &[i64],
) -> Result<AlgebraElement> {
    if l.len() != datum.width() {
        return Err(Error::Domain(format!(
            "shift exponent has width {}, expected {}",
            l.len(),
            datum.width()
        )));
    }
    let head = AlgebraElement::from_terms(
        datum,
        Mode::Star,
        [(w.clone(), c_function(datum, w))],
    );
    let shift = AlgebraElement::scalar_fn(
        datum,
        RatFun::monomial(ExpVec(l.to_vec()), Scalar::one()),
        Mode::Star,
    );
    head.mul(datum, &shift)
}

/// Star-mode membership configuration: first-order poles allowed at value
/// q^{-1}, vanishing required at value 1, plain residue pairing.
pub fn hecke_config() -> MembershipConfig {
    MembershipConfig {
        mode: Mode::Star,
        pole_value: Scalar::q_pow(-1),
        vanish_value: Scalar::one(),
        residue_twist: ResidueTwist::None,
    }
}

/// Membership test for the star-side algebra: every coefficient pole must be
/// first order on a root hypersurface at value q^{-1} with residues
/// cancelling across the reflection pair, and every coefficient must vanish
/// at value 1 on the hypersurfaces of its inversion set.
pub fn check_h_membership(datum: &RootDatum, x: &AlgebraElement) -> Result<MembershipReport> {
    check_membership(datum, x, &hecke_config())
}

// ---------------------------------------------------------------------------
// dense univariate polynomials over the scalar field, ascending coefficients

fn xp_trim(c: &mut Vec<Scalar>) {
    while c.last().is_some_and(Scalar::is_zero) {
        c.pop();
    }
}

fn xp_add(a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    let zero = Scalar::zero();
    let n = a.len().max(b.len());
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let x = a.get(i).unwrap_or(&zero);
        let y = b.get(i).unwrap_or(&zero);
        out.push(x + y);
    }
    xp_trim(&mut out);
    out
}

fn xp_neg(a: &[Scalar]) -> Vec<Scalar> {
    let zero = Scalar::zero();
    a.iter().map(|c| &zero - c).collect()
}

fn xp_scale(a: &[Scalar], c: &Scalar) -> Vec<Scalar> {
    if c.is_zero() {
        return Vec::new();
    }
    a.iter().map(|x| x * c).collect()
}

fn xp_mul(a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Scalar::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if y.is_zero() {
                continue;
            }
            out[i + j] = &out[i + j] + &(x * y);
        }
    }
    xp_trim(&mut out);
    out
}

fn xp_divrem(a: &[Scalar], b: &[Scalar]) -> (Vec<Scalar>, Vec<Scalar>) {
    let mut rem: Vec<Scalar> = a.to_vec();
    xp_trim(&mut rem);
    let mut den: Vec<Scalar> = b.to_vec();
    xp_trim(&mut den);
    assert!(!den.is_empty(), "division by the zero polynomial");
    if rem.len() < den.len() {
        return (Vec::new(), rem);
    }
    let lead_inv = den
        .last()
        .expect("nonempty")
        .inv()
        .expect("nonzero leading coefficient");
    let mut quo = vec![Scalar::zero(); rem.len() - den.len() + 1];
    while rem.len() >= den.len() {
        let k = rem.len() - den.len();
        let coef = rem.last().expect("nonempty") * &lead_inv;
        for (j, bj) in den.iter().enumerate() {
            rem[k + j] = &rem[k + j] - &(bj * &coef);
        }
        quo[k] = coef;
        rem.pop();
        xp_trim(&mut rem);
    }
    xp_trim(&mut quo);
    (quo, rem)
}

fn xp_monic(mut c: Vec<Scalar>) -> Vec<Scalar> {
    xp_trim(&mut c);
    if let Some(last) = c.last().cloned() {
        if !last.is_one() {
            let inv = last.inv().expect("nonzero leading coefficient");
            c = xp_scale(&c, &inv);
        }
    }
    c
}

fn xp_gcd(a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    let mut x: Vec<Scalar> = a.to_vec();
    let mut y: Vec<Scalar> = b.to_vec();
    xp_trim(&mut x);
    xp_trim(&mut y);
    while !y.is_empty() {
        let (_, r) = xp_divrem(&x, &y);
        x = y;
        y = r;
    }
    xp_monic(x)
}

/// A rational function in one formal variable x over the scalar field, kept
/// reduced with a monic denominator. Coefficient slices ascend in the
/// exponent; the zero function is 0/1. The variable plays the role of the
/// transversal coordinate in the lattice-preservation criterion below.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnivariateRat {
    num: Vec<Scalar>,
    den: Vec<Scalar>,
}

impl UnivariateRat {
    fn reduced(mut num: Vec<Scalar>, mut den: Vec<Scalar>) -> UnivariateRat {
        xp_trim(&mut num);
        xp_trim(&mut den);
        assert!(!den.is_empty(), "zero denominator");
        if num.is_empty() {
            return UnivariateRat {
                num,
                den: vec![Scalar::one()],
            };
        }
        let g = xp_gcd(&num, &den);
        if g.len() > 1 {
            num = xp_divrem(&num, &g).0;
            den = xp_divrem(&den, &g).0;
        }
        let lead_inv = den
            .last()
            .expect("nonempty")
            .inv()
            .expect("nonzero leading coefficient");
        if !lead_inv.is_one() {
            num = xp_scale(&num, &lead_inv);
            den = xp_scale(&den, &lead_inv);
        }
        UnivariateRat { num, den }
    }

    /// Build from numerator and denominator coefficients (ascending powers
    /// of x); reduces and normalizes. The denominator must be nonzero.
    pub fn new(num: &[Scalar], den: &[Scalar]) -> Result<UnivariateRat> {
        let mut d = den.to_vec();
        xp_trim(&mut d);
        if d.is_empty() {
            return Err(Error::Domain("univariate denominator is zero".into()));
        }
        Ok(UnivariateRat::reduced(num.to_vec(), d))
    }

    pub fn zero() -> UnivariateRat {
        UnivariateRat {
            num: Vec::new(),
            den: vec![Scalar::one()],
        }
    }

    pub fn one() -> UnivariateRat {
        UnivariateRat {
            num: vec![Scalar::one()],
            den: vec![Scalar::one()],
        }
    }

    /// c x^k; negative k puts a pole at the origin.
    pub fn monomial(k: i64, c: Scalar) -> UnivariateRat {
        if c.is_zero() {
            return UnivariateRat::zero();
        }
        if k >= 0 {
            let mut num = vec![Scalar::zero(); k as usize + 1];
            num[k as usize] = c;
            UnivariateRat {
                num,
                den: vec![Scalar::one()],
            }
        } else {
            let mut den = vec![Scalar::zero(); (-k) as usize + 1];
            den[(-k) as usize] = Scalar::one();
            UnivariateRat { num: vec![c], den }
        }
    }

    /// Finite Laurent combination sum c_k x^k.
    pub fn from_laurent(terms: impl IntoIterator<Item = (i64, Scalar)>) -> UnivariateRat {
        let mut acc = UnivariateRat::zero();
        for (k, c) in terms {
            acc = acc.add(&UnivariateRat::monomial(k, c));
        }
        acc
    }

    pub fn add(&self, rhs: &UnivariateRat) -> UnivariateRat {
        let num = xp_add(
            &xp_mul(&self.num, &rhs.den),
            &xp_mul(&rhs.num, &self.den),
        );
        UnivariateRat::reduced(num, xp_mul(&self.den, &rhs.den))
    }

    pub fn neg(&self) -> UnivariateRat {
        UnivariateRat {
            num: xp_neg(&self.num),
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, rhs: &UnivariateRat) -> UnivariateRat {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &UnivariateRat) -> UnivariateRat {
        UnivariateRat::reduced(
            xp_mul(&self.num, &rhs.num),
            xp_mul(&self.den, &rhs.den),
        )
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_empty()
    }

    pub fn num_coeffs(&self) -> &[Scalar] {
        &self.num
    }

    pub fn den_coeffs(&self) -> &[Scalar] {
        &self.den
    }

    /// True when the reduced denominator is a pure power of x, i.e. the only
    /// finite pole (if any) sits at the origin.
    pub fn pole_only_at_origin(&self) -> bool {
        self.den.iter().rev().skip(1).all(Scalar::is_zero)
    }

    /// Order at the origin: the exponent of the lowest Laurent term
    /// (ORD_INFINITY for the zero function).
    pub fn ord_at_origin(&self) -> i64 {
        if self.is_zero() {
            return ORD_INFINITY;
        }
        let nv = self
            .num
            .iter()
            .position(|c| !c.is_zero())
            .expect("nonzero numerator") as i64;
        let dv = self
            .den
            .iter()
            .position(|c| !c.is_zero())
            .expect("nonzero denominator") as i64;
        nv - dv
    }

    /// Laurent coefficient of x^k in the expansion at the origin.
    pub fn series_coefficient(&self, k: i64) -> Scalar {
        if self.is_zero() {
            return Scalar::zero();
        }
        let dv = self
            .den
            .iter()
            .position(|c| !c.is_zero())
            .expect("nonzero denominator");
        let unit = &self.den[dv..];
        let want = k + dv as i64;
        if want < 0 {
            return Scalar::zero();
        }
        let want = want as usize;
        let u0_inv = unit[0].inv().expect("unit constant term");
        let zero = Scalar::zero();
        let mut series: Vec<Scalar> = Vec::with_capacity(want + 1);
        for j in 0..=want {
            let mut acc = self.num.get(j).unwrap_or(&zero).clone();
            for (i, si) in series.iter().enumerate() {
                let u = unit.get(j - i).unwrap_or(&zero);
                if u.is_zero() || si.is_zero() {
                    continue;
                }
                acc = &acc - &(si * u);
            }
            series.push(&acc * &u0_inv);
        }
        series[want].clone()
    }

    /// Residue at the origin: the Laurent coefficient of x^{-1}.
    pub fn residue_at_origin(&self) -> Scalar {
        self.series_coefficient(-1)
    }
}

/// Analytic lattice-preservation criterion for f_0(x) + f_1(x) [s], where
/// [s] is the sign involution e(x) -> e(-x) on power series: the operator
/// preserves the series lattice iff ord(f_0) >= -1, ord(f_1) >= -1, and
/// Res(f_0) + Res(f_1) = 0. The domain is functions whose only finite pole
/// is at the origin; anything else is a domain error.
pub fn lattice_preservation(f0: &UnivariateRat, f1: &UnivariateRat) -> Result<bool> {
    for f in [f0, f1] {
        if !f.pole_only_at_origin() {
            return Err(Error::Domain(
                "lattice preservation requires poles only at the origin".into(),
            ));
        }
    }
    if f0.ord_at_origin() < -1 || f1.ord_at_origin() < -1 {
        return Ok(false);
    }
    let res = &f0.residue_at_origin() + &f1.residue_at_origin();
    Ok(res.is_zero())
}

/// Finite-resource bounds for the brute-force oracles: a series order for
/// expansions, a residue base (at least 2) for the finite enumerations, and
/// a residue-ring depth.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TruncationBudget {
    pub order: usize,
    pub base: u64,
    pub depth: usize,
}

impl TruncationBudget {
    pub fn new(order: usize, base: u64, depth: usize) -> Result<TruncationBudget> {
        if order == 0 || depth == 0 {
            return Err(Error::Domain(
                "truncation order and depth must be positive".into(),
            ));
        }
        if base < 2 {
            return Err(Error::Domain("residue base must be at least 2".into()));
        }
        Ok(TruncationBudget { order, base, depth })
    }
}

/// Brute-force form of the lattice-preservation criterion: apply
/// f_0(x) e(x) + f_1(x) e(-x) to the monomial basis e = x^j for
/// j = 0..=order and require that no negative powers of x appear.
pub fn lattice_preservation_oracle(
    f0: &UnivariateRat,
    f1: &UnivariateRat,
    budget: &TruncationBudget,
) -> bool {
    let lo = f0.ord_at_origin().min(f1.ord_at_origin()).min(0);
    for j in 0..=(budget.order as i64) {
        let flip = j % 2 == 1;
        for m in (lo + j)..0 {
            let c0 = f0.series_coefficient(m - j);
            let c1 = f1.series_coefficient(m - j);
            let c = if flip { &c0 - &c1 } else { &c0 + &c1 };
            if !c.is_zero() {
                return false;
            }
        }
    }
    true
}

/// Exact outcomes of the rank-1 integration oracle, all in the scalar field
/// with Lambda = q0^{-s} v (the free unit v keeps the geometric ratio
/// q0 Lambda away from 1 at s = 1).
#[derive(Debug, Clone)]
pub struct Rank1Outcome {
    /// The character value the integral is evaluated at.
    pub lambda: Scalar,
    /// Point-count integral over the valuation strata of the residue ring.
    pub stratum_sum: Scalar,
    /// The same truncation as a closed-form partial geometric sum.
    pub geometric_sum: Scalar,
    /// The full-limit closed form (1 - Lambda)/(1 - q0 Lambda).
    pub full_limit: Scalar,
    /// full_limit - geometric_sum, the explicit geometric tail.
    pub tail: Scalar,
}

const RANK1_ENUMERATION_CAP: usize = 2_000_000;
const RANK1_EXPONENT_CAP: usize = 64;

/// Integrate the rank-1 character over the affine line two ways: by point
/// counts over the valuation strata of Z/base^depth (plus one unit-class
/// enumeration per negative valuation down to -(depth-1)), and by the
/// closed-form partial geometric sum with ratio base * Lambda. The two
/// agree exactly, and the full limit (1 - Lambda)/(1 - base * Lambda) is
/// the c-function factor at lambda^{alpha_vee} = Lambda.
pub fn rank1_intertwiner_oracle(budget: &TruncationBudget, s: i64) -> Result<Rank1Outcome> {
    if s < 1 {
        return Err(Error::Domain(format!(
            "contraction exponent must be at least 1, got {s}"
        )));
    }
    if s as usize > RANK1_EXPONENT_CAP {
        return Err(Error::Capacity {
            what: "rank-1 contraction exponent",
            limit: RANK1_EXPONENT_CAP,
            got: s as usize,
        });
    }
    let d = budget.depth;
    let base = budget.base as u128;
    let cells = base
        .checked_pow(d as u32)
        .filter(|c| *c <= RANK1_ENUMERATION_CAP as u128)
        .ok_or(Error::Capacity {
            what: "rank-1 residue enumeration",
            limit: RANK1_ENUMERATION_CAP,
            got: usize::MAX,
        })?;

    let q0_int = BigInt::from(budget.base);
    let q0 = Scalar::from_rational(BigRational::from_integer(q0_int.clone()));
    let q0_inv = q0.inv().expect("base is nonzero");
    let lam = &Scalar::from_rational(BigRational::new(
        BigInt::from(1),
        q0_int.pow(s as u32),
    )) * &Scalar::v_pow(1);
    let ratio = &q0 * &lam;

    // (i) point counts. Nonnegative valuations: strata of Z/base^depth away
    // from the deep class, each point weighted 1/base^depth, integrand 1.
    let mut val_counts = vec![0u64; d];
    for j in 1..cells {
        let mut n = 0usize;
        let mut jj = j;
        while jj % base == 0 {
            n += 1;
            jj /= base;
        }
        val_counts[n] += 1;
    }
    let cells_rat = BigRational::from_integer(BigInt::from(cells));
    let mut stratum_sum = Scalar::zero();
    for count in &val_counts {
        let weight = BigRational::from_integer(BigInt::from(*count)) / cells_rat.clone();
        stratum_sum = &stratum_sum + &Scalar::from_rational(weight);
    }
    // Negative valuations -n: one unit class of Z/base^n per point, each of
    // weight 1, integrand Lambda^n.
    for n in 1..d {
        let size = base.pow(n as u32);
        let mut units: i64 = 0;
        for u in 1..size {
            if num::integer::gcd(u, base) == 1 {
                units += 1;
            }
        }
        let term = &Scalar::from_int(units) * &lam.pow(n as i64).expect("Lambda is nonzero");
        stratum_sum = &stratum_sum + &term;
    }

    // (ii) closed forms.
    let one = Scalar::one();
    let geom_pos = &one - &q0_inv.pow(d as i64).expect("base is nonzero");
    let ratio_pow_d = ratio.pow(d as i64).expect("ratio is nonzero");
    let denom_inv = (&one - &ratio)
        .inv()
        .expect("ratio differs from 1 by the free unit");
    let geom_neg = &(&(&one - &q0_inv) * &(&ratio - &ratio_pow_d)) * &denom_inv;
    let geometric_sum = &geom_pos + &geom_neg;
    let full_limit = &(&one - &lam) * &denom_inv;
    let tail = &full_limit - &geometric_sum;

    Ok(Rank1Outcome {
        lambda: lam,
        stratum_sum,
        geometric_sum,
        full_limit,
        tail,
    })
}
