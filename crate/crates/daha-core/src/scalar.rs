//! The coefficient field Q(v): exact rational functions in one variable.
//!
//! A [`Scalar`] is a reduced fraction of dense polynomials over Q. Invariants:
//! gcd(num, den) = 1, den monic and nonzero, and the zero scalar is 0/1.
//! Because the form is canonical, equality and ordering are structural.
//!
//! The algebra layers above fix the deformation parameters as r = v and
//! q = v^2, so every q-power is a genuine element of this field and no square
//! root is ever needed.

use crate::error::{Error, Result};
use num::{BigInt, BigRational, One, Signed, Zero};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

/// Dense univariate polynomial over Q, coefficients ascending in degree,
/// no trailing zero coefficient (the zero polynomial is the empty vector).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct VPoly(Vec<BigRational>);

impl VPoly {
    pub fn zero() -> Self {
        VPoly(Vec::new())
    }

    pub fn one() -> Self {
        VPoly(vec![BigRational::one()])
    }

    /// c * v^k.
    pub fn monomial(k: usize, c: BigRational) -> Self {
        if c.is_zero() {
            return VPoly::zero();
        }
        let mut coeffs = vec![BigRational::zero(); k + 1];
        coeffs[k] = c;
        VPoly(coeffs)
    }

    pub fn from_coeffs(coeffs: Vec<BigRational>) -> Self {
        let mut p = VPoly(coeffs);
        p.trim();
        p
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.0
    }

    fn trim(&mut self) {
        while self.0.last().is_some_and(|c| c.is_zero()) {
            self.0.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree, or None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&BigRational> {
        self.0.last()
    }

    pub fn add(&self, rhs: &VPoly) -> VPoly {
        let n = self.0.len().max(rhs.0.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let a = self.0.get(i).cloned().unwrap_or_else(BigRational::zero);
            let b = rhs.0.get(i).cloned().unwrap_or_else(BigRational::zero);
            out.push(a + b);
        }
        VPoly::from_coeffs(out)
    }

    pub fn neg(&self) -> VPoly {
        VPoly(self.0.iter().map(|c| -c).collect())
    }

    pub fn sub(&self, rhs: &VPoly) -> VPoly {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &VPoly) -> VPoly {
        if self.is_zero() || rhs.is_zero() {
            return VPoly::zero();
        }
        let mut out = vec![BigRational::zero(); self.0.len() + rhs.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.0.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        VPoly::from_coeffs(out)
    }

    pub fn scale(&self, c: &BigRational) -> VPoly {
        if c.is_zero() {
            return VPoly::zero();
        }
        VPoly(self.0.iter().map(|a| a * c).collect())
    }

    /// Euclidean division: self = q * d + r with deg r < deg d.
    /// Panics if d is zero (internal use only; callers guard).
    pub fn divrem(&self, d: &VPoly) -> (VPoly, VPoly) {
        assert!(!d.is_zero(), "division by the zero polynomial");
        let dd = d.degree().unwrap();
        let lead = d.leading().unwrap().clone();
        let mut rem = self.clone();
        let mut quo = vec![
            BigRational::zero();
            self.0.len().saturating_sub(dd).max(1)
        ];
        while let Some(rd) = rem.degree() {
            if rd < dd {
                break;
            }
            let c = rem.leading().unwrap() / &lead;
            let shift = rd - dd;
            quo[shift] = c.clone();
            // rem -= c * v^shift * d
            for (i, b) in d.0.iter().enumerate() {
                let delta = &c * b;
                rem.0[i + shift] -= delta;
            }
            rem.trim();
        }
        (VPoly::from_coeffs(quo), rem)
    }

    /// Monic gcd by the Euclidean algorithm; gcd(0, 0) = 0.
    pub fn gcd(&self, other: &VPoly) -> VPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.divrem(&b);
            a = b;
            b = r;
        }
        a.into_monic()
    }

    /// Scale so the leading coefficient is 1 (zero stays zero).
    pub fn into_monic(self) -> VPoly {
        match self.leading() {
            None => self,
            Some(l) if l.is_one() => self,
            Some(l) => {
                let inv = l.recip();
                self.scale(&inv)
            }
        }
    }

    /// Exact evaluation at a rational point.
    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.0.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }
}

impl fmt::Display for VPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.0.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let unit_coeff = mag.is_one() && k > 0;
            if !unit_coeff {
                write!(f, "{mag}")?;
            }
            if k > 0 {
                if !unit_coeff {
                    write!(f, "*")?;
                }
                write!(f, "v")?;
                if k > 1 {
                    write!(f, "^{k}")?;
                }
            }
        }
        Ok(())
    }
}

/// An element of Q(v) in canonical reduced form.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Scalar {
    num: VPoly,
    den: VPoly,
}

impl Scalar {
    /// Build num/den, reducing to canonical form.
    /// Domain error if den = 0.
    pub fn new(num: VPoly, den: VPoly) -> Result<Scalar> {
        if den.is_zero() {
            return Err(Error::Domain("scalar with zero denominator".into()));
        }
        Ok(Scalar::reduced(num, den))
    }

    fn reduced(num: VPoly, den: VPoly) -> Scalar {
        if num.is_zero() {
            return Scalar {
                num: VPoly::zero(),
                den: VPoly::one(),
            };
        }
        let g = num.gcd(&den);
        let (num, _) = num.divrem(&g);
        let (den, _) = den.divrem(&g);
        let lead = den.leading().expect("nonzero denominator").clone();
        if lead.is_one() {
            Scalar { num, den }
        } else {
            let inv = lead.recip();
            Scalar {
                num: num.scale(&inv),
                den: den.scale(&inv),
            }
        }
    }

    pub fn zero() -> Scalar {
        Scalar {
            num: VPoly::zero(),
            den: VPoly::one(),
        }
    }

    pub fn one() -> Scalar {
        Scalar {
            num: VPoly::one(),
            den: VPoly::one(),
        }
    }

    pub fn from_int(n: i64) -> Scalar {
        Scalar::from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_rational(c: BigRational) -> Scalar {
        Scalar {
            num: VPoly::from_coeffs(vec![c]),
            den: VPoly::one(),
        }
    }

    /// v^k for any integer k.
    pub fn v_pow(k: i64) -> Scalar {
        if k >= 0 {
            Scalar {
                num: VPoly::monomial(k as usize, BigRational::one()),
                den: VPoly::one(),
            }
        } else {
            Scalar {
                num: VPoly::one(),
                den: VPoly::monomial((-k) as usize, BigRational::one()),
            }
        }
    }

    /// The parameter r = v.
    pub fn r() -> Scalar {
        Scalar::v_pow(1)
    }

    /// The parameter q = v^2.
    pub fn q() -> Scalar {
        Scalar::v_pow(2)
    }

    /// q^k = v^{2k}.
    pub fn q_pow(k: i64) -> Scalar {
        Scalar::v_pow(2 * k)
    }

    pub fn numerator(&self) -> &VPoly {
        &self.num
    }

    pub fn denominator(&self) -> &VPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num == VPoly::one() && self.den == VPoly::one()
    }

    /// Multiplicative inverse; domain error on zero.
    pub fn inv(&self) -> Result<Scalar> {
        if self.is_zero() {
            return Err(Error::Domain("inverse of the zero scalar".into()));
        }
        Ok(Scalar::reduced(self.den.clone(), self.num.clone()))
    }

    /// Integer power; domain error on 0^k with k < 0.
    pub fn pow(&self, k: i64) -> Result<Scalar> {
        if k == 0 {
            return Ok(Scalar::one());
        }
        let base = if k < 0 { self.inv()? } else { self.clone() };
        let mut acc = Scalar::one();
        for _ in 0..k.unsigned_abs() {
            acc = &acc * &base;
        }
        Ok(acc)
    }

    /// If self = c * v^k with c rational and k an integer, return (c, k).
    pub fn as_monomial(&self) -> Option<(BigRational, i64)> {
        let single_term = |p: &VPoly| -> Option<(BigRational, usize)> {
            let d = p.degree()?;
            if p.coeffs()[..d].iter().all(|c| c.is_zero()) {
                Some((p.coeffs()[d].clone(), d))
            } else {
                None
            }
        };
        let (cn, dn) = single_term(&self.num)?;
        let (cd, dd) = single_term(&self.den)?;
        Some((cn / cd, dn as i64 - dd as i64))
    }

    /// Order of vanishing at v = 1 (negative for a pole), used by reports.
    /// Returns 0 for the zero scalar by convention.
    pub fn ord_at_one(&self) -> i64 {
        fn ord(p: &VPoly) -> i64 {
            if p.is_zero() {
                return 0;
            }
            let at = VPoly::from_coeffs(vec![-BigRational::one(), BigRational::one()]);
            let mut k = 0;
            let mut cur = p.clone();
            loop {
                let (q, r) = cur.divrem(&at);
                if r.is_zero() {
                    k += 1;
                    cur = q;
                } else {
                    return k;
                }
            }
        }
        if self.is_zero() {
            return 0;
        }
        ord(&self.num) - ord(&self.den)
    }
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::zero()
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == VPoly::one() {
            return write!(f, "{}", self.num);
        }
        write!(f, "({}) / ({})", self.num, self.den)
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        let num = self
            .num
            .mul(&rhs.den)
            .add(&rhs.num.mul(&self.den));
        let den = self.den.mul(&rhs.den);
        Scalar::reduced(num, den)
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self + &(-rhs)
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        Scalar::reduced(self.num.mul(&rhs.num), self.den.mul(&rhs.den))
    }
}

/// Division panics on a zero divisor; use [`Scalar::inv`] to handle that case.
impl Div for &Scalar {
    type Output = Scalar;
    fn div(self, rhs: &Scalar) -> Scalar {
        let inv = rhs.inv().expect("division by zero scalar");
        self * &inv
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, rhs: Scalar) -> Scalar {
        &self + &rhs
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: Scalar) -> Scalar {
        &self - &rhs
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        &self * &rhs
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(p: i64, q: i64) -> BigRational {
        BigRational::new(BigInt::from(p), BigInt::from(q))
    }

    #[test]
    fn poly_divrem_roundtrip() {
        // (v^2 - 1) = (v + 1)(v - 1) + 0
        let p = VPoly::from_coeffs(vec![rat(-1, 1), rat(0, 1), rat(1, 1)]);
        let d = VPoly::from_coeffs(vec![rat(1, 1), rat(1, 1)]);
        let (q, r) = p.divrem(&d);
        assert!(r.is_zero());
        assert_eq!(q, VPoly::from_coeffs(vec![rat(-1, 1), rat(1, 1)]));
        assert_eq!(q.mul(&d), p);
    }

    #[test]
    fn gcd_is_monic_common_factor() {
        // gcd(v^2 - 1, v^2 + 2v + 1) = v + 1
        let a = VPoly::from_coeffs(vec![rat(-1, 1), rat(0, 1), rat(1, 1)]);
        let b = VPoly::from_coeffs(vec![rat(1, 1), rat(2, 1), rat(1, 1)]);
        let g = a.gcd(&b);
        assert_eq!(g, VPoly::from_coeffs(vec![rat(1, 1), rat(1, 1)]));
    }

    #[test]
    fn scalar_reduction_and_equality() {
        // (v^2 - 1)/(v - 1) = v + 1
        let num = VPoly::from_coeffs(vec![rat(-1, 1), rat(0, 1), rat(1, 1)]);
        let den = VPoly::from_coeffs(vec![rat(-1, 1), rat(1, 1)]);
        let s = Scalar::new(num, den).unwrap();
        let expect = &Scalar::v_pow(1) + &Scalar::one();
        assert_eq!(s, expect);
    }

    #[test]
    fn denominator_stays_monic() {
        // 1/(2v) normalizes to (1/2)/v
        let s = Scalar::new(VPoly::one(), VPoly::monomial(1, rat(2, 1))).unwrap();
        assert_eq!(s.denominator(), &VPoly::monomial(1, rat(1, 1)));
        assert_eq!(s.numerator(), &VPoly::from_coeffs(vec![rat(1, 2)]));
    }

    #[test]
    fn field_axioms_spot_checks() {
        let a = &Scalar::v_pow(3) + &Scalar::from_int(2);
        let b = &Scalar::v_pow(-1) - &Scalar::from_int(7);
        let c = Scalar::q();
        let left = &(&a + &b) * &c;
        let right = &(&a * &c) + &(&b * &c);
        assert_eq!(left, right);
        assert_eq!(&(&a * &b) / &b, a);
        assert!((&a - &a).is_zero());
    }

    #[test]
    fn inverse_of_zero_is_domain_error() {
        assert!(matches!(Scalar::zero().inv(), Err(Error::Domain(_))));
    }

    #[test]
    fn q_is_r_squared() {
        assert_eq!(Scalar::q(), &Scalar::r() * &Scalar::r());
        assert_eq!(Scalar::q_pow(-1), Scalar::v_pow(-2));
    }

    #[test]
    fn monomial_detection() {
        let m = &Scalar::from_rational(rat(3, 4)) * &Scalar::v_pow(-2);
        assert_eq!(m.as_monomial(), Some((rat(3, 4), -2)));
        let non = &Scalar::one() + &Scalar::v_pow(1);
        assert_eq!(non.as_monomial(), None);
    }

    #[test]
    fn ord_at_one_counts_vanishing() {
        // (1 - v)^2 / (1 - v) has order 1 at v = 1
        let one_minus_v = &Scalar::one() - &Scalar::v_pow(1);
        let s = &(&one_minus_v * &one_minus_v) / &one_minus_v;
        assert_eq!(s.ord_at_one(), 1);
        assert_eq!(one_minus_v.inv().unwrap().ord_at_one(), -1);
    }

    #[test]
    fn display_is_readable() {
        let s = &(&Scalar::q() - &Scalar::one()) / &Scalar::v_pow(1);
        assert_eq!(s.to_string(), "(v^2 - 1) / (v)");
    }
}
