//! Simply laced root data of rank <= 4: A1, A2, A3, A4, D4.
//!
//! Coordinate conventions used across the crate:
//!
//! * weights are written in the fundamental-weight basis, coweights in the
//!   simple-coroot basis, so the natural pairing <weight, coweight> is the
//!   plain dot product;
//! * the j-th simple root, written as a weight, is the j-th column of the
//!   Cartan matrix; a root is also carried in simple-root coordinates, which
//!   (simply laced) equal the simple-coroot coordinates of its coroot;
//! * the identification Psi from coweights to weights is multiplication by
//!   the Cartan matrix; psi_pair(a, b) = a^T C b is symmetric;
//! * affine roots are pairs (level, finite root) and the extended exponent
//!   lattice is Z * level + coweights, exponents written level-first.
//!
//! The table is generated, not hardcoded: positive roots come from the
//! reflection closure of the simple roots, theta is the unique root of
//! maximal height, and the dual Coxeter number is 1 + height(theta).

use crate::error::{Error, Result};
use crate::laurent::ExpVec;
use std::fmt;

/// Names of the supported root data.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Label {
    A1,
    A2,
    A3,
    A4,
    D4,
}

impl Label {
    pub fn all() -> [Label; 5] {
        [Label::A1, Label::A2, Label::A3, Label::A4, Label::D4]
    }

    pub fn parse(s: &str) -> Result<Label> {
        match s.trim().to_ascii_uppercase().as_str() {
            "A1" => Ok(Label::A1),
            "A2" => Ok(Label::A2),
            "A3" => Ok(Label::A3),
            "A4" => Ok(Label::A4),
            "D4" => Ok(Label::D4),
            other => Err(Error::Parse(format!(
                "unknown root datum label '{other}' (expected A1, A2, A3, A4 or D4)"
            ))),
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Label::A1 => "A1",
            Label::A2 => "A2",
            Label::A3 => "A3",
            Label::A4 => "A4",
            Label::D4 => "D4",
        };
        write!(f, "{s}")
    }
}

/// A finite root carried in both coordinate systems.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Root {
    /// Fundamental-weight coordinates.
    pub omega: Vec<i64>,
    /// Simple-root coordinates; simply laced, these are also the
    /// simple-coroot coordinates of the coroot.
    pub simple: Vec<i64>,
}

impl Root {
    pub fn height(&self) -> i64 {
        self.simple.iter().sum()
    }
}

/// An affine root: a level together with a finite root, the finite part in
/// fundamental-weight coordinates. Positive means level > 0, or level = 0
/// with a positive finite part.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AffineRoot {
    pub level: i64,
    pub finite: Vec<i64>,
}

impl AffineRoot {
    pub fn neg(&self) -> AffineRoot {
        AffineRoot {
            level: -self.level,
            finite: self.finite.iter().map(|c| -c).collect(),
        }
    }
}

impl fmt::Display for AffineRoot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}; ", self.level)?;
        for (i, c) in self.finite.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// A rank <= 4 simply laced root datum with its derived tables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootDatum {
    label: Label,
    rank: usize,
    cartan: Vec<Vec<i64>>,
    positive: Vec<Root>,
    theta: Root,
    h_dual: i64,
}

impl RootDatum {
    pub fn new(label: Label) -> RootDatum {
        let cartan = cartan_matrix(label);
        let rank = cartan.len();
        let positive = positive_roots(&cartan);
        let theta = positive
            .iter()
            .max_by_key(|r| r.height())
            .expect("nonempty root system")
            .clone();
        let h_dual = 1 + theta.height();
        RootDatum {
            label,
            rank,
            cartan,
            positive,
            theta,
            h_dual,
        }
    }

    pub fn from_label(s: &str) -> Result<RootDatum> {
        Ok(RootDatum::new(Label::parse(s)?))
    }

    pub fn label(&self) -> Label {
        self.label
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Width of exponent vectors: level plus rank coordinates.
    pub fn width(&self) -> usize {
        self.rank + 1
    }

    pub fn cartan(&self) -> &[Vec<i64>] {
        &self.cartan
    }

    pub fn positive_roots(&self) -> &[Root] {
        &self.positive
    }

    pub fn theta(&self) -> &Root {
        &self.theta
    }

    /// Dual Coxeter number, 1 + height(theta).
    pub fn h_dual(&self) -> i64 {
        self.h_dual
    }

    /// rho in fundamental-weight coordinates: all ones.
    pub fn rho(&self) -> Vec<i64> {
        vec![1; self.rank]
    }

    pub fn simple_root(&self, i: usize) -> Root {
        let mut simple = vec![0; self.rank];
        simple[i] = 1;
        Root {
            omega: (0..self.rank).map(|k| self.cartan[k][i]).collect(),
            simple,
        }
    }

    /// <weight, coweight>: dot product in the chosen bases.
    pub fn pair(weight: &[i64], coweight: &[i64]) -> i64 {
        weight.iter().zip(coweight).map(|(a, b)| a * b).sum()
    }

    /// Psi: coweights -> weights, multiplication by the Cartan matrix.
    pub fn psi_apply(&self, coweight: &[i64]) -> Vec<i64> {
        (0..self.rank)
            .map(|i| {
                (0..self.rank)
                    .map(|j| self.cartan[i][j] * coweight[j])
                    .sum()
            })
            .collect()
    }

    /// The symmetric form psi_pair(a, b) = <Psi(a), b> = a^T C b.
    pub fn psi_pair(&self, a: &[i64], b: &[i64]) -> i64 {
        RootDatum::pair(&self.psi_apply(a), b)
    }

    /// Height of a coweight: sum of simple-coroot coordinates, also
    /// <rho, coweight>.
    pub fn coweight_height(coweight: &[i64]) -> i64 {
        coweight.iter().sum()
    }

    /// <alpha_i, b> for a coweight b: row i of C dotted with b.
    pub fn simple_pairing(&self, i: usize, coweight: &[i64]) -> i64 {
        (0..self.rank).map(|j| self.cartan[i][j] * coweight[j]).sum()
    }

    pub fn is_dominant_coweight(&self, coweight: &[i64]) -> bool {
        (0..self.rank).all(|i| self.simple_pairing(i, coweight) >= 0)
    }

    /// Locate a finite root given by fundamental-weight coordinates.
    /// Returns (root, sign) with sign +1 for positive, -1 for negative.
    pub fn find_root(&self, omega: &[i64]) -> Option<(&Root, i64)> {
        for r in &self.positive {
            if r.omega == omega {
                return Some((r, 1));
            }
            if r.omega.iter().map(|c| -c).eq(omega.iter().copied()) {
                return Some((r, -1));
            }
        }
        None
    }

    /// Simple-root coordinates of a finite root in weight coordinates,
    /// with sign; None if the vector is not a root.
    pub fn simple_coords(&self, omega: &[i64]) -> Option<Vec<i64>> {
        let (r, sign) = self.find_root(omega)?;
        Some(r.simple.iter().map(|c| c * sign).collect())
    }

    /// True when the affine root is positive.
    pub fn is_positive_affine(&self, a: &AffineRoot) -> bool {
        if a.level != 0 {
            return a.level > 0;
        }
        matches!(self.find_root(&a.finite), Some((_, 1)))
    }

    pub fn is_affine_root(&self, a: &AffineRoot) -> bool {
        self.find_root(&a.finite).is_some()
    }

    /// The simple affine roots: alpha_0 = (1, -theta), then (0, alpha_i).
    pub fn simple_affine_roots(&self) -> Vec<AffineRoot> {
        let mut out = Vec::with_capacity(self.rank + 1);
        out.push(AffineRoot {
            level: 1,
            finite: self.theta.omega.iter().map(|c| -c).collect(),
        });
        for i in 0..self.rank {
            out.push(AffineRoot {
                level: 0,
                finite: self.simple_root(i).omega,
            });
        }
        out
    }

    /// Affine coroot as an exponent vector: (-level, finite coroot).
    /// The sign flip on the level makes <rho_hat, coroot> = 1 for every
    /// simple affine root. Domain error if the finite part is not a root.
    pub fn affine_coroot(&self, a: &AffineRoot) -> Result<ExpVec> {
        let simple = self.simple_coords(&a.finite).ok_or_else(|| {
            Error::Domain(format!("finite part of {a} is not a root"))
        })?;
        let mut coords = Vec::with_capacity(self.width());
        coords.push(-a.level);
        coords.extend(simple);
        Ok(ExpVec(coords))
    }

    /// The character exponent of an affine root on the torus: (level, finite
    /// coroot), level sign preserved. This map intertwines the reflection
    /// action on roots with the substitution action on exponents; the affine
    /// coroot (level negated) does not.
    pub fn root_character(&self, a: &AffineRoot) -> Result<ExpVec> {
        let simple = self.simple_coords(&a.finite).ok_or_else(|| {
            Error::Domain(format!("finite part of {a} is not a root"))
        })?;
        let mut coords = Vec::with_capacity(self.width());
        coords.push(a.level);
        coords.extend(simple);
        Ok(ExpVec(coords))
    }

    /// Reverse lookup: which affine root has the given character exponent?
    /// The exponent must be (level, coroot coords of a finite root).
    pub fn root_from_character(&self, e: &ExpVec) -> Option<AffineRoot> {
        let coords = e.finite();
        for r in &self.positive {
            if r.simple == coords {
                return Some(AffineRoot {
                    level: e.level(),
                    finite: r.omega.clone(),
                });
            }
            if r.simple.iter().map(|c| -c).eq(coords.iter().copied()) {
                return Some(AffineRoot {
                    level: e.level(),
                    finite: r.omega.iter().map(|c| -c).collect(),
                });
            }
        }
        None
    }

    /// <rho_hat, e> for an exponent e = (m, b): -h_dual * m + height(b).
    pub fn rho_hat_pair(&self, e: &ExpVec) -> i64 {
        -self.h_dual * e.level() + RootDatum::coweight_height(e.finite())
    }

    /// Sum of all positive coroots, as a coweight (equals 2 rho_vee).
    pub fn two_rho_vee(&self) -> Vec<i64> {
        let mut acc = vec![0; self.rank];
        for r in &self.positive {
            for (a, c) in acc.iter_mut().zip(&r.simple) {
                *a += c;
            }
        }
        acc
    }
}

fn cartan_matrix(label: Label) -> Vec<Vec<i64>> {
    fn a_chain(n: usize) -> Vec<Vec<i64>> {
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if i == j {
                            2
                        } else if i.abs_diff(j) == 1 {
                            -1
                        } else {
                            0
                        }
                    })
                    .collect()
            })
            .collect()
    }
    match label {
        Label::A1 => a_chain(1),
        Label::A2 => a_chain(2),
        Label::A3 => a_chain(3),
        Label::A4 => a_chain(4),
        Label::D4 => vec![
            vec![2, 0, 0, -1],
            vec![0, 2, 0, -1],
            vec![0, 0, 2, -1],
            vec![-1, -1, -1, 2],
        ],
    }
}

/// Reflection closure of the simple roots, in simple-root coordinates,
/// keeping the positive ones. Terminates because rank <= 4 root systems are
/// finite; the closure revisits nothing thanks to the seen-set.
fn positive_roots(cartan: &[Vec<i64>]) -> Vec<Root> {
    let rank = cartan.len();
    let mut seen: Vec<Vec<i64>> = Vec::new();
    let mut queue: Vec<Vec<i64>> = (0..rank)
        .map(|i| {
            let mut e = vec![0; rank];
            e[i] = 1;
            e
        })
        .collect();
    while let Some(x) = queue.pop() {
        if seen.contains(&x) {
            continue;
        }
        seen.push(x.clone());
        for i in 0..rank {
            // s_i in simple-root coordinates: subtract <beta, alpha_i_vee> e_i.
            let c: i64 = (0..rank).map(|j| cartan[i][j] * x[j]).sum();
            let mut y = x.clone();
            y[i] -= c;
            let positive = y.iter().find(|&&v| v != 0).map(|&v| v > 0).unwrap_or(false);
            if positive && !seen.contains(&y) {
                queue.push(y);
            }
        }
    }
    seen.sort_by_key(|x| (x.iter().sum::<i64>(), x.clone()));
    seen.into_iter()
        .map(|simple| {
            let omega = (0..rank)
                .map(|i| (0..rank).map(|j| cartan[i][j] * simple[j]).sum())
                .collect();
            Root { omega, simple }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_match_the_classification() {
        let expect = [
            (Label::A1, 1),
            (Label::A2, 3),
            (Label::A3, 6),
            (Label::A4, 10),
            (Label::D4, 12),
        ];
        for (label, count) in expect {
            let d = RootDatum::new(label);
            assert_eq!(d.positive_roots().len(), count, "{label}");
        }
    }

    #[test]
    fn dual_coxeter_numbers() {
        let expect = [
            (Label::A1, 2),
            (Label::A2, 3),
            (Label::A3, 4),
            (Label::A4, 5),
            (Label::D4, 6),
        ];
        for (label, h) in expect {
            assert_eq!(RootDatum::new(label).h_dual(), h, "{label}");
        }
    }

    /// Independent derivation of the pairing form: summing beta <beta, a>
    /// over positive roots beta gives h_dual * Psi(a), so the Cartan matrix
    /// used as Psi must satisfy sum_beta omega(beta) omega(beta)^T =
    /// h_dual * C (both factors in fundamental-weight coordinates). This
    /// pins the matrix against the root table rather than trusting the
    /// hardcoded table twice.
    #[test]
    fn psi_matches_root_average() {
        for label in Label::all() {
            let d = RootDatum::new(label);
            let n = d.rank();
            let mut m = vec![vec![0i64; n]; n];
            for r in d.positive_roots() {
                for i in 0..n {
                    for j in 0..n {
                        m[i][j] += r.omega[i] * r.omega[j];
                    }
                }
            }
            for i in 0..n {
                for j in 0..n {
                    assert_eq!(
                        m[i][j],
                        d.h_dual() * d.cartan()[i][j],
                        "{label} entry ({i},{j})"
                    );
                }
            }
        }
    }

    #[test]
    fn psi_pair_is_symmetric_and_even_on_coroots() {
        for label in Label::all() {
            let d = RootDatum::new(label);
            for r in d.positive_roots() {
                assert_eq!(d.psi_pair(&r.simple, &r.simple), 2, "{label}: norm");
                for s in d.positive_roots() {
                    assert_eq!(
                        d.psi_pair(&r.simple, &s.simple),
                        d.psi_pair(&s.simple, &r.simple)
                    );
                }
            }
        }
    }

    #[test]
    fn theta_is_the_unique_highest_root() {
        for label in Label::all() {
            let d = RootDatum::new(label);
            let top = d.theta().height();
            let at_top: Vec<_> = d
                .positive_roots()
                .iter()
                .filter(|r| r.height() == top)
                .collect();
            assert_eq!(at_top.len(), 1, "{label}");
            // theta dominates: theta - beta has nonnegative root coordinates
            for r in d.positive_roots() {
                assert!(d
                    .theta()
                    .simple
                    .iter()
                    .zip(&r.simple)
                    .all(|(t, b)| t >= b));
            }
        }
    }

    #[test]
    fn frozen_a2_data() {
        let d = RootDatum::new(Label::A2);
        assert_eq!(d.cartan(), &[vec![2, -1], vec![-1, 2]]);
        assert_eq!(d.simple_root(0).omega, vec![2, -1]);
        assert_eq!(d.simple_root(1).omega, vec![-1, 2]);
        assert_eq!(d.theta().omega, vec![1, 1]);
        assert_eq!(d.theta().simple, vec![1, 1]);
        assert_eq!(d.rho(), vec![1, 1]);
    }

    #[test]
    fn frozen_d4_theta() {
        let d = RootDatum::new(Label::D4);
        assert_eq!(d.theta().simple, vec![1, 1, 1, 2]);
    }

    #[test]
    fn simple_affine_coroots_pair_to_one_with_rho_hat() {
        for label in Label::all() {
            let d = RootDatum::new(label);
            for a in d.simple_affine_roots() {
                let cv = d.affine_coroot(&a).unwrap();
                assert_eq!(d.rho_hat_pair(&cv), 1, "{label}: {a}");
            }
        }
    }

    #[test]
    fn character_and_coroot_differ_only_in_level_sign() {
        let d = RootDatum::new(Label::A2);
        let a0 = &d.simple_affine_roots()[0];
        let cv = d.affine_coroot(a0).unwrap();
        let ch = d.root_character(a0).unwrap();
        assert_eq!(cv, ExpVec(vec![-1, -1, -1]));
        assert_eq!(ch, ExpVec(vec![1, -1, -1]));
        assert_eq!(d.root_from_character(&ch), Some(a0.clone()));
    }

    #[test]
    fn two_rho_vee_pairs_to_two_on_simple_roots() {
        for label in Label::all() {
            let d = RootDatum::new(label);
            let k = d.two_rho_vee();
            for i in 0..d.rank() {
                assert_eq!(d.simple_pairing(i, &k), 2, "{label} node {i}");
            }
        }
    }
}
