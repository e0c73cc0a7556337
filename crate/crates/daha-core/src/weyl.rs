//! The affine Weyl group attached to a root datum.
//!
//! An element is a pair (u, a) standing for t_a * u: finite part u stored as
//! its coweight-action matrix, translation part a a coweight. Group law
//! (u, a)(v, b) = (uv, a + u(b)).
//!
//! Two actions are implemented:
//!
//! * `act_affine_root` / `act_weight`: the reflection action on affine roots
//!   (level, finite weight); translations shift the level by <beta, a>.
//! * `act_exponent`: the action on exponent vectors (level, coweight) of the
//!   torus coordinate ring; translations shift the level by psi_pair(a, b).
//!   The exponent (1, 0) of the central coordinate zeta is fixed by every
//!   element.
//!
//! The inversion set of w is taken as {alpha in R+ : w^{-1}(alpha) in R-},
//! i.e. the left-inversion enumeration along reduced words. With this
//! direction both sign-count = length and the weighted sum identity
//! delta_hat(w) = rho_hat - w(rho_hat) hold, and the vanishing loci of
//! twisted products line up with inversion sets.

use crate::error::{Error, Result};
use crate::laurent::ExpVec;
use crate::rootdata::{AffineRoot, RootDatum};
use std::fmt;

/// Element of the affine Weyl group: t_{trans} * (finite part `mat`).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AffineWeylElement {
    /// Coweight-action matrix of the finite part (columns are images of the
    /// simple-coroot basis vectors). Always unimodular.
    mat: Vec<Vec<i64>>,
    /// Translation coweight.
    trans: Vec<i64>,
}

fn identity_matrix(n: usize) -> Vec<Vec<i64>> {
    (0..n)
        .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
        .collect()
}

fn mat_mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum())
                .collect()
        })
        .collect()
}

fn mat_apply(m: &[Vec<i64>], v: &[i64]) -> Vec<i64> {
    m.iter()
        .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
        .collect()
}

fn mat_transpose(m: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = m.len();
    (0..n).map(|i| (0..n).map(|j| m[j][i]).collect()).collect()
}

fn det(m: &[Vec<i64>]) -> i64 {
    let n = m.len();
    if n == 1 {
        return m[0][0];
    }
    let mut acc = 0;
    for j in 0..n {
        let minor: Vec<Vec<i64>> = m[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(k, _)| *k != j)
                    .map(|(_, &x)| x)
                    .collect()
            })
            .collect();
        let sign = if j % 2 == 0 { 1 } else { -1 };
        acc += sign * m[0][j] * det(&minor);
    }
    acc
}

/// Inverse of a unimodular integer matrix via the adjugate; panics on a
/// non-unimodular input (Weyl matrices always have det ±1).
fn mat_inverse(m: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = m.len();
    let d = det(m);
    assert!(d == 1 || d == -1, "matrix is not unimodular");
    let mut adj = vec![vec![0i64; n]; n];
    for i in 0..n {
        for j in 0..n {
            let minor: Vec<Vec<i64>> = (0..n)
                .filter(|&r| r != i)
                .map(|r| {
                    (0..n)
                        .filter(|&c| c != j)
                        .map(|c| m[r][c])
                        .collect()
                })
                .collect();
            let md = if n == 1 { 1 } else { det(&minor) };
            let sign = if (i + j) % 2 == 0 { 1 } else { -1 };
            adj[j][i] = sign * md * d; // divide by det = multiply by ±1
        }
    }
    adj
}

impl AffineWeylElement {
    pub fn identity(datum: &RootDatum) -> Self {
        AffineWeylElement {
            mat: identity_matrix(datum.rank()),
            trans: vec![0; datum.rank()],
        }
    }

    /// The finite simple reflection s_i (i counted from 0 among finite nodes).
    pub fn simple_reflection(datum: &RootDatum, i: usize) -> Self {
        let n = datum.rank();
        let mut mat = identity_matrix(n);
        // s_i(b) = b - <alpha_i, b> e_i, so row i becomes e_i - row_i(C).
        for j in 0..n {
            mat[i][j] -= datum.cartan()[i][j];
        }
        AffineWeylElement {
            mat,
            trans: vec![0; n],
        }
    }

    /// The finite reflection s_beta for a root beta (omega coordinates).
    pub fn finite_reflection(datum: &RootDatum, beta_omega: &[i64]) -> Result<Self> {
        let coroot = datum.simple_coords(beta_omega).ok_or_else(|| {
            Error::Domain("reflection in a vector that is not a root".into())
        })?;
        let n = datum.rank();
        // s_beta(b) = b - <beta, b> beta_vee
        let mut mat = identity_matrix(n);
        for i in 0..n {
            for j in 0..n {
                mat[i][j] -= coroot[i] * beta_omega[j];
            }
        }
        Ok(AffineWeylElement {
            mat,
            trans: vec![0; n],
        })
    }

    /// The affine reflection s_0 = t_{-theta_vee} s_theta.
    pub fn affine_reflection(datum: &RootDatum) -> Self {
        let theta = datum.theta().clone();
        let mut s = AffineWeylElement::finite_reflection(datum, &theta.omega)
            .expect("theta is a root");
        s.trans = theta.simple.iter().map(|c| -c).collect();
        s
    }

    /// Generator by affine node index: 0 is the affine node, 1..=rank are the
    /// finite nodes (so node i is the finite reflection s_{i-1}).
    pub fn generator(datum: &RootDatum, node: usize) -> Result<Self> {
        if node == 0 {
            Ok(AffineWeylElement::affine_reflection(datum))
        } else if node <= datum.rank() {
            Ok(AffineWeylElement::simple_reflection(datum, node - 1))
        } else {
            Err(Error::Domain(format!(
                "generator index {node} out of range for rank {}",
                datum.rank()
            )))
        }
    }

    /// Pure translation t_a.
    pub fn translation(datum: &RootDatum, a: &[i64]) -> Self {
        AffineWeylElement {
            mat: identity_matrix(datum.rank()),
            trans: a.to_vec(),
        }
    }

    /// The reflection in an arbitrary affine root (n, beta):
    /// t_{n beta_vee} s_beta.
    pub fn affine_root_reflection(datum: &RootDatum, alpha: &AffineRoot) -> Result<Self> {
        let mut s = AffineWeylElement::finite_reflection(datum, &alpha.finite)?;
        let coroot = datum
            .simple_coords(&alpha.finite)
            .expect("checked by finite_reflection");
        s.trans = coroot.iter().map(|c| c * alpha.level).collect();
        Ok(s)
    }

    pub fn from_word(datum: &RootDatum, word: &[usize]) -> Result<Self> {
        let mut w = AffineWeylElement::identity(datum);
        for &i in word {
            w = w.mul(&AffineWeylElement::generator(datum, i)?);
        }
        Ok(w)
    }

    pub fn rank(&self) -> usize {
        self.trans.len()
    }

    pub fn finite_matrix(&self) -> &[Vec<i64>] {
        &self.mat
    }

    pub fn translation_part(&self) -> &[i64] {
        &self.trans
    }

    pub fn is_identity(&self) -> bool {
        self.mat == identity_matrix(self.rank()) && self.trans.iter().all(|&c| c == 0)
    }

    pub fn is_translation(&self) -> bool {
        self.mat == identity_matrix(self.rank())
    }

    pub fn mul(&self, rhs: &AffineWeylElement) -> AffineWeylElement {
        let mat = mat_mul(&self.mat, &rhs.mat);
        let shifted = mat_apply(&self.mat, &rhs.trans);
        let trans = self
            .trans
            .iter()
            .zip(&shifted)
            .map(|(a, b)| a + b)
            .collect();
        AffineWeylElement { mat, trans }
    }

    pub fn inverse(&self) -> AffineWeylElement {
        let inv = mat_inverse(&self.mat);
        let trans = mat_apply(&inv, &self.trans).iter().map(|c| -c).collect();
        AffineWeylElement { mat: inv, trans }
    }

    /// Finite part acting on a coweight.
    pub fn finite_on_coweight(&self, b: &[i64]) -> Vec<i64> {
        mat_apply(&self.mat, b)
    }

    /// Finite part acting on a weight: the inverse transpose of `mat`,
    /// so that <u(v), u(b)> = <v, b>.
    pub fn finite_on_weight(&self, v: &[i64]) -> Vec<i64> {
        let m = mat_transpose(&mat_inverse(&self.mat));
        mat_apply(&m, v)
    }

    /// Reflection action on an affine root (or any affine weight):
    /// (u, a)(n, beta) = (n + <u(beta), a>, u(beta)).
    pub fn act_affine_root(&self, alpha: &AffineRoot) -> AffineRoot {
        let finite = self.finite_on_weight(&alpha.finite);
        let level = alpha.level + RootDatum::pair(&finite, &self.trans);
        AffineRoot { level, finite }
    }

    /// Substitution action on exponent vectors (level, coweight):
    /// (u, a)(m, b) = (m + psi_pair(a, u(b)), u(b)). Fixes (1, 0, ..., 0).
    pub fn act_exponent(&self, datum: &RootDatum, e: &ExpVec) -> ExpVec {
        let b = self.finite_on_coweight(e.finite());
        let level = e.level() + datum.psi_pair(&self.trans, &b);
        let mut coords = Vec::with_capacity(e.width());
        coords.push(level);
        coords.extend(b);
        ExpVec(coords)
    }

    /// Left inversion set {alpha in R+ : w^{-1}(alpha) in R-}, enumerated
    /// with the level bound <beta, a> per finite direction.
    pub fn inversion_set(&self, datum: &RootDatum) -> Vec<AffineRoot> {
        let winv = self.inverse();
        let mut out = Vec::new();
        let mut finite_candidates = Vec::new();
        for r in datum.positive_roots() {
            finite_candidates.push(r.omega.clone());
            finite_candidates.push(r.omega.iter().map(|c| -c).collect());
        }
        for beta in finite_candidates {
            // w^{-1}(n, beta) has level n - <beta, a>; it can only be
            // negative when n <= <beta, a>.
            let bound = RootDatum::pair(&beta, &self.trans);
            let start = if datum.is_positive_affine(&AffineRoot {
                level: 0,
                finite: beta.clone(),
            }) {
                0
            } else {
                1
            };
            let mut n = start;
            while n <= bound {
                let alpha = AffineRoot {
                    level: n,
                    finite: beta.clone(),
                };
                let image = winv.act_affine_root(&alpha);
                if !datum.is_positive_affine(&image) {
                    out.push(alpha);
                }
                n += 1;
            }
        }
        out.sort();
        out
    }

    /// Coxeter length = number of inversions.
    pub fn length(&self, datum: &RootDatum) -> usize {
        self.inversion_set(datum).len()
    }

    /// Sum of the inversion set as an affine weight (level, omega coords).
    pub fn delta_hat(&self, datum: &RootDatum) -> AffineRoot {
        let mut level = 0;
        let mut finite = vec![0; datum.rank()];
        for alpha in self.inversion_set(datum) {
            level += alpha.level;
            for (acc, c) in finite.iter_mut().zip(&alpha.finite) {
                *acc += c;
            }
        }
        AffineRoot { level, finite }
    }

    /// rho_hat - w(rho_hat) where rho_hat = rho + h_dual Lambda_0 on the
    /// weight side; the independent side of the delta_hat identity.
    pub fn rho_hat_drop(&self, datum: &RootDatum) -> AffineRoot {
        // rho_hat sits at level h_dual on the weight side, so the
        // translation part acts with the level-h_dual affine formula
        // (finite shift by h_dual Psi(a), quadratic correction in the
        // level direction), not the level-zero root formula.
        let h = datum.h_dual();
        let rho = datum.rho();
        let u_rho = self.finite_on_weight(&rho);
        let psi_a = datum.psi_apply(&self.trans);
        let norm = datum.psi_pair(&self.trans, &self.trans);
        debug_assert_eq!(norm % 2, 0, "even quadratic form on coweights");
        AffineRoot {
            level: -RootDatum::pair(&u_rho, &self.trans) + h * norm / 2,
            finite: (0..datum.rank())
                .map(|i| rho[i] - u_rho[i] + h * psi_a[i])
                .collect(),
        }
    }

    /// True when s_node * w is shorter than w (a left descent). Equivalent
    /// to w^{-1}(alpha_node) being negative.
    pub fn has_left_descent(&self, datum: &RootDatum, node: usize) -> bool {
        let alpha = &self.simple_affine(datum, node);
        let image = self.inverse().act_affine_root(alpha);
        !datum.is_positive_affine(&image)
    }

    fn simple_affine(&self, datum: &RootDatum, node: usize) -> AffineRoot {
        datum.simple_affine_roots()[node].clone()
    }

    /// A reduced word (affine node indices, 0 = affine), peeled from the
    /// left by descents. Deterministic: smallest descent first.
    pub fn reduced_word(&self, datum: &RootDatum) -> Vec<usize> {
        let mut word = Vec::new();
        let mut w = self.clone();
        'peel: while !w.is_identity() {
            for node in 0..=datum.rank() {
                if w.has_left_descent(datum, node) {
                    word.push(node);
                    let s = AffineWeylElement::generator(datum, node).expect("valid node");
                    w = s.mul(&w);
                    continue 'peel;
                }
            }
            unreachable!("non-identity element with no descent");
        }
        word
    }

    /// Bruhat order via the subword property: u <= w iff u appears among the
    /// products of reduced subwords of a fixed reduced word of w.
    pub fn bruhat_leq(&self, other: &AffineWeylElement, datum: &RootDatum) -> bool {
        let word = other.reduced_word(datum);
        let mut reachable = vec![AffineWeylElement::identity(datum)];
        for &node in &word {
            let s = AffineWeylElement::generator(datum, node).expect("valid node");
            let mut next = reachable.clone();
            for x in &reachable {
                let xs = x.mul(&s);
                if xs.length(datum) > x.length(datum) && !next.contains(&xs) {
                    next.push(xs);
                }
            }
            reachable = next;
        }
        reachable.contains(self)
    }
}

impl fmt::Display for AffineWeylElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            return write!(f, "e");
        }
        write!(f, "t{:?}*m{:?}", self.trans, self.mat)
    }
}

/// Breadth-first ball of radius `radius` in the word metric; returns each
/// element with its BFS distance, which is the word-length oracle used to
/// cross-check the inversion count.
pub fn bfs_ball(datum: &RootDatum, radius: usize) -> Vec<(AffineWeylElement, usize)> {
    use std::collections::HashMap;
    let mut dist: HashMap<AffineWeylElement, usize> = HashMap::new();
    let mut frontier = vec![AffineWeylElement::identity(datum)];
    dist.insert(frontier[0].clone(), 0);
    for d in 1..=radius {
        let mut next = Vec::new();
        for w in &frontier {
            for node in 0..=datum.rank() {
                let s = AffineWeylElement::generator(datum, node).expect("valid node");
                let sw = s.mul(w);
                if !dist.contains_key(&sw) {
                    dist.insert(sw.clone(), d);
                    next.push(sw);
                }
            }
        }
        frontier = next;
    }
    let mut out: Vec<_> = dist.into_iter().collect();
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootdata::Label;

    fn datum(l: Label) -> RootDatum {
        RootDatum::new(l)
    }

    #[test]
    fn generators_are_involutions() {
        for label in Label::all() {
            let d = datum(label);
            for node in 0..=d.rank() {
                let s = AffineWeylElement::generator(&d, node).unwrap();
                assert!(s.mul(&s).is_identity(), "{label} node {node}");
                assert_eq!(s.length(&d), 1, "{label} node {node}");
            }
        }
    }

    #[test]
    fn finite_braid_relation_a2() {
        let d = datum(Label::A2);
        let s1 = AffineWeylElement::generator(&d, 1).unwrap();
        let s2 = AffineWeylElement::generator(&d, 2).unwrap();
        assert_eq!(s1.mul(&s2).mul(&s1), s2.mul(&s1).mul(&s2));
    }

    #[test]
    fn affine_reflection_structure() {
        let d = datum(Label::A2);
        let s0 = AffineWeylElement::affine_reflection(&d);
        assert_eq!(s0.translation_part(), &[-1, -1]);
        // s0 sends alpha_0 to its negative
        let a0 = d.simple_affine_roots()[0].clone();
        assert_eq!(s0.act_affine_root(&a0), a0.neg());
        assert!(s0.mul(&s0).is_identity());
    }

    #[test]
    fn group_law_against_action() {
        // act(w1 w2) = act(w1) o act(w2) on both actions.
        let d = datum(Label::A2);
        let w1 = AffineWeylElement::from_word(&d, &[0, 1, 2]).unwrap();
        let w2 = AffineWeylElement::from_word(&d, &[2, 0]).unwrap();
        let w12 = w1.mul(&w2);
        let beta = AffineRoot {
            level: 3,
            finite: vec![1, 1],
        };
        assert_eq!(
            w12.act_affine_root(&beta),
            w1.act_affine_root(&w2.act_affine_root(&beta))
        );
        let e = ExpVec(vec![-2, 1, 4]);
        assert_eq!(
            w12.act_exponent(&d, &e),
            w1.act_exponent(&d, &w2.act_exponent(&d, &e))
        );
    }

    #[test]
    fn inverse_is_inverse() {
        let d = datum(Label::A3);
        let w = AffineWeylElement::from_word(&d, &[0, 2, 1, 3, 0]).unwrap();
        assert!(w.mul(&w.inverse()).is_identity());
        assert!(w.inverse().mul(&w).is_identity());
    }

    #[test]
    fn central_exponent_is_fixed() {
        let d = datum(Label::A2);
        let zeta = ExpVec(vec![1, 0, 0]);
        for word in [vec![0], vec![1], vec![2], vec![0, 1, 2, 0]] {
            let w = AffineWeylElement::from_word(&d, &word).unwrap();
            assert_eq!(w.act_exponent(&d, &zeta), zeta);
        }
    }

    #[test]
    fn translation_action_shifts_level_by_pairing() {
        let d = datum(Label::A2);
        let t = AffineWeylElement::translation(&d, &[1, 0]);
        // On exponents: level shift psi_pair(a, b).
        let e = ExpVec(vec![0, 0, 1]);
        let img = t.act_exponent(&d, &e);
        assert_eq!(img, ExpVec(vec![d.psi_pair(&[1, 0], &[0, 1]), 0, 1]));
        // On roots: level shift <beta, a>.
        let alpha1 = AffineRoot {
            level: 0,
            finite: d.simple_root(0).omega,
        };
        assert_eq!(t.act_affine_root(&alpha1).level, 2);
    }

    #[test]
    fn length_matches_bfs_on_small_balls() {
        for label in [Label::A1, Label::A2] {
            let d = datum(label);
            for (w, bfs_len) in bfs_ball(&d, 4) {
                assert_eq!(w.length(&d), bfs_len, "{label}: {w}");
            }
        }
    }

    #[test]
    fn dominant_translation_length() {
        let d = datum(Label::A2);
        // Coweights live in simple-coroot coordinates, so dominance means
        // C a >= 0 entrywise; (1, 0) is not dominant in A2.
        for a in [[1i64, 1], [2, 1], [1, 2], [2, 2]] {
            assert!(d.is_dominant_coweight(&a));
            let t = AffineWeylElement::translation(&d, &a);
            let expect = RootDatum::pair(
                &d.rho().iter().map(|c| 2 * c).collect::<Vec<_>>(),
                &a,
            );
            assert_eq!(t.length(&d) as i64, expect, "a = {a:?}");
        }
    }

    #[test]
    fn inversion_set_of_generators() {
        let d = datum(Label::A2);
        for node in 0..=d.rank() {
            let s = AffineWeylElement::generator(&d, node).unwrap();
            let inv = s.inversion_set(&d);
            assert_eq!(inv, vec![d.simple_affine_roots()[node].clone()]);
        }
    }

    #[test]
    fn delta_hat_identity_small() {
        let d = datum(Label::A2);
        for word in [
            vec![],
            vec![1],
            vec![1, 2],
            vec![0, 1],
            vec![0, 1, 2, 0],
            vec![1, 0, 2, 1, 0],
        ] {
            let w = AffineWeylElement::from_word(&d, &word).unwrap();
            assert_eq!(w.delta_hat(&d), w.rho_hat_drop(&d), "word {word:?}");
        }
    }

    #[test]
    fn reduced_word_roundtrip() {
        let d = datum(Label::A2);
        let w = AffineWeylElement::from_word(&d, &[0, 1, 2, 0, 1]).unwrap();
        let word = w.reduced_word(&d);
        assert_eq!(word.len(), w.length(&d));
        assert_eq!(AffineWeylElement::from_word(&d, &word).unwrap(), w);
    }

    #[test]
    fn bruhat_chain_and_incomparability() {
        let d = datum(Label::A2);
        let e = AffineWeylElement::identity(&d);
        let s1 = AffineWeylElement::generator(&d, 1).unwrap();
        let s2 = AffineWeylElement::generator(&d, 2).unwrap();
        let s12 = s1.mul(&s2);
        assert!(e.bruhat_leq(&s1, &d));
        assert!(s1.bruhat_leq(&s12, &d));
        assert!(s2.bruhat_leq(&s12, &d));
        assert!(!s12.bruhat_leq(&s1, &d));
        assert!(!s1.bruhat_leq(&s2, &d));
    }

    #[test]
    fn affine_root_reflection_matches_word() {
        // s_{(1, -theta)} must be s_0 itself.
        let d = datum(Label::A2);
        let a0 = d.simple_affine_roots()[0].clone();
        let refl = AffineWeylElement::affine_root_reflection(&d, &a0).unwrap();
        assert_eq!(refl, AffineWeylElement::affine_reflection(&d));
    }
}
