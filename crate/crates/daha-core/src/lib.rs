//! Exact-arithmetic model of a double affine Hecke algebra realized inside the
//! twisted group algebra of rational functions on an affine torus.
//!
//! The layers, bottom to top:
//!
//! * [`scalar`]: the coefficient field Q(v), exact rational functions in one
//!   variable. The deformation parameters are r = v and q = v^2.
//! * [`laurent`]: multivariate Laurent polynomials over Q(v), exponents in
//!   Z^{1+n} with the level coordinate first.
//! * [`rootdata`]: simply laced root data of rank <= 4 (A1..A4, D4) with the
//!   pairing form used to glue level and coweight coordinates.
//! * [`weyl`]: the affine Weyl group, its two actions (on affine weights and
//!   on level-coweight pairs), lengths, inversion sets, Bruhat order.
//! * [`ratfun`]: rational functions whose denominators are products of
//!   binomial atoms (1 - c t^mu), with exact order and residue extraction
//!   along root hypersurfaces.
//! * [`groupalg`]: the twisted group algebra; elements are finite sums
//!   sum_w f_w [w] with f_w rational, in either the straight or the
//!   rho-shifted (star) substitution mode.
//! * [`cherednik`]: Demazure-Lusztig generators, translation elements built
//!   from them, relation checking, and the residue membership checker.
//! * [`heckereg`]: c-functions, regularized intertwiner-style elements, a
//!   lattice-preservation oracle for the rank-1 local lemma, and a rank-1
//!   p-adic summation oracle.
//! * [`mellin`]: finite torsor functions, Mellin transforms, simplicial cone
//!   expansions and resummation, and the rho-shift isomorphism between the
//!   two substitution modes.
//! * [`suite`]: the end-to-end verification suite used by the `daha suite`
//!   command and the acceptance tests.
//! * [`serial`]: serde-backed JSON readers and writers for the public types.

pub mod error;
pub mod scalar;
pub mod laurent;
pub mod rootdata;
pub mod weyl;
pub mod ratfun;
pub mod groupalg;
pub mod cherednik;
pub mod heckereg;
pub mod mellin;
pub mod serial;
pub mod suite;

pub use error::{Error, Result};
