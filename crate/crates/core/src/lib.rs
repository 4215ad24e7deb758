//! Exact 2-descent for glued genus-2 Jacobians.
//!
//! Given elliptic curves `E: y^2 = f(x)` and `F: y^2 = g(x)` over Q and an
//! identification `psi` of their 2-torsion that is not induced by a geometric
//! isomorphism, the genus-2 curve `C` obtained by gluing `E` and `F` along
//! `psi` has Jacobian `J = (E x F) / graph(psi)`. A pair `(P, Q)` of rational
//! points is in the image of `J(Q)` under `(phi_*, phi'_*)` exactly when the
//! descent classes of `P` and `Q` agree after transport by `psi`.
//!
//! `J` itself is never constructed. Everything is phrased in terms of the
//! triple `(E, F, psi)`:
//!
//! * [`arith`]: integers, factorization, square classes of Q*, F2 linear algebra.
//! * [`ellcurve`]: curves `y^2 = monic cubic`, group law, torsion, point search.
//! * [`etale`]: the cubic étale algebra `Q[x]/(f)`, norms, square certification.
//! * [`glue`]: gluing data and cover-map identities.
//! * [`descent`]: the descent maps, the image criterion, and the obstruction test.
//! * [`family`]: the infinite family `E_p: y^2 = x(x + p + 1)(x - p + 1)`.
//! * [`fixtures`]: the built-in curves and maps.

pub mod arith;
pub mod descent;
pub mod ellcurve;
mod error;
pub mod etale;
pub mod family;
pub mod fixtures;
pub mod glue;
pub mod json;
pub mod poly;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::Field;

/// Exact rationals, always reduced with a positive denominator.
pub type Rational = num_rational::BigRational;
/// Arbitrary-precision integers.
pub type Integer = num_bigint::BigInt;
/// Polynomials with rational coefficients.
pub type RatPoly = poly::Poly<Rational>;
/// Elliptic curves `y^2 = x^3 + c2 x^2 + c1 x + c0` over Q.
pub type Curve = ellcurve::EllipticCurve<Rational>;
/// Rational points on a [`Curve`].
pub type Point = ellcurve::ECPoint<Rational>;
