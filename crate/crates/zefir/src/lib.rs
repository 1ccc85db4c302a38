//! Exact arithmetic for local zeta integrals, L-factors and gamma factors of
//! GL_n(Q_p) representation data with coefficients in finite-precision local
//! rings (quotients of Witt-vector rings, their products and fiber products).
//!
//! Everything is computed exactly in the coefficient quotient: equalities are
//! bit-exact congruences mod ell^N, never floating approximations.

pub mod config;
pub mod error;
pub mod fpoly;
pub mod laurent;
pub mod rings;

pub use error::{Error, Result};
pub use laurent::{FractionS, LaurentPoly, RecurrentStream, SWitness};
pub use rings::{Ring, RingElement, RingMap};
