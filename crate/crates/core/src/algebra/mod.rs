//! Exact scalars, monomials and polynomials.

pub mod monomial;
pub mod parse;
pub mod poly;
pub mod scalar;

pub use monomial::{compare, Monomial, MonomialOrder, OrderKind};
pub use poly::{ArithOp, MixedDegrees, Poly, PolyRing, Term};
pub use scalar::{Field, Scalar, DEFAULT_PRIME};
