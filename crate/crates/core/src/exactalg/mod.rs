//! Exact scalars and linear algebra.

pub mod matrix;
pub mod poly;
pub mod rat;

pub use matrix::{invert_gram, signature, solve_affine, Inertia, RatMatrix};
pub use poly::{p, Bindings, Monomial, Poly, Var};
pub use rat::Rat;

/// `true` iff `p` is the zero polynomial.
pub fn poly_is_zero(p: &Poly) -> bool {
    p.is_zero()
}

/// Substitute and fully expand.
pub fn poly_substitute(p: &Poly, bindings: &Bindings) -> Poly {
    p.substitute(bindings)
}
