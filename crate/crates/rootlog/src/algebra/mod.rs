//! Exact arithmetic foundation: big rationals, real algebraic numbers in
//! fixed number fields, univariate polynomials, rational functions, and
//! certified real root isolation.

mod poly;
mod rat;
mod ratfun;
mod roots;
mod scalar;

pub use poly::Poly;
pub use rat::{
    coprime_basis, parse_rational, pow_rational, rat_ceil, rat_floor, rat_from, rat_i64,
    rational_roots, to_string_rational, Rational,
};
pub use ratfun::RationalFunction;
pub use roots::{
    isolate_real_roots, isolate_roots_refinable, isolate_squarefree_roots, max_real_root_bound,
    root_magnitude_bound, sign_eventual, sturm_chain, sturm_count, IsolatedRoot, RootIsolation,
    Sign,
};
pub use scalar::{is_irreducible, NumberField, Scalar};
