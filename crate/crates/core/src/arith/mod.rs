//! Exact scalars, univariate polynomials and rational functions in the
//! degree variable `ν`. Nothing in this crate touches floating point.

mod poly;
mod rat;
mod ratfun;

pub use poly::Poly;
pub use rat::{parse_rat, rat, rat_int, rat_normalize, Rat};
pub use ratfun::RatFun;
