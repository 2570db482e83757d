//! Exact arithmetic substrate.
//!
//! Everything in here is exact: arbitrary-precision rationals, univariate
//! polynomials over them, reduced rational functions of the block dimension
//! `d`, and moment polynomials in `t = Z/d` whose coefficients are rational
//! functions of `d`. No floating point is used anywhere in this module.
//!
//! A [`MomentPoly`] is the canonical form of a spectral moment. The
//! `c_m` notation (see [`c_value`]) is only an input/display syntax; it is
//! not unique, so equality is always decided on the rational-function form.

mod cform;
mod moment;
mod poly;
mod ratfn;
pub mod serial;

pub use cform::{c_value, c_value_at, double_factorial, substitute_c_form, to_c_form};
pub use moment::MomentPoly;
pub use poly::Poly;
pub use ratfn::RatFn;

use num_bigint::BigInt;
use num_rational::BigRational;

/// Arbitrary-precision rational number, always reduced with a positive denominator.
pub type Rational = BigRational;

/// Builds the rational `num/den`. Panics if `den == 0`.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Integer as a rational.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}
