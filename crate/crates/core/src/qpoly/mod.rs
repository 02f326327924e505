//! Exact univariate (Laurent) polynomial and rational function arithmetic
//! over arbitrary-precision rationals, in the single formal variable `q`.

mod cyclotomic;
mod laurent;
mod ratfun;
mod text;

pub use cyclotomic::cyclotomic;
pub use laurent::{gcd, rational_pow, LaurentPoly};
pub use ratfun::RationalFunction;
pub use text::parse_laurent;

use num_bigint::BigInt;

/// The coefficient field everywhere: exact arbitrary-precision rationals.
/// `num_rational::BigRational` already maintains the reduced-form invariant
/// (gcd(|numerator|, denominator) = 1, denominator >= 1).
pub type Rational = num_rational::BigRational;

/// Shorthand for a rational from a numerator/denominator pair.
///
/// # Panics
/// Panics if `den == 0`.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Shorthand for an integer as a rational.
pub fn rint(n: i64) -> Rational {
    Rational::from(BigInt::from(n))
}

/// (-1)^e for a signed exponent.
pub fn sign_pow(e: i64) -> Rational {
    if e.rem_euclid(2) == 0 {
        rint(1)
    } else {
        rint(-1)
    }
}
