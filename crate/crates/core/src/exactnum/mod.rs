//! Exact real arithmetic over the rationals, closed under square roots, real
//! cube roots and real roots of depressed cubics.

mod cubic;
mod decimal;
mod alg;
mod dyadic;
mod literal;
mod poly;
mod rational;
mod primes;
mod real;
mod surd;

pub use cubic::{cubic_root_in, cubic_roots, real_root_count, Root};
pub use decimal::format_digits;
pub use dyadic::{Dyadic, Interval};
pub use literal::{parse_literal, LiteralError};
pub use poly::{quadratic_roots, Poly};
pub use rational::{format_rational, int, rat, rational_cbrt, rational_sqrt, Rational};
pub use primes::{factor_u64, is_prime_u64};
pub use real::{set_sign_config, sign_config, with_sign_config, ExactReal, Sign, SignConfig};

/// Failures of exact arithmetic.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ExactError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("square root of a negative number")]
    NegativeRadicand,
    #[error("sign undecided after {bits} bits (degree bound {degree})")]
    PrecisionExhausted { bits: i64, degree: u64 },
    #[error("interval does not isolate exactly one root")]
    NotIsolating,
}
