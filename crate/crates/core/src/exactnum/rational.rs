use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed};

/// Arbitrary-precision rational, always stored gcd-reduced with a positive denominator.
pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Exact square root of a nonnegative rational, if it is a perfect square.
pub fn rational_sqrt(q: &Rational) -> Option<Rational> {
    if q.is_negative() {
        return None;
    }
    let n = q.numer().sqrt();
    let d = q.denom().sqrt();
    if &n * &n == *q.numer() && &d * &d == *q.denom() {
        Some(Rational::new(n, d))
    } else {
        None
    }
}

/// Exact real cube root of a rational, if it is a perfect cube.
pub fn rational_cbrt(q: &Rational) -> Option<Rational> {
    let n = q.numer().cbrt();
    let d = q.denom().cbrt();
    if &n * &n * &n == *q.numer() && &d * &d * &d == *q.denom() {
        Some(Rational::new(n, d))
    } else {
        None
    }
}

pub fn format_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// `floor(log10(q))` for a positive rational.
pub fn floor_log10(q: &Rational) -> i64 {
    debug_assert!(q.is_positive());
    let mut k = q.numer().to_string().len() as i64 - q.denom().to_string().len() as i64;
    // 10^k is within a factor of 10 of q; fix up.
    while pow10(k) > *q {
        k -= 1;
    }
    while pow10(k + 1) <= *q {
        k += 1;
    }
    k
}

pub fn pow10(k: i64) -> Rational {
    let p = num_traits::pow(BigInt::from(10), k.unsigned_abs() as usize);
    if k >= 0 {
        Rational::from_integer(p)
    } else {
        Rational::new(BigInt::one(), p)
    }
}

/// Round to the nearest integer, ties to even.
pub fn round_half_even(q: &Rational) -> BigInt {
    let fl = q.numer().div_floor(q.denom());
    let frac = q - Rational::from_integer(fl.clone());
    let half = Rational::new(BigInt::one(), BigInt::from(2));
    if frac > half || (frac == half && fl.is_odd()) {
        fl + 1
    } else {
        fl
    }
}
