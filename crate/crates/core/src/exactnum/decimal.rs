//! Correctly rounded decimal rendering of exact reals.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::rational::{self, floor_log10, pow10, round_half_even, Rational};
use super::real::{ExactReal, Sign};
use super::ExactError;

pub(crate) fn render(x: &ExactReal, digits: usize) -> Result<String, ExactError> {
    let sign = x.sign()?;
    if sign == Sign::Zero {
        return Ok("0".to_string());
    }
    let neg = sign == Sign::Negative;
    if let Some(q) = x.as_rational() {
        let (n, k) = round_rational(&q.abs(), digits);
        return Ok(format_digits(neg, &n, k));
    }
    let ax = if neg { x.neg() } else { x.clone() };
    let (n, k) = round_real(&ax, digits)?;
    Ok(format_digits(neg, &n, k))
}

/// `(n, k)` with `n` a `digits`-digit integer and `|q| ≈ n * 10^(k - digits + 1)`.
pub fn round_rational(q: &Rational, digits: usize) -> (BigInt, i64) {
    let k = floor_log10(q);
    round_at(q, k, digits)
}

fn round_at(q: &Rational, k: i64, digits: usize) -> (BigInt, i64) {
    let scale = pow10(digits as i64 - 1 - k);
    let n = round_half_even(&(q * &scale));
    carry(n, k, digits)
}

fn carry(n: BigInt, k: i64, digits: usize) -> (BigInt, i64) {
    let limit = pow10(digits as i64).to_integer();
    if n >= limit {
        (n / BigInt::from(10), k + 1)
    } else {
        (n, k)
    }
}

fn round_real(ax: &ExactReal, digits: usize) -> Result<(BigInt, i64), ExactError> {
    let exact_after = 64 + 8 * digits as i64;
    let mut bits = 4 * digits as i64 + 32;
    loop {
        let iv = ax.refine(bits);
        let mut lo = iv.lo.to_rational();
        let mut hi = iv.hi.to_rational();
        if !lo.is_positive() {
            bits *= 2;
            continue;
        }
        let k_lo = floor_log10(&lo);
        let k_hi = floor_log10(&hi);
        let k = if k_lo == k_hi {
            Some(k_lo)
        } else if bits > exact_after && k_hi == k_lo + 1 {
            // The value may sit exactly on a power of ten.
            let p = pow10(k_hi);
            match ax.sub(&ExactReal::from_rational(p.clone())).sign()? {
                Sign::Zero => return Ok(round_rational(&p, digits)),
                Sign::Positive => {
                    lo = p;
                    Some(k_hi)
                }
                Sign::Negative => {
                    hi = p;
                    Some(k_lo)
                }
            }
        } else {
            None
        };
        if let Some(k) = k {
            let scale = pow10(digits as i64 - 1 - k);
            let n_lo = round_half_even(&(&lo * &scale));
            let n_hi = round_half_even(&(&hi * &scale));
            if n_lo == n_hi {
                return Ok(carry(n_lo, k, digits));
            }
            if bits > exact_after && &n_hi - &n_lo == BigInt::from(1) {
                // Decide against the rounding boundary between the two candidates.
                let tie = (Rational::from_integer(n_lo.clone()) + rational::rat(1, 2)) / &scale;
                let n = match ax.sub(&ExactReal::from_rational(tie)).sign()? {
                    Sign::Positive => n_hi,
                    Sign::Negative => n_lo,
                    Sign::Zero => {
                        if (&n_lo % BigInt::from(2)).is_zero() {
                            n_lo
                        } else {
                            n_hi
                        }
                    }
                };
                return Ok(carry(n, k, digits));
            }
        }
        bits *= 2;
    }
}

/// Positional notation for moderate exponents, otherwise `d.ddde±k`.
/// Trailing fractional zeros are dropped.
pub fn format_digits(neg: bool, n: &BigInt, k: i64) -> String {
    let ds = n.to_string();
    let len = ds.len() as i64;
    let body = if (-7..21).contains(&k) {
        if k >= 0 {
            if k + 1 >= len {
                format!("{}{}", ds, "0".repeat((k + 1 - len) as usize))
            } else {
                let (a, b) = ds.split_at((k + 1) as usize);
                trim_fraction(format!("{a}.{b}"))
            }
        } else {
            trim_fraction(format!("0.{}{}", "0".repeat((-k - 1) as usize), ds))
        }
    } else {
        let (a, b) = ds.split_at(1);
        let mant = trim_fraction(format!("{a}.{b}"));
        format!("{mant}e{k}")
    };
    if neg {
        format!("-{body}")
    } else {
        body
    }
}

fn trim_fraction(s: String) -> String {
    if !s.contains('.') {
        return s;
    }
    let t = s.trim_end_matches('0');
    t.trim_end_matches('.').to_string()
}
