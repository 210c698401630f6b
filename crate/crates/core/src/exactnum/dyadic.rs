//! Dyadic rationals and closed intervals with dyadic endpoints.
//!
//! All rounding is directed: `floor_*` rounds toward negative infinity and
//! `ceil_*` toward positive infinity on the grid `2^-prec`, so an interval
//! built from a lower `floor` and an upper `ceil` always encloses the exact
//! result.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, Sign as BigSign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// `mant * 2^exp`, normalized so that `mant` is odd (or zero with `exp == 0`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Dyadic {
    mant: BigInt,
    exp: i64,
}

impl Dyadic {
    pub fn new(mant: BigInt, exp: i64) -> Self {
        let mut d = Dyadic { mant, exp };
        d.normalize();
        d
    }

    pub fn zero() -> Self {
        Dyadic { mant: BigInt::zero(), exp: 0 }
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        Dyadic::new(n.into(), 0)
    }

    /// `2^k`
    pub fn pow2(k: i64) -> Self {
        Dyadic { mant: BigInt::one(), exp: k }
    }

    fn normalize(&mut self) {
        if self.mant.is_zero() {
            self.exp = 0;
            return;
        }
        let tz = self.mant.trailing_zeros().unwrap_or(0);
        if tz > 0 {
            self.mant >>= tz;
            self.exp += tz as i64;
        }
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mant
    }

    pub fn exponent(&self) -> i64 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn signum(&self) -> i32 {
        match self.mant.sign() {
            BigSign::Minus => -1,
            BigSign::NoSign => 0,
            BigSign::Plus => 1,
        }
    }

    pub fn is_negative(&self) -> bool {
        self.mant.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.mant.is_positive()
    }

    pub fn neg(&self) -> Dyadic {
        Dyadic { mant: -&self.mant, exp: self.exp }
    }

    pub fn abs(&self) -> Dyadic {
        Dyadic { mant: self.mant.abs(), exp: self.exp }
    }

    pub fn add(&self, other: &Dyadic) -> Dyadic {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let e = self.exp.min(other.exp);
        let a = &self.mant << ((self.exp - e) as usize);
        let b = &other.mant << ((other.exp - e) as usize);
        Dyadic::new(a + b, e)
    }

    pub fn sub(&self, other: &Dyadic) -> Dyadic {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Dyadic) -> Dyadic {
        Dyadic::new(&self.mant * &other.mant, self.exp + other.exp)
    }

    /// Exact halving.
    pub fn half(&self) -> Dyadic {
        if self.is_zero() {
            return Dyadic::zero();
        }
        Dyadic { mant: self.mant.clone(), exp: self.exp - 1 }
    }

    /// Multiply by `2^k` exactly.
    pub fn shl(&self, k: i64) -> Dyadic {
        if self.is_zero() {
            return Dyadic::zero();
        }
        Dyadic { mant: self.mant.clone(), exp: self.exp + k }
    }

    /// Value times `2^prec` rounded down to an integer.
    fn scaled_floor(&self, prec: i64) -> BigInt {
        let e = self.exp + prec;
        if e >= 0 {
            &self.mant << (e as usize)
        } else {
            // BigInt shifts right round toward negative infinity.
            &self.mant >> ((-e) as usize)
        }
    }

    fn scaled_ceil(&self, prec: i64) -> BigInt {
        -self.neg().scaled_floor(prec)
    }

    /// Round down onto the grid `2^-prec`.
    pub fn floor_to(&self, prec: i64) -> Dyadic {
        if self.exp >= -prec {
            return self.clone();
        }
        Dyadic::new(self.scaled_floor(prec), -prec)
    }

    /// Round up onto the grid `2^-prec`.
    pub fn ceil_to(&self, prec: i64) -> Dyadic {
        if self.exp >= -prec {
            return self.clone();
        }
        Dyadic::new(self.scaled_ceil(prec), -prec)
    }

    /// `floor(self / other)` on the grid `2^-prec`. `other` must be nonzero.
    pub fn div_floor(&self, other: &Dyadic, prec: i64) -> Dyadic {
        let (num, den) = self.div_parts(other, prec);
        Dyadic::new(num.div_floor(&den), -prec)
    }

    pub fn div_ceil(&self, other: &Dyadic, prec: i64) -> Dyadic {
        let (num, den) = self.div_parts(other, prec);
        Dyadic::new(-((-num).div_floor(&den)), -prec)
    }

    // self/other * 2^prec == num/den with den > 0
    fn div_parts(&self, other: &Dyadic, prec: i64) -> (BigInt, BigInt) {
        assert!(!other.is_zero(), "dyadic division by zero");
        let shift = self.exp - other.exp + prec;
        let (mut num, mut den) = if shift >= 0 {
            (&self.mant << (shift as usize), other.mant.clone())
        } else {
            (self.mant.clone(), &other.mant << ((-shift) as usize))
        };
        if den.is_negative() {
            num = -num;
            den = -den;
        }
        (num, den)
    }

    /// Lower bound for the square root of a nonnegative value on the grid `2^-prec`.
    pub fn sqrt_floor(&self, prec: i64) -> Dyadic {
        if !self.is_positive() {
            return Dyadic::zero();
        }
        let n = self.scaled_floor(2 * prec);
        Dyadic::new(n.sqrt(), -prec)
    }

    pub fn sqrt_ceil(&self, prec: i64) -> Dyadic {
        if !self.is_positive() {
            return Dyadic::zero();
        }
        let n = self.scaled_ceil(2 * prec);
        let mut s = n.sqrt();
        if &s * &s < n {
            s += 1;
        }
        Dyadic::new(s, -prec)
    }

    /// Lower bound for the real cube root on the grid `2^-prec`.
    pub fn cbrt_floor(&self, prec: i64) -> Dyadic {
        if self.is_negative() {
            return self.neg().cbrt_ceil(prec).neg();
        }
        if self.is_zero() {
            return Dyadic::zero();
        }
        let n = self.scaled_floor(3 * prec);
        Dyadic::new(n.cbrt(), -prec)
    }

    pub fn cbrt_ceil(&self, prec: i64) -> Dyadic {
        if self.is_negative() {
            return self.neg().cbrt_floor(prec).neg();
        }
        if self.is_zero() {
            return Dyadic::zero();
        }
        let n = self.scaled_ceil(3 * prec);
        let mut s = n.cbrt();
        if &s * &s * &s < n {
            s += 1;
        }
        Dyadic::new(s, -prec)
    }

    pub fn to_rational(&self) -> BigRational {
        if self.exp >= 0 {
            BigRational::from_integer(&self.mant << (self.exp as usize))
        } else {
            BigRational::new(self.mant.clone(), BigInt::one() << ((-self.exp) as usize))
        }
    }

    /// Largest dyadic on the grid `2^-prec` not above `q`.
    pub fn floor_rational(q: &BigRational, prec: i64) -> Dyadic {
        let (num, den) = scale_rational(q, prec);
        Dyadic::new(num.div_floor(&den), -prec)
    }

    pub fn ceil_rational(q: &BigRational, prec: i64) -> Dyadic {
        let (num, den) = scale_rational(q, prec);
        Dyadic::new(-((-num).div_floor(&den)), -prec)
    }

    /// Rational exactly representable as a dyadic, if its denominator is a power of two.
    pub fn from_rational(q: &BigRational) -> Option<Dyadic> {
        let den = q.denom();
        let tz = den.trailing_zeros().unwrap_or(0);
        if (den >> tz as usize).is_one() {
            Some(Dyadic::new(q.numer().clone(), -(tz as i64)))
        } else {
            None
        }
    }

    /// Upper bound on `log2 |self|`; `None` for zero.
    pub fn log2_upper(&self) -> Option<i64> {
        if self.is_zero() {
            None
        } else {
            Some(self.mant.bits() as i64 + self.exp)
        }
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let bits = self.mant.bits() as i64;
        let keep = 60;
        let (m, e) = if bits > keep {
            (&self.mant >> ((bits - keep) as usize), self.exp + bits - keep)
        } else {
            (self.mant.clone(), self.exp)
        };
        let mf: f64 = num_traits::ToPrimitive::to_f64(&m).unwrap_or(0.0);
        mf * 2f64.powi(e.clamp(-2000, 2000) as i32)
    }
}

fn scale_rational(q: &BigRational, prec: i64) -> (BigInt, BigInt) {
    let mut num = q.numer().clone();
    let mut den = q.denom().clone();
    if prec >= 0 {
        num <<= prec as usize;
    } else {
        den <<= (-prec) as usize;
    }
    (num, den)
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.sub(other).signum() {
            -1 => Ordering::Less,
            0 => Ordering::Equal,
            _ => Ordering::Greater,
        }
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = self.to_rational();
        if r.is_integer() {
            write!(f, "{}", r.numer())
        } else {
            write!(f, "{}/{}", r.numer(), r.denom())
        }
    }
}

/// Closed interval `[lo, hi]` with dyadic endpoints.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    pub lo: Dyadic,
    pub hi: Dyadic,
}

impl Interval {
    pub fn new(lo: Dyadic, hi: Dyadic) -> Self {
        debug_assert!(lo <= hi, "interval endpoints out of order");
        Interval { lo, hi }
    }

    pub fn point(d: Dyadic) -> Self {
        Interval { lo: d.clone(), hi: d }
    }

    pub fn width(&self) -> Dyadic {
        self.hi.sub(&self.lo)
    }

    /// True when the width is at most `2^-bits`.
    pub fn width_at_most(&self, bits: i64) -> bool {
        self.width() <= Dyadic::pow2(-bits)
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, other: &Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn midpoint(&self) -> Dyadic {
        self.lo.add(&self.hi).half()
    }

    /// Intersection of two enclosures of the same value. Both must be valid
    /// enclosures, so the overlap is nonempty.
    pub fn intersect(&self, other: &Interval) -> Interval {
        let lo = if self.lo >= other.lo { self.lo.clone() } else { other.lo.clone() };
        let hi = if self.hi <= other.hi { self.hi.clone() } else { other.hi.clone() };
        if lo > hi {
            // Cannot happen for two enclosures of one value; keep the narrower input.
            return if self.width() <= other.width() { self.clone() } else { other.clone() };
        }
        Interval { lo, hi }
    }

    /// Upper bound for `|x|` over the interval.
    pub fn magnitude(&self) -> Dyadic {
        let a = self.lo.abs();
        let b = self.hi.abs();
        if a >= b {
            a
        } else {
            b
        }
    }

    pub fn round_out(&self, prec: i64) -> Interval {
        Interval { lo: self.lo.floor_to(prec), hi: self.hi.ceil_to(prec) }
    }

    pub fn neg(&self) -> Interval {
        Interval { lo: self.hi.neg(), hi: self.lo.neg() }
    }

    pub fn add(&self, other: &Interval) -> Interval {
        Interval { lo: self.lo.add(&other.lo), hi: self.hi.add(&other.hi) }
    }

    pub fn sub(&self, other: &Interval) -> Interval {
        Interval { lo: self.lo.sub(&other.hi), hi: self.hi.sub(&other.lo) }
    }

    pub fn mul(&self, other: &Interval) -> Interval {
        let c = [
            self.lo.mul(&other.lo),
            self.lo.mul(&other.hi),
            self.hi.mul(&other.lo),
            self.hi.mul(&other.hi),
        ];
        let lo = c.iter().min().cloned().unwrap_or_else(Dyadic::zero);
        let hi = c.iter().max().cloned().unwrap_or_else(Dyadic::zero);
        Interval { lo, hi }
    }

    pub fn scale(&self, d: &Dyadic) -> Interval {
        let a = self.lo.mul(d);
        let b = self.hi.mul(d);
        if a <= b {
            Interval { lo: a, hi: b }
        } else {
            Interval { lo: b, hi: a }
        }
    }

    /// Outward-rounded quotient; `None` when the divisor straddles zero.
    pub fn div(&self, other: &Interval, prec: i64) -> Option<Interval> {
        if other.contains_zero() {
            return None;
        }
        let pairs = [
            (&self.lo, &other.lo),
            (&self.lo, &other.hi),
            (&self.hi, &other.lo),
            (&self.hi, &other.hi),
        ];
        let lo = pairs.iter().map(|(a, b)| a.div_floor(b, prec)).min()?;
        let hi = pairs.iter().map(|(a, b)| a.div_ceil(b, prec)).max()?;
        Some(Interval { lo, hi })
    }

    /// Outward-rounded square root; negative parts are clamped to zero.
    pub fn sqrt(&self, prec: i64) -> Interval {
        Interval { lo: self.lo.sqrt_floor(prec), hi: self.hi.sqrt_ceil(prec) }
    }

    pub fn cbrt(&self, prec: i64) -> Interval {
        Interval { lo: self.lo.cbrt_floor(prec), hi: self.hi.cbrt_ceil(prec) }
    }

    pub fn to_f64_mid(&self) -> f64 {
        self.midpoint().to_f64()
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo.to_f64(), self.hi.to_f64())
    }
}
