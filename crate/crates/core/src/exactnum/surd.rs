//! Canonical form for elements of multi-quadratic fields `Q(sqrt p1, ..., sqrt pk)`.
//!
//! An element is a rational combination of square roots of distinct
//! squarefree integers, stored by their prime sets. These square roots are
//! linearly independent over the rationals, so an element is zero exactly
//! when every coefficient is.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::primes::factor_u64;
use super::rational::{rational_sqrt, Rational};

/// Above this many terms arithmetic gives up and callers fall back to plain expressions.
const MAX_TERMS: usize = 64;
const MAX_PRIMES: usize = 8;
const TRIAL_LIMIT: u64 = 10_000;

/// A squarefree integer, as its ascending list of primes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Key(Vec<u64>);

impl Key {
    pub(crate) fn primes(&self) -> &[u64] {
        &self.0
    }

    pub(crate) fn product(&self) -> BigUint {
        self.0.iter().fold(BigUint::one(), |acc, &p| acc * p)
    }
}

impl Ord for Key {
    fn cmp(&self, other: &Key) -> Ordering {
        self.product().cmp(&other.product())
    }
}

impl PartialOrd for Key {
    fn partial_cmp(&self, other: &Key) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// `sqrt(a) * sqrt(b) = g * sqrt(c)`: returns `(c, g)`.
fn mul_keys(a: &Key, b: &Key) -> (Key, BigInt) {
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::new();
    let mut g = BigInt::one();
    while i < a.0.len() || j < b.0.len() {
        match (a.0.get(i), b.0.get(j)) {
            (Some(&x), Some(&y)) if x == y => {
                g *= x;
                i += 1;
                j += 1;
            }
            (Some(&x), Some(&y)) if x < y => {
                out.push(x);
                i += 1;
            }
            (Some(&x), None) => {
                out.push(x);
                i += 1;
            }
            (_, Some(&y)) => {
                out.push(y);
                j += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    (Key(out), g)
}

/// Writes `n = s^2 * m` with `m` squarefree; `None` when `n` cannot be factored cheaply.
fn squarefree_split(n: &BigUint) -> Option<(BigUint, Vec<u64>)> {
    let mut rest = n.clone();
    let mut factors = Vec::new();
    let mut d = 2u64;
    while rest.to_u64().is_none() {
        if d > TRIAL_LIMIT {
            return None;
        }
        while (&rest % d).is_zero() {
            rest /= d;
            factors.push(d);
        }
        d += if d == 2 { 1 } else { 2 };
    }
    factors.extend(factor_u64(rest.to_u64()?));
    factors.sort_unstable();
    let mut s = BigUint::one();
    let mut primes = Vec::new();
    let mut i = 0;
    while i < factors.len() {
        let p = factors[i];
        let mut k = 0;
        while i < factors.len() && factors[i] == p {
            k += 1;
            i += 1;
        }
        for _ in 0..k / 2 {
            s *= p;
        }
        if k % 2 == 1 {
            primes.push(p);
        }
    }
    Some((s, primes))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Surd {
    terms: BTreeMap<Key, Rational>,
}

impl Surd {
    pub(crate) fn zero() -> Surd {
        Surd { terms: BTreeMap::new() }
    }

    pub(crate) fn from_rational(q: Rational) -> Surd {
        let mut s = Surd::zero();
        if !q.is_zero() {
            s.terms.insert(Key(Vec::new()), q);
        }
        s
    }

    /// `sqrt(q)` for a positive rational `q` that is not a perfect square.
    pub(crate) fn sqrt_of_rational(q: &Rational) -> Option<Surd> {
        if !q.is_positive() {
            return None;
        }
        let n = (q.numer() * q.denom()).to_biguint()?;
        let (s, primes) = squarefree_split(&n)?;
        let coeff = Rational::new(BigInt::from(s), q.denom().clone());
        let mut out = Surd::zero();
        out.terms.insert(Key(primes), coeff);
        Some(out)
    }

    pub(crate) fn as_rational(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&Key(Vec::new())).cloned(),
            _ => None,
        }
    }

    pub(crate) fn terms(&self) -> impl Iterator<Item = (&Key, &Rational)> {
        self.terms.iter()
    }

    fn insert_add(&mut self, key: Key, q: Rational) {
        if q.is_zero() {
            return;
        }
        let sum = match self.terms.remove(&key) {
            Some(old) => old + q,
            None => q,
        };
        if !sum.is_zero() {
            self.terms.insert(key, sum);
        }
    }

    fn checked(self) -> Option<Surd> {
        (self.terms.len() <= MAX_TERMS && self.primes().len() <= MAX_PRIMES).then_some(self)
    }

    pub(crate) fn add(&self, other: &Surd) -> Option<Surd> {
        let mut out = self.clone();
        for (k, q) in &other.terms {
            out.insert_add(k.clone(), q.clone());
        }
        out.checked()
    }

    pub(crate) fn neg(&self) -> Surd {
        Surd { terms: self.terms.iter().map(|(k, q)| (k.clone(), -q)).collect() }
    }

    pub(crate) fn sub(&self, other: &Surd) -> Option<Surd> {
        self.add(&other.neg())
    }

    pub(crate) fn scale(&self, q: &Rational) -> Surd {
        if q.is_zero() {
            return Surd::zero();
        }
        Surd { terms: self.terms.iter().map(|(k, c)| (k.clone(), c * q)).collect() }
    }

    pub(crate) fn mul(&self, other: &Surd) -> Option<Surd> {
        if self.terms.len() * other.terms.len() > MAX_TERMS * MAX_TERMS {
            return None;
        }
        let mut out = Surd::zero();
        for (ka, qa) in &self.terms {
            for (kb, qb) in &other.terms {
                let (k, g) = mul_keys(ka, kb);
                out.insert_add(k, qa * qb * Rational::from_integer(g));
            }
        }
        out.checked()
    }

    fn max_prime(&self) -> Option<u64> {
        self.terms.keys().filter_map(|k| k.0.last().copied()).max()
    }

    /// `self = a + b sqrt(p)` with `a`, `b` free of `sqrt(p)`.
    fn split(&self, p: u64) -> (Surd, Surd) {
        let (mut a, mut b) = (Surd::zero(), Surd::zero());
        for (k, q) in &self.terms {
            if let Ok(i) = k.0.binary_search(&p) {
                let mut rest = k.0.clone();
                rest.remove(i);
                b.terms.insert(Key(rest), q.clone());
            } else {
                a.terms.insert(k.clone(), q.clone());
            }
        }
        (a, b)
    }

    /// Sum of `q * sqrt(product of primes)` over squarefree prime lists.
    pub(crate) fn from_prime_terms(terms: impl IntoIterator<Item = (Vec<u64>, Rational)>) -> Option<Surd> {
        let mut out = Surd::zero();
        for (mut primes, q) in terms {
            primes.sort_unstable();
            out.insert_add(Key(primes), q);
        }
        out.checked()
    }

    pub(crate) fn radical(key: Key) -> Surd {
        let mut s = Surd::zero();
        s.terms.insert(key, Rational::one());
        s
    }

    fn root_of_prime(p: u64) -> Surd {
        let mut s = Surd::zero();
        s.terms.insert(Key(vec![p]), Rational::one());
        s
    }

    /// Multiplicative inverse, `None` for zero or when the computation grows too large.
    pub(crate) fn inv(&self) -> Option<Surd> {
        if let Some(q) = self.as_rational() {
            return (!q.is_zero()).then(|| Surd::from_rational(q.recip()));
        }
        let p = self.max_prime()?;
        let (a, b) = self.split(p);
        // (a + b sqrt p)(a - b sqrt p) = a^2 - p b^2 no longer involves sqrt p.
        let conj = a.sub(&b.mul(&Surd::root_of_prime(p))?)?;
        let norm = a.mul(&a)?.sub(&b.mul(&b)?.scale(&Rational::from_integer(p.into())))?;
        conj.mul(&norm.inv()?)
    }

    fn primes(&self) -> BTreeSet<u64> {
        self.terms.keys().flat_map(|k| k.0.iter().copied()).collect()
    }

    /// A square root (either sign) in some multi-quadratic field, if one exists.
    pub(crate) fn sqrt(&self) -> Option<Surd> {
        self.sqrt_within(None)
    }

    /// Square root restricted to `Q(sqrt p : p in allowed)` when `allowed` is given.
    ///
    /// If `self` lies in `K` and has a square root in a larger multi-quadratic
    /// field, that root is `w sqrt(d)` with `w` in `K` and `d` rational. So
    /// writing `self = a + b sqrt(p)` and the root as `u + v sqrt(p)`, the
    /// norm `a^2 - p b^2` has the square root `u^2 - p v^2` inside the
    /// subfield without `p`, and `u^2 = (a + c)/2` for one sign of that root
    /// `c`. Both recursive calls involve fewer primes.
    fn sqrt_within(&self, allowed: Option<&BTreeSet<u64>>) -> Option<Surd> {
        if let Some(q) = self.as_rational() {
            if q.is_negative() {
                return None;
            }
            if let Some(r) = rational_sqrt(&q) {
                return Some(Surd::from_rational(r));
            }
            let r = Surd::sqrt_of_rational(&q)?;
            let fits = allowed.is_none_or(|set| r.primes().is_subset(set));
            return fits.then_some(r);
        }
        let p = self.max_prime()?;
        let (a, b) = self.split(p);
        let mut rest = self.primes();
        rest.remove(&p);
        let sub_allowed: BTreeSet<u64> = match allowed {
            Some(set) => rest.intersection(set).copied().collect(),
            None => rest.clone(),
        };
        let pq = Rational::from_integer(p.into());
        let norm = a.mul(&a)?.sub(&b.mul(&b)?.scale(&pq))?;
        let c = norm.sqrt_within(Some(&sub_allowed))?;
        let half = Rational::new(BigInt::one(), BigInt::from(2));
        let u_allowed = allowed.map(|set| {
            let mut s = set.clone();
            s.remove(&p);
            s
        });
        for c in [c.clone(), c.neg()] {
            let Some(u) = a.add(&c)?.scale(&half).sqrt_within(u_allowed.as_ref()) else { continue };
            let Some(u_inv) = u.inv() else { continue };
            let v = b.mul(&u_inv)?.scale(&half);
            let r = u.add(&v.mul(&Surd::root_of_prime(p))?)?;
            if r.mul(&r)? == *self {
                return Some(r);
            }
        }
        None
    }
}
