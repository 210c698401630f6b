//! Test-side oracles over exact rationals, independent of the engine.

#![allow(dead_code)]

use num_traits::{One, Signed, Zero};
use origami_core::exactnum::Rational;

/// Polynomial with rational coefficients, lowest degree first.
pub type RPoly = Vec<Rational>;

fn trim(mut p: RPoly) -> RPoly {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

fn degree(p: &RPoly) -> usize {
    p.len().saturating_sub(1)
}

pub fn eval(p: &RPoly, x: &Rational) -> Rational {
    p.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
}

fn derivative(p: &RPoly) -> RPoly {
    trim(p.iter().enumerate().skip(1).map(|(i, c)| c * Rational::from_integer((i as i64).into())).collect())
}

fn sub(a: &RPoly, b: &RPoly) -> RPoly {
    let n = a.len().max(b.len());
    let z = Rational::zero();
    trim((0..n).map(|i| a.get(i).unwrap_or(&z) - b.get(i).unwrap_or(&z)).collect())
}

fn divmod(a: &RPoly, b: &RPoly) -> (RPoly, RPoly) {
    let b = trim(b.clone());
    let mut r = trim(a.clone());
    let lead = b.last().expect("division by zero polynomial").clone();
    let mut q = vec![Rational::zero(); r.len().saturating_sub(b.len()) + 1];
    while !r.is_empty() && r.len() >= b.len() {
        let shift = r.len() - b.len();
        let k = r.last().unwrap() / &lead;
        for (i, c) in b.iter().enumerate() {
            r[i + shift] = &r[i + shift] - &k * c;
        }
        q[shift] = k;
        r = trim(r);
    }
    (trim(q), r)
}

fn monic(p: RPoly) -> RPoly {
    let lead = p.last().cloned().unwrap_or_else(Rational::one);
    p.into_iter().map(|c| c / &lead).collect()
}

fn gcd(a: &RPoly, b: &RPoly) -> RPoly {
    let (mut a, mut b) = (trim(a.clone()), trim(b.clone()));
    while !b.is_empty() {
        let r = divmod(&a, &b).1;
        a = b;
        b = r;
    }
    monic(a)
}

/// Square-free factorization `p = c * prod f_i^i` (Yun), as `(f_i, i)` with
/// nonconstant `f_i`.
pub fn square_free(p: &RPoly) -> Vec<(RPoly, u32)> {
    let p = trim(p.clone());
    let dp = derivative(&p);
    let a0 = gcd(&p, &dp);
    let mut b = divmod(&p, &a0).0;
    let c = divmod(&dp, &a0).0;
    let mut d = sub(&c, &derivative(&b));
    let mut out = Vec::new();
    let mut i = 1;
    while degree(&b) > 0 {
        let a = gcd(&b, &d);
        let nb = divmod(&b, &a).0;
        let c = divmod(&d, &a).0;
        d = sub(&c, &derivative(&nb));
        if degree(&a) > 0 {
            out.push((a, i));
        }
        b = nb;
        i += 1;
    }
    out
}

fn sturm_chain(p: &RPoly) -> Vec<RPoly> {
    let mut chain = vec![trim(p.clone()), derivative(p)];
    loop {
        let n = chain.len();
        if chain[n - 1].is_empty() {
            chain.pop();
            break;
        }
        let r = divmod(&chain[n - 2], &chain[n - 1]).1;
        if r.is_empty() {
            break;
        }
        chain.push(r.into_iter().map(|c| -c).collect());
    }
    chain
}

fn variations(chain: &[RPoly], x: &Rational) -> usize {
    let signs: Vec<i32> = chain
        .iter()
        .map(|p| eval(p, x))
        .filter(|v| !v.is_zero())
        .map(|v| if v.is_positive() { 1 } else { -1 })
        .collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Roots in `(lo, hi]` of a square-free polynomial with Sturm chain `chain`.
fn count(chain: &[RPoly], lo: &Rational, hi: &Rational) -> usize {
    variations(chain, lo) - variations(chain, hi)
}

/// An isolating interval `(lo, hi]` holding one real root.
#[derive(Clone, Debug)]
pub struct Isolated {
    pub lo: Rational,
    pub hi: Rational,
    pub multiplicity: u32,
}

/// All real roots of `p`, each isolated to width below `width` with its
/// multiplicity, sorted ascending.
pub fn real_roots(p: &RPoly, width: &Rational) -> Vec<Isolated> {
    let mut out = Vec::new();
    for (f, m) in square_free(p) {
        let lead = f.last().unwrap().abs();
        let bound = Rational::one() + f.iter().map(|c| c.abs() / &lead).fold(Rational::zero(), |a, b| a.max(b));
        let chain = sturm_chain(&f);
        let mut stack = vec![(-bound.clone(), bound)];
        while let Some((lo, hi)) = stack.pop() {
            let k = count(&chain, &lo, &hi);
            if k == 0 {
                continue;
            }
            if k == 1 && &hi - &lo < *width {
                out.push(Isolated { lo, hi, multiplicity: m });
                continue;
            }
            let mid = (&lo + &hi) / Rational::from_integer(2.into());
            stack.push((lo, mid.clone()));
            stack.push((mid, hi));
        }
    }
    out.sort_by(|a, b| a.lo.cmp(&b.lo));
    out
}

/// Number of distinct real roots.
pub fn distinct_real_roots(p: &RPoly) -> usize {
    square_free(p)
        .iter()
        .map(|(f, _)| {
            let lead = f.last().unwrap().abs();
            let bound = Rational::one() + f.iter().map(|c| c.abs() / &lead).fold(Rational::zero(), |a, b| a.max(b));
            count(&sturm_chain(f), &-bound.clone(), &bound)
        })
        .sum()
}

/// A root of `f` in `[lo, hi]` by floating-point bisection, given a sign change.
pub fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let flo = f(lo);
    assert!(flo * f(hi) < 0.0, "no sign change on [{lo}, {hi}]");
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        if (f(mid) < 0.0) == (flo < 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Prime factors of `n` with exponents, by trial division.
pub fn trial_factor(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        let mut e = 0;
        while n % p == 0 {
            n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}
