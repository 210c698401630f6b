//! Irreducibility of rational polynomials.
//!
//! Irreducibility is certified by factor-degree patterns modulo primes: each
//! good prime restricts the degrees a rational factor could have to the
//! subset sums of its irreducible factor degrees mod p. Reducibility is
//! certified by an explicit factor, searched for among products of
//! numerically computed complex roots and then checked by exact division.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::exactnum::{factor_u64, is_prime_u64, Rational};

/// Dense polynomial, ascending coefficients, no trailing zeros.
pub type IntPoly = Vec<BigInt>;

fn trim<T: Zero>(mut v: Vec<T>) -> Vec<T> {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
    v
}

/// Primitive integer multiple of a rational polynomial given in ascending order.
pub fn primitive(coeffs: &[Rational]) -> IntPoly {
    let den = coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = coeffs.iter().map(|c| (c * Rational::from_integer(den.clone())).to_integer()).collect();
    let ints = trim(ints);
    let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    if g.is_zero() {
        return ints;
    }
    let sign = if ints.last().is_some_and(|c| c.is_negative()) { -BigInt::one() } else { BigInt::one() };
    ints.into_iter().map(|c| c / &g * &sign).collect()
}

fn degree<T>(p: &[T]) -> usize {
    p.len().saturating_sub(1)
}

// ---- rational polynomials (only for the squarefree test)

fn rat_rem(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut r = a.to_vec();
    let lead = b.last().expect("nonzero divisor").clone();
    while r.len() >= b.len() && !r.is_empty() {
        let k = r.last().unwrap() / &lead;
        let shift = r.len() - b.len();
        for (i, c) in b.iter().enumerate() {
            r[shift + i] -= &k * c;
        }
        r = trim(r);
    }
    r
}

fn rat_gcd(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let (mut a, mut b) = (a.to_vec(), b.to_vec());
    while !b.is_empty() {
        let r = rat_rem(&a, &b);
        a = b;
        b = r;
    }
    a
}

/// `gcd(f, f')` as a primitive integer polynomial.
pub fn repeated_part(f: &IntPoly) -> IntPoly {
    let fr: Vec<Rational> = f.iter().map(|c| Rational::from_integer(c.clone())).collect();
    let d: Vec<Rational> = fr.iter().enumerate().skip(1).map(|(i, c)| c * Rational::from_integer(i.into())).collect();
    let d = trim(d);
    if d.is_empty() {
        return vec![BigInt::one()];
    }
    primitive(&rat_gcd(&fr, &d))
}

/// Exact quotient `f / g` over the integers, if `g` divides `f`.
pub fn divide_exact(f: &IntPoly, g: &IntPoly) -> Option<IntPoly> {
    if g.is_empty() || g.len() > f.len() {
        return None;
    }
    let mut r = f.clone();
    let lead = g.last().unwrap();
    let mut q = vec![BigInt::zero(); f.len() - g.len() + 1];
    for k in (0..q.len()).rev() {
        let c = &r[k + g.len() - 1];
        if !(c % lead).is_zero() {
            return None;
        }
        let m = c / lead;
        for (i, gi) in g.iter().enumerate() {
            r[k + i] -= &m * gi;
        }
        q[k] = m;
    }
    r.iter().all(|c| c.is_zero()).then_some(q)
}

// ---- polynomials over F_p

type Fp = Vec<u64>;

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn inv_mod(a: u64, p: u64) -> u64 {
    // p prime
    let mut r = 1u64;
    let (mut b, mut e) = (a % p, p - 2);
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, b, p);
        }
        b = mulmod(b, b, p);
        e >>= 1;
    }
    r
}

fn fp_rem(a: &[u64], b: &[u64], p: u64) -> Fp {
    let mut r = a.to_vec();
    let inv = inv_mod(*b.last().unwrap(), p);
    while r.len() >= b.len() && !r.is_empty() {
        let k = mulmod(*r.last().unwrap(), inv, p);
        let shift = r.len() - b.len();
        for (i, c) in b.iter().enumerate() {
            r[shift + i] = (r[shift + i] + p - mulmod(k, *c, p)) % p;
        }
        r = trim(r);
    }
    r
}

fn fp_div(a: &[u64], b: &[u64], p: u64) -> Fp {
    let mut r = a.to_vec();
    let inv = inv_mod(*b.last().unwrap(), p);
    let mut q = vec![0u64; a.len().saturating_sub(b.len()) + 1];
    while r.len() >= b.len() && !r.is_empty() {
        let k = mulmod(*r.last().unwrap(), inv, p);
        let shift = r.len() - b.len();
        q[shift] = k;
        for (i, c) in b.iter().enumerate() {
            r[shift + i] = (r[shift + i] + p - mulmod(k, *c, p)) % p;
        }
        r = trim(r);
    }
    trim(q)
}

fn fp_mul(a: &[u64], b: &[u64], p: u64) -> Fp {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + mulmod(*x, *y, p)) % p;
        }
    }
    trim(out)
}

fn fp_gcd(a: &[u64], b: &[u64], p: u64) -> Fp {
    let (mut a, mut b) = (a.to_vec(), b.to_vec());
    while !b.is_empty() {
        let r = fp_rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

fn fp_powmod(base: &[u64], mut e: u64, m: &[u64], p: u64) -> Fp {
    let mut r = vec![1u64];
    let mut b = fp_rem(base, m, p);
    while e > 0 {
        if e & 1 == 1 {
            r = fp_rem(&fp_mul(&r, &b, p), m, p);
        }
        b = fp_rem(&fp_mul(&b, &b, p), m, p);
        e >>= 1;
    }
    r
}

fn fp_sub(a: &[u64], b: &[u64], p: u64) -> Fp {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| (a.get(i).copied().unwrap_or(0) + p - b.get(i).copied().unwrap_or(0)) % p)
        .collect();
    trim(out)
}

/// Degrees of the irreducible factors of a squarefree `f` mod `p`
/// (distinct-degree factorization).
fn factor_degrees(f: &[u64], p: u64) -> Vec<usize> {
    let mut f = f.to_vec();
    let x: Fp = vec![0, 1];
    let mut h = x.clone();
    let mut out = Vec::new();
    let mut i = 1;
    while degree(&f) >= 2 * i {
        h = fp_powmod(&h, p, &f, p);
        let g = fp_gcd(&fp_sub(&h, &x, p), &f, p);
        let dg = degree(&g);
        if dg > 0 {
            out.extend(std::iter::repeat(i).take(dg / i));
            f = fp_div(&f, &g, p);
            h = fp_rem(&h, &f, p);
        }
        i += 1;
    }
    if degree(&f) > 0 {
        out.push(degree(&f));
    }
    out.sort_unstable();
    out
}

fn reduce_mod(f: &IntPoly, p: u64) -> Fp {
    let pb = BigInt::from(p);
    trim(f.iter().map(|c| c.mod_floor(&pb).to_u64().unwrap_or(0)).collect())
}

fn subset_sums(degrees: &[usize], n: usize) -> Vec<bool> {
    let mut s = vec![false; n + 1];
    s[0] = true;
    for &d in degrees {
        for k in (d..=n).rev() {
            if s[k - d] {
                s[k] = true;
            }
        }
    }
    s
}

/// Outcome of the irreducibility test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Irreducibility {
    /// Primes with the factor degrees of `f` mod p. When `exhaustive` is
    /// false no proper subset sum is common to all of them; otherwise the
    /// remaining degrees were excluded by the root-subset search.
    Irreducible { primes: Vec<(u64, Vec<usize>)>, exhaustive: bool },
    /// A proper factor, primitive with positive leading coefficient.
    Reducible(IntPoly),
    /// Neither certificate was found within the search limits.
    Undecided,
}

/// Tests a primitive integer polynomial of degree >= 1 for irreducibility over Q.
pub fn irreducibility(f: &IntPoly) -> Irreducibility {
    let n = degree(f);
    if n <= 1 {
        return Irreducibility::Irreducible { primes: Vec::new(), exhaustive: false };
    }
    let rep = repeated_part(f);
    if degree(&rep) > 0 {
        return Irreducibility::Reducible(rep);
    }
    let mut possible = vec![true; n + 1];
    let mut certificate = Vec::new();
    let mut p = 2u64;
    let mut tried = 0;
    while tried < 60 {
        p += 1;
        if !is_prime_u64(p) {
            continue;
        }
        let fp = reduce_mod(f, p);
        if degree(&fp) != n {
            continue;
        }
        let deriv: Fp = trim(fp.iter().enumerate().skip(1).map(|(i, c)| mulmod(*c, i as u64 % p, p)).collect());
        if degree(&fp_gcd(&fp, &deriv, p)) > 0 {
            continue;
        }
        tried += 1;
        let degs = factor_degrees(&fp, p);
        let sums = subset_sums(&degs, n);
        let before = possible.clone();
        for k in 0..=n {
            possible[k] &= sums[k];
        }
        if possible != before || certificate.is_empty() {
            certificate.push((p, degs));
        }
        if (1..n).all(|k| !possible[k]) {
            return Irreducibility::Irreducible { primes: certificate, exhaustive: false };
        }
    }
    match find_factor(f, &possible) {
        Some(Some(g)) => Irreducibility::Reducible(g),
        Some(None) => Irreducibility::Irreducible { primes: certificate, exhaustive: true },
        None => Irreducibility::Undecided,
    }
}

/// Searches integer factors of the allowed degrees among products of
/// approximate complex roots, times divisors of the leading coefficient.
/// Every integer factor has this shape, so when the roots are accurate and
/// the candidate coefficients small, finding none shows there is none.
/// `None` means the numerics cannot be trusted.
fn find_factor(f: &IntPoly, allowed: &[bool]) -> Option<Option<IntPoly>> {
    let n = degree(f);
    let roots = complex_roots(f)?;
    let lead = f.last()?.abs().to_u64()?;
    let mut divisors = vec![1u64];
    for p in factor_u64(lead) {
        let more: Vec<u64> = divisors.iter().map(|d| d * p).collect();
        divisors.extend(more);
    }
    divisors.sort_unstable();
    divisors.dedup();
    for d in 1..=n / 2 {
        if !allowed[d] {
            continue;
        }
        let mut idx: Vec<usize> = (0..d).collect();
        loop {
            // monic product of the chosen roots
            let mut prod: Vec<(f64, f64)> = vec![(1.0, 0.0)];
            for &i in &idx {
                let r = roots[i];
                let mut next = vec![(0.0, 0.0); prod.len() + 1];
                for (k, c) in prod.iter().enumerate() {
                    next[k + 1].0 += c.0;
                    next[k + 1].1 += c.1;
                    next[k].0 -= c.0 * r.0 - c.1 * r.1;
                    next[k].1 -= c.0 * r.1 + c.1 * r.0;
                }
                prod = next;
            }
            if prod.iter().all(|c| c.1.abs() < 1e-6 * (1.0 + c.0.abs())) {
                for &c in &divisors {
                    let scaled: Vec<f64> = prod.iter().map(|z| z.0 * c as f64).collect();
                    if scaled.iter().any(|v| !v.is_finite() || v.abs() > 1e9) {
                        return None;
                    }
                    let g = trim(scaled.iter().map(|v| BigInt::from(v.round() as i64)).collect());
                    if degree(&g) == d && divide_exact(f, &g).is_some() {
                        return Some(Some(g));
                    }
                }
            }
            // next combination
            let mut k = d;
            while k > 0 && idx[k - 1] == n - d + k - 1 {
                k -= 1;
            }
            if k == 0 {
                break;
            }
            idx[k - 1] += 1;
            for j in k..d {
                idx[j] = idx[j - 1] + 1;
            }
        }
    }
    Some(None)
}

/// All complex roots by Durand-Kerner iteration, or `None` if the
/// coefficients do not fit in floating point.
fn complex_roots(f: &IntPoly) -> Option<Vec<(f64, f64)>> {
    let n = degree(f);
    let lead = f.last()?.to_f64()?;
    let c: Vec<f64> = f.iter().map(|x| x.to_f64().map(|v| v / lead)).collect::<Option<_>>()?;
    if c.iter().any(|x| !x.is_finite()) {
        return None;
    }
    type C = (f64, f64);
    let mul = |a: C, b: C| (a.0 * b.0 - a.1 * b.1, a.0 * b.1 + a.1 * b.0);
    let div = |a: C, b: C| {
        let d = b.0 * b.0 + b.1 * b.1;
        ((a.0 * b.0 + a.1 * b.1) / d, (a.1 * b.0 - a.0 * b.1) / d)
    };
    let eval = |z: C| {
        c.iter().rev().fold((0.0, 0.0), |acc, &k| {
            let p = mul(acc, z);
            (p.0 + k, p.1)
        })
    };
    let radius = 1.0 + c[..n].iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let mut z: Vec<C> = (0..n)
        .map(|k| {
            let th = 0.4 + k as f64 * std::f64::consts::TAU / n as f64;
            (radius * th.cos(), radius * th.sin())
        })
        .collect();
    for _ in 0..2000 {
        let mut moved = 0.0f64;
        for i in 0..n {
            let mut d = (1.0, 0.0);
            for j in 0..n {
                if i != j {
                    d = mul(d, (z[i].0 - z[j].0, z[i].1 - z[j].1));
                }
            }
            let step = div(eval(z[i]), d);
            if step.0.is_finite() && step.1.is_finite() {
                z[i] = (z[i].0 - step.0, z[i].1 - step.1);
                moved = moved.max(step.0.abs() + step.1.abs());
            }
        }
        if moved < 1e-15 {
            break;
        }
    }
    // accept only roots with small residuals
    let ok = z.iter().all(|&r| {
        let v = eval(r);
        let scale = c.iter().fold(0.0f64, |m, x| m.max(x.abs())) * (1.0 + (r.0 * r.0 + r.1 * r.1).sqrt()).powi(n as i32);
        (v.0 * v.0 + v.1 * v.1).sqrt() <= 1e-9 * scale
    });
    ok.then_some(z)
}
