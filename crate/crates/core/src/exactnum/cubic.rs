//! Real roots of depressed cubics `t^3 + p t + q`.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use super::dyadic::Dyadic;
use super::rational::{self, Rational};
use super::real::{ExactReal, Sign};
use super::ExactError;

/// A distinct real root with its multiplicity.
#[derive(Clone, Debug)]
pub struct Root {
    pub value: ExactReal,
    pub multiplicity: u32,
}

fn eval_cubic(p: &ExactReal, q: &ExactReal, t: &ExactReal) -> ExactReal {
    t.powi(3).add(&p.mul(t)).add(q)
}

struct Sturm {
    p: ExactReal,
    q: ExactReal,
    /// Sign of the constant last remainder, `-sign(4p^3 + 27q^2)`.
    tail: Sign,
}

impl Sturm {
    fn new(p: &ExactReal, q: &ExactReal, disc: Sign) -> Sturm {
        Sturm { p: p.clone(), q: q.clone(), tail: disc.negate() }
    }

    /// Sign variations of the sequence at `x`, together with the sign of the cubic there.
    fn variations(&self, x: &Dyadic) -> Result<(usize, Sign), ExactError> {
        let t = ExactReal::from_dyadic(x);
        let f0 = eval_cubic(&self.p, &self.q, &t);
        let f1 = ExactReal::from_int(3).mul(&t.square()).add(&self.p);
        let f2 = self.p.scale(&rational::rat(-2, 3)).mul(&t).sub(&self.q);
        let s0 = f0.sign()?;
        let signs = [s0, f1.sign()?, f2.sign()?, self.tail];
        let mut prev = Sign::Zero;
        let mut v = 0;
        for s in signs {
            if s == Sign::Zero {
                continue;
            }
            if prev != Sign::Zero && s != prev {
                v += 1;
            }
            prev = s;
        }
        Ok((v, s0))
    }
}

fn discriminant(p: &ExactReal, q: &ExactReal) -> ExactReal {
    ExactReal::from_int(4).mul(&p.powi(3)).add(&ExactReal::from_int(27).mul(&q.square()))
}

/// Power of two strictly above every root magnitude (Cauchy bound).
fn root_bound(p: &ExactReal, q: &ExactReal) -> Dyadic {
    let mp = p.refine(4).magnitude();
    let mq = q.refine(4).magnitude();
    let m = if mp >= mq { mp } else { mq };
    let target = m.add(&Dyadic::from_int(1));
    let mut b = Dyadic::from_int(1);
    while b <= target {
        b = b.shl(1);
    }
    b
}

/// Number of distinct real roots of `t^3 + p t + q`.
pub fn real_root_count(p: &ExactReal, q: &ExactReal) -> Result<usize, ExactError> {
    if p.sign()? == Sign::Zero {
        return Ok(1);
    }
    Ok(match discriminant(p, q).sign()? {
        Sign::Negative => 3,
        Sign::Zero => 2,
        Sign::Positive => 1,
    })
}

/// All distinct real roots of `t^3 + p t + q`, ascending, with multiplicities.
///
/// Three distinct roots are separated by Sturm bisection on dyadic points; a
/// single real root becomes an isolated root node on a Cauchy-bound interval.
/// Rational roots of rational cubics are found directly.
pub fn cubic_roots(p: &ExactReal, q: &ExactReal) -> Result<Vec<Root>, ExactError> {
    let sp = p.sign()?;
    let sq = q.sign()?;
    if sp == Sign::Zero && sq == Sign::Zero {
        return Ok(vec![Root { value: ExactReal::zero(), multiplicity: 3 }]);
    }
    if sp == Sign::Zero {
        return Ok(vec![Root { value: q.neg().cbrt(), multiplicity: 1 }]);
    }
    let disc = discriminant(p, q).sign()?;
    if disc == Sign::Zero {
        // t^3 + pt + q = (t - 3q/p)(t + 3q/(2p))^2
        let double = ExactReal::from_int(-3).mul(q).div(&ExactReal::from_int(2).mul(p))?;
        let simple = ExactReal::from_int(3).mul(q).div(p)?;
        let mut roots = vec![
            Root { value: double, multiplicity: 2 },
            Root { value: simple, multiplicity: 1 },
        ];
        sort_roots(&mut roots)?;
        return Ok(roots);
    }
    if let (Some(pr), Some(qr)) = (p.as_rational(), q.as_rational()) {
        if let Some(m) = rational_root(pr, qr) {
            return split_at_root(p, &ExactReal::from_rational(m), disc);
        }
    }
    let bound = root_bound(p, q);
    if disc == Sign::Positive {
        let root = ExactReal::cubic_root_unchecked(p, q, bound.neg(), bound, -1);
        return Ok(vec![Root { value: root, multiplicity: 1 }]);
    }
    let sturm = Sturm::new(p, q, disc);
    let mut work = vec![(bound.neg(), bound.clone())];
    let mut isolated = Vec::new();
    while let Some((a, b)) = work.pop() {
        let (va, sa) = sturm.variations(&a)?;
        let (vb, _) = sturm.variations(&b)?;
        let count = va - vb;
        if count == 0 {
            continue;
        }
        if count == 1 {
            isolated.push((a, b, sa));
            continue;
        }
        let m = a.add(&b).half();
        let (_, sm) = sturm.variations(&m)?;
        if sm == Sign::Zero {
            return split_at_root(p, &ExactReal::from_dyadic(&m), disc);
        }
        work.push((a, m.clone()));
        work.push((m, b));
    }
    isolated.sort_by(|x, y| x.0.cmp(&y.0));
    Ok(isolated
        .into_iter()
        .map(|(a, b, sa)| Root {
            value: ExactReal::cubic_root_unchecked(p, q, a, b, sa.as_i32()),
            multiplicity: 1,
        })
        .collect())
}

/// Roots given one exact simple root `m`: the rest solve `t^2 + m t + (p + m^2)`.
fn split_at_root(p: &ExactReal, m: &ExactReal, disc: Sign) -> Result<Vec<Root>, ExactError> {
    let mut roots = vec![Root { value: m.clone(), multiplicity: 1 }];
    if disc == Sign::Negative {
        let rad = ExactReal::from_int(-3).mul(&m.square()).sub(&ExactReal::from_int(4).mul(p));
        let s = rad.sqrt()?;
        let neg_m = m.neg();
        let half = rational::rat(1, 2);
        roots.push(Root { value: neg_m.sub(&s).scale(&half), multiplicity: 1 });
        roots.push(Root { value: neg_m.add(&s).scale(&half), multiplicity: 1 });
    }
    sort_roots(&mut roots)?;
    Ok(roots)
}

pub(crate) fn sort_roots(roots: &mut [Root]) -> Result<(), ExactError> {
    let mut err = None;
    roots.sort_by(|a, b| match a.value.cmp_exact(&b.value) {
        Ok(o) => o,
        Err(e) => {
            err = Some(e);
            Ordering::Equal
        }
    });
    match err {
        Some(e) => Err(e),
        None => Ok(()),
    }
}

/// A rational root of `t^3 + p t + q` for rational `p, q`, searched among
/// divisors when the cleared constant term is small enough to factor.
fn rational_root(p: &Rational, q: &Rational) -> Option<Rational> {
    if q.is_zero() {
        return Some(Rational::zero());
    }
    // t = s/d turns the cubic into s^3 + (p d^2) s + q d^3 with integer coefficients.
    let d = p.denom().lcm(q.denom());
    let c1 = (p * Rational::from_integer(&d * &d)).to_integer();
    let c0 = (q * Rational::from_integer(&d * &d * &d)).to_integer();
    let n = c0.abs().to_u64()?;
    if n > 1_000_000_000_000 {
        return None;
    }
    let test = |s: i64| -> bool {
        let s = BigInt::from(s);
        &s * &s * &s + &c1 * &s + &c0 == BigInt::zero()
    };
    let mut i: u64 = 1;
    while i * i <= n {
        if n % i == 0 {
            for cand in [i, n / i] {
                let c = cand as i64;
                for s in [c, -c] {
                    if test(s) {
                        return Some(Rational::new(BigInt::from(s), d.clone()));
                    }
                }
            }
        }
        i += 1;
    }
    None
}

/// The root of `t^3 + p t + q` isolated by `[lo, hi]`; the endpoints must
/// be dyadic, non-roots, and bracket exactly one root.
pub fn cubic_root_in(
    p: &ExactReal,
    q: &ExactReal,
    lo: &Rational,
    hi: &Rational,
) -> Result<ExactReal, ExactError> {
    let (a, b) = match (Dyadic::from_rational(lo), Dyadic::from_rational(hi)) {
        (Some(a), Some(b)) if a < b => (a, b),
        _ => return Err(ExactError::NotIsolating),
    };
    let sa = eval_cubic(p, q, &ExactReal::from_dyadic(&a)).sign()?;
    let sb = eval_cubic(p, q, &ExactReal::from_dyadic(&b)).sign()?;
    if sa == Sign::Zero || sb == Sign::Zero || sa == sb {
        return Err(ExactError::NotIsolating);
    }
    if p.sign()? != Sign::Zero {
        let disc = discriminant(p, q).sign()?;
        if disc == Sign::Zero {
            return Err(ExactError::NotIsolating);
        }
        let sturm = Sturm::new(p, q, disc);
        if sturm.variations(&a)?.0 - sturm.variations(&b)?.0 != 1 {
            return Err(ExactError::NotIsolating);
        }
    }
    Ok(ExactReal::cubic_root_unchecked(p, q, a, b, sa.as_i32()))
}
