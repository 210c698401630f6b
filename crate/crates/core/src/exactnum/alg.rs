//! Polynomial normal form over a tower of algebraic atoms.
//!
//! Every square root, cube root and cubic root whose inputs are themselves
//! in normal form becomes an *atom* `a` with a monic relation
//! `a^d = r_0 + r_1 a + ... + r_{d-1} a^{d-1}` (`d` = 2 or 3) whose
//! coefficients only involve earlier atoms. An element is a polynomial in the
//! atoms with rational coefficients, with each atom's exponent kept below its
//! degree by rewriting with the relation.
//!
//! The evaluation map to the reals is a ring homomorphism, so a polynomial
//! that reduces to zero is zero. The converse needs irreducible relations,
//! which are not checked, so a nonzero normal form is only a (shallow)
//! expression whose sign is still decided numerically.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock, RwLock};

use num_traits::{One, Signed, ToPrimitive, Zero};

use super::primes::is_prime_u64;

use super::rational::{rational_sqrt, Rational};
use super::real::ExactReal;

pub(crate) type AtomId = u32;

/// Normal forms larger than this are abandoned in favour of plain expressions.
const MAX_TERMS: usize = 768;

/// A monomial: ascending atom ids with positive exponents.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub(crate) struct Mono(Vec<(AtomId, u8)>);

impl Mono {
    pub(crate) fn factors(&self) -> &[(AtomId, u8)] {
        &self.0
    }

    fn times(&self, other: &Mono) -> Mono {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() || j < other.0.len() {
            match (self.0.get(i), other.0.get(j)) {
                (Some(&(a, e)), Some(&(b, f))) if a == b => {
                    out.push((a, e + f));
                    i += 1;
                    j += 1;
                }
                (Some(&(a, e)), Some(&(b, _))) if a < b => {
                    out.push((a, e));
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
        Mono(out)
    }

    fn exponent(&self, atom: AtomId) -> u8 {
        self.0.iter().find(|(a, _)| *a == atom).map_or(0, |&(_, e)| e)
    }

    fn with_exponent(&self, atom: AtomId, e: u8) -> Mono {
        let mut v: Vec<(AtomId, u8)> = self.0.iter().copied().filter(|(a, _)| *a != atom).collect();
        if e > 0 {
            let pos = v.partition_point(|(a, _)| *a < atom);
            v.insert(pos, (atom, e));
        }
        Mono(v)
    }

    fn max_atom(&self) -> Option<AtomId> {
        self.0.last().map(|&(a, _)| a)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub(crate) struct Alg {
    terms: BTreeMap<Mono, Rational>,
}

pub(crate) struct Atom {
    pub(crate) degree: u8,
    /// `a^degree = sum relation[j] a^j`
    relation: Vec<Alg>,
    /// The leaf expression standing for this atom.
    pub(crate) node: ExactReal,
    /// Set for `sqrt(p)` with `p` prime.
    pub(crate) prime: Option<u64>,
}

type Registry = RwLock<Vec<Option<Arc<Atom>>>>;

fn registry() -> &'static Registry {
    static R: OnceLock<Registry> = OnceLock::new();
    R.get_or_init(|| RwLock::new(Vec::new()))
}

pub(crate) fn atom(id: AtomId) -> Arc<Atom> {
    let r = registry().read().unwrap_or_else(|e| e.into_inner());
    r[id as usize].clone().expect("atom is registered before use")
}

/// Creates an atom whose leaf node is built by `make` from the new atom's
/// own normal form.
pub(crate) fn register(degree: u8, relation: Vec<Alg>, make: impl FnOnce(Alg) -> ExactReal) -> (AtomId, ExactReal) {
    register_with(degree, relation, None, make)
}

fn register_with(
    degree: u8,
    relation: Vec<Alg>,
    prime: Option<u64>,
    make: impl FnOnce(Alg) -> ExactReal,
) -> (AtomId, ExactReal) {
    let id = {
        let mut r = registry().write().unwrap_or_else(|e| e.into_inner());
        r.push(None);
        (r.len() - 1) as AtomId
    };
    let node = make(Alg::atom(id));
    let entry = Arc::new(Atom { degree, relation, node: node.clone(), prime });
    registry().write().unwrap_or_else(|e| e.into_inner())[id as usize] = Some(entry);
    (id, node)
}

type InternTable = Mutex<HashMap<(u8, Alg), (AtomId, ExactReal)>>;

/// Shared atoms for `sqrt` (`kind` 2) and `cbrt` (`kind` 3) of a given radicand.
pub(crate) fn interned(kind: u8, radicand: &Alg, make: impl FnOnce(Alg) -> ExactReal) -> (AtomId, ExactReal) {
    static T: OnceLock<InternTable> = OnceLock::new();
    let table = T.get_or_init(|| Mutex::new(HashMap::new()));
    let key = (kind, radicand.clone());
    if let Some(x) = table.lock().unwrap_or_else(|e| e.into_inner()).get(&key) {
        return x.clone();
    }
    let mut relation = vec![Alg::zero(); kind as usize];
    relation[0] = radicand.clone();
    let prime = match radicand.as_rational() {
        Some(q) if kind == 2 && q.is_integer() => q.numer().to_u64().filter(|&p| is_prime_u64(p)),
        _ => None,
    };
    let made = register_with(kind, relation, prime, make);
    table.lock().unwrap_or_else(|e| e.into_inner()).entry(key).or_insert(made).clone()
}

impl Alg {
    pub(crate) fn zero() -> Alg {
        Alg::default()
    }

    pub(crate) fn from_rational(q: Rational) -> Alg {
        let mut a = Alg::zero();
        if !q.is_zero() {
            a.terms.insert(Mono::default(), q);
        }
        a
    }

    pub(crate) fn atom(id: AtomId) -> Alg {
        Alg::monomial(Mono(vec![(id, 1)]), Rational::one())
    }

    pub(crate) fn monomial(m: Mono, q: Rational) -> Alg {
        let mut a = Alg::zero();
        a.terms.insert(m, q);
        a
    }

    pub(crate) fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub(crate) fn as_rational(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&Mono::default()).cloned(),
            _ => None,
        }
    }

    pub(crate) fn terms(&self) -> impl Iterator<Item = (&Mono, &Rational)> {
        self.terms.iter()
    }

    pub(crate) fn len(&self) -> usize {
        self.terms.len()
    }

    pub(crate) fn atoms(&self) -> Vec<AtomId> {
        let mut v: Vec<AtomId> = self.terms.keys().flat_map(|m| m.0.iter().map(|&(a, _)| a)).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    fn insert_add(&mut self, m: Mono, q: Rational) {
        if q.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(old) => {
                *old += q;
                if old.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, q);
            }
        }
    }

    pub(crate) fn add(&self, other: &Alg) -> Option<Alg> {
        let mut out = self.clone();
        for (m, q) in &other.terms {
            out.insert_add(m.clone(), q.clone());
        }
        (out.len() <= MAX_TERMS).then_some(out)
    }

    pub(crate) fn neg(&self) -> Alg {
        Alg { terms: self.terms.iter().map(|(m, q)| (m.clone(), -q)).collect() }
    }

    pub(crate) fn sub(&self, other: &Alg) -> Option<Alg> {
        self.add(&other.neg())
    }

    /// Adds `q * m` to `acc`, rewriting excess powers with the atom relations.
    fn add_reduced(acc: &mut Alg, q: Rational, m: Mono, budget: &mut usize) -> Option<()> {
        *budget = budget.checked_sub(1)?;
        let excess = m.0.iter().rev().find_map(|&(a, e)| {
            let at = atom(a);
            (e >= at.degree).then_some((a, e, at))
        });
        let Some((a, e, at)) = excess else {
            acc.insert_add(m, q);
            return Some(());
        };
        let rest = m.with_exponent(a, e - at.degree);
        for (j, r) in at.relation.iter().enumerate() {
            let shifted = rest.with_exponent(a, rest.exponent(a) + j as u8);
            for (m2, c2) in &r.terms {
                Alg::add_reduced(acc, &q * c2, shifted.times(m2), budget)?;
            }
        }
        Some(())
    }

    pub(crate) fn mul(&self, other: &Alg) -> Option<Alg> {
        if self.len().saturating_mul(other.len()) > MAX_TERMS * 64 {
            return None;
        }
        let mut out = Alg::zero();
        let mut budget = 200_000usize;
        for (ma, qa) in &self.terms {
            for (mb, qb) in &other.terms {
                Alg::add_reduced(&mut out, qa * qb, ma.times(mb), &mut budget)?;
            }
        }
        (out.len() <= MAX_TERMS).then_some(out)
    }

    fn max_atom(&self) -> Option<AtomId> {
        self.terms.keys().filter_map(Mono::max_atom).max()
    }

    /// Coefficients `c_j` (free of atom `a`) with `self = sum c_j a^j`.
    fn split(&self, a: AtomId, degree: u8) -> Vec<Alg> {
        let mut parts = vec![Alg::zero(); degree as usize];
        for (m, q) in &self.terms {
            let e = m.exponent(a);
            parts[e as usize].insert_add(m.with_exponent(a, 0), q.clone());
        }
        parts
    }

    /// Multiplicative inverse by Cramer's rule on the multiplication matrix
    /// over the atoms below the top one. `None` when the matrix is singular
    /// in normal form (reducible relation) or the computation grows too large.
    pub(crate) fn inv(&self) -> Option<Alg> {
        if let Some(q) = self.as_rational() {
            return (!q.is_zero()).then(|| Alg::from_rational(q.recip()));
        }
        let a = self.max_atom()?;
        let d = atom(a).degree;
        let alpha = Alg::atom(a);
        // column k: coefficients of self * a^k
        let mut cols = Vec::with_capacity(d as usize);
        let mut cur = self.clone();
        for k in 0..d {
            if k > 0 {
                cur = cur.mul(&alpha)?;
            }
            cols.push(cur.split(a, d));
        }
        let m = |i: usize, j: usize| &cols[j][i];
        // first column of the adjugate and the determinant
        let (adj, det) = if d == 2 {
            let adj = vec![m(1, 1).clone(), m(1, 0).neg()];
            let det = m(0, 0).mul(m(1, 1))?.sub(&m(0, 1).mul(m(1, 0))?)?;
            (adj, det)
        } else {
            let minor = |r1: usize, r2: usize, c1: usize, c2: usize| -> Option<Alg> {
                m(r1, c1).mul(m(r2, c2))?.sub(&m(r1, c2).mul(m(r2, c1))?)
            };
            let adj = vec![minor(1, 2, 1, 2)?, minor(1, 2, 0, 2)?.neg(), minor(1, 2, 0, 1)?];
            let det = m(0, 0).mul(&adj[0])?.add(&m(0, 1).mul(&adj[1])?)?.add(&m(0, 2).mul(&adj[2])?)?;
            (adj, det)
        };
        let det_inv = det.inv()?;
        let mut y = Alg::zero();
        let mut power = Alg::from_rational(Rational::one());
        for (k, c) in adj.iter().enumerate() {
            if k > 0 {
                power = power.mul(&alpha)?;
            }
            y = y.add(&c.mul(&det_inv)?.mul(&power)?)?;
        }
        let check = self.mul(&y)?;
        (check.as_rational() == Some(Rational::one())).then_some(y)
    }
}

impl Alg {
    /// A square root (either sign) of `self` within reach of the tower, or
    /// `None`. `base` supplies roots of positive nonsquare rationals.
    ///
    /// Over a quadratic top atom this solves `(u + v a)^2 = x` through the
    /// norm; over a cubic one it only finds roots that are linear in the atom.
    pub(crate) fn sqrt(&self, base: &dyn Fn(&Rational) -> Option<Alg>) -> Option<Alg> {
        let mut budget = 64usize;
        self.sqrt_budget(base, &mut budget)
    }

    fn sqrt_budget(&self, base: &dyn Fn(&Rational) -> Option<Alg>, budget: &mut usize) -> Option<Alg> {
        *budget = budget.checked_sub(1)?;
        if let Some(q) = self.as_rational() {
            if q.is_negative() {
                return None;
            }
            return match rational_sqrt(&q) {
                Some(r) => Some(Alg::from_rational(r)),
                None => base(&q),
            };
        }
        let a = self.max_atom()?;
        let at = atom(a);
        let alpha = Alg::atom(a);
        let parts = self.split(a, at.degree);
        let two = Rational::from_integer(2.into());
        let candidate = if at.degree == 2 {
            if !at.relation[1].is_zero() {
                return None;
            }
            let r = &at.relation[0];
            let (p0, p1) = (&parts[0], &parts[1]);
            if p1.is_zero() {
                match p0.sqrt_budget(base, budget) {
                    Some(u) => u,
                    None => p0.mul(&r.inv()?)?.sqrt_budget(base, budget)?.mul(&alpha)?,
                }
            } else {
                let norm = p0.mul(p0)?.sub(&p1.mul(p1)?.mul(r)?)?;
                let n = norm.sqrt_budget(base, budget)?;
                let mut found = None;
                for half in [p0.add(&n)?, p0.sub(&n)?] {
                    let half = half.mul(&Alg::from_rational(two.recip()))?;
                    if let Some(u) = half.sqrt_budget(base, budget).filter(|u| !u.is_zero()) {
                        let v = p1.mul(&u.mul(&Alg::from_rational(two.clone()))?.inv()?)?;
                        found = Some(u.add(&v.mul(&alpha)?)?);
                        break;
                    }
                }
                found?
            }
        } else {
            let (p0, p1, p2) = (&parts[0], &parts[1], &parts[2]);
            if p1.is_zero() && p2.is_zero() {
                // an odd-degree extension adds no new square roots
                p0.sqrt_budget(base, budget)?
            } else {
                let four = Alg::from_rational(Rational::from_integer(4.into()));
                let linear = || -> Option<Alg> {
                    if p1.mul(p1)? != p0.mul(p2)?.mul(&four)? {
                        return None;
                    }
                    let v = p2.sqrt_budget(base, budget)?;
                    let u = p1.mul(&v.mul(&Alg::from_rational(two))?.inv()?)?;
                    u.add(&v.mul(&alpha)?)
                };
                match linear() {
                    Some(y) => y,
                    None => self.sqrt_over_rational_cubic(a)?,
                }
            }
        };
        (candidate.mul(&candidate)? == *self).then_some(candidate)
    }
    /// Square root in `Q(a)` for a cubic atom `a` with a rational relation.
    ///
    /// If `y^2 = x` then `y = (T x + N) / (x + S)` where `T`, `S`, `N` are the
    /// coefficients of the characteristic polynomial of `y`. They are tied to
    /// those of `x` by `N^2 = n_x`, `T^2 - 2S = t_x` and `S^2 - 2TN = s_x`,
    /// leaving a quartic for `T` whose rational roots are found numerically
    /// and then checked exactly.
    fn sqrt_over_rational_cubic(&self, a: AtomId) -> Option<Alg> {
        if self.atoms() != [a] || atom(a).relation.iter().any(|r| r.as_rational().is_none()) {
            return None;
        }
        let alpha = Alg::atom(a);
        let mut m: Vec<Vec<Rational>> = Vec::with_capacity(3);
        let mut col = self.clone();
        for k in 0..3 {
            if k > 0 {
                col = col.mul(&alpha)?;
            }
            m.push(col.split(a, 3).iter().map(|c| c.as_rational()).collect::<Option<_>>()?);
        }
        // m[j][i]: coefficient of a^i in x a^j
        let e = |i: usize, j: usize| &m[j][i];
        let tx = e(0, 0) + e(1, 1) + e(2, 2);
        let minor = |i: usize, j: usize| e(i, i) * e(j, j) - e(i, j) * e(j, i);
        let sx = minor(0, 1) + minor(0, 2) + minor(1, 2);
        let nx = e(0, 0) * minor(1, 2) - e(0, 1) * (e(1, 0) * e(2, 2) - e(1, 2) * e(2, 0))
            + e(0, 2) * (e(1, 0) * e(2, 1) - e(1, 1) * e(2, 0));
        let n = rational_sqrt(&nx)?;
        let two = Rational::from_integer(2.into());
        for n in [n.clone(), -n] {
            // (T^2 - tx)^2 - 8 N T - 4 sx
            let coeffs = [
                &tx * &tx - &sx * Rational::from_integer(4.into()),
                -&n * Rational::from_integer(8.into()),
                -&tx * &two,
                Rational::zero(),
                Rational::one(),
            ];
            for t in rational_root_candidates(&coeffs) {
                let val = coeffs.iter().rev().fold(Rational::zero(), |acc, c| acc * &t + c);
                if !val.is_zero() {
                    continue;
                }
                let s = (&t * &t - &tx) / &two;
                let num = self.scale_by(&t).add(&Alg::from_rational(n.clone()))?;
                let den = self.add(&Alg::from_rational(s))?;
                if den.is_zero() {
                    continue;
                }
                let y = num.mul(&den.inv()?)?;
                if y.mul(&y)? == *self {
                    return Some(y);
                }
            }
        }
        None
    }

    fn scale_by(&self, k: &Rational) -> Alg {
        if k.is_zero() {
            return Alg::zero();
        }
        Alg { terms: self.terms.iter().map(|(m, q)| (m.clone(), q * k)).collect() }
    }
}

/// Rationals close to the real roots of `sum c_i t^i`, by Durand-Kerner
/// iteration in floating point. Callers verify candidates exactly.
fn rational_root_candidates(coeffs: &[Rational]) -> Vec<Rational> {
    let lead = coeffs.last().and_then(|c| c.to_f64()).unwrap_or(0.0);
    let c: Vec<f64> = coeffs.iter().map(|q| q.to_f64().unwrap_or(f64::NAN) / lead).collect();
    if c.iter().any(|x| !x.is_finite()) {
        return Vec::new();
    }
    let deg = c.len() - 1;
    type C = (f64, f64);
    let mul = |a: C, b: C| (a.0 * b.0 - a.1 * b.1, a.0 * b.1 + a.1 * b.0);
    let div = |a: C, b: C| {
        let d = b.0 * b.0 + b.1 * b.1;
        ((a.0 * b.0 + a.1 * b.1) / d, (a.1 * b.0 - a.0 * b.1) / d)
    };
    let eval = |z: C| c.iter().rev().fold((0.0, 0.0), |acc, &k| {
        let p = mul(acc, z);
        (p.0 + k, p.1)
    });
    let radius = 1.0 + c[..deg].iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let mut z: Vec<C> = (0..deg)
        .map(|k| {
            let th = 0.4 + k as f64 * std::f64::consts::TAU / deg as f64;
            (radius * th.cos(), radius * th.sin())
        })
        .collect();
    for _ in 0..500 {
        for i in 0..deg {
            let mut d = (1.0, 0.0);
            for j in 0..deg {
                if i != j {
                    d = mul(d, (z[i].0 - z[j].0, z[i].1 - z[j].1));
                }
            }
            let step = div(eval(z[i]), d);
            if step.0.is_finite() && step.1.is_finite() {
                z[i] = (z[i].0 - step.0, z[i].1 - step.1);
            }
        }
    }
    let mut out: Vec<Rational> = Vec::new();
    for (re, im) in z {
        if im.abs() > 1e-6 * (1.0 + re.abs()) {
            continue;
        }
        if let Some(r) = num_rational::Ratio::<i64>::approximate_float(re) {
            let q = Rational::new((*r.numer()).into(), (*r.denom()).into());
            if !out.contains(&q) {
                out.push(q);
            }
        }
    }
    out
}
