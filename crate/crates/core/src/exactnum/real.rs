//! Lazy exact reals.
//!
//! An [`ExactReal`] is a node in an immutable expression DAG over the
//! rationals. Each node carries a refinable dyadic enclosure and a
//! root-separation bound, which together give an exact sign test: refine
//! until the enclosure excludes zero, or until it is narrower than the
//! smallest magnitude a nonzero value of that expression could have.

use std::borrow::Cow;
use std::cell::Cell;
use std::cmp::Ordering;
use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::atomic::{AtomicI64, AtomicU64, Ordering as AtomicOrdering};
use std::sync::{Arc, Mutex, MutexGuard, OnceLock, Weak};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::dyadic::{Dyadic, Interval};
use super::rational::{self, Rational};
use super::alg::{self, Alg};
use super::surd::Surd;
use super::ExactError;

/// Sign of an exact real.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

impl Sign {
    pub fn as_i32(self) -> i32 {
        match self {
            Sign::Negative => -1,
            Sign::Zero => 0,
            Sign::Positive => 1,
        }
    }

    pub fn from_i32(v: i32) -> Sign {
        match v.signum() {
            -1 => Sign::Negative,
            0 => Sign::Zero,
            _ => Sign::Positive,
        }
    }

    pub fn negate(self) -> Sign {
        Sign::from_i32(-self.as_i32())
    }

    pub fn to_ordering(self) -> Ordering {
        match self {
            Sign::Negative => Ordering::Less,
            Sign::Zero => Ordering::Equal,
            Sign::Positive => Ordering::Greater,
        }
    }
}

/// Limits for exact zero decisions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SignConfig {
    /// Highest precision (in bits) a sign test may refine to.
    pub max_bits: i64,
    /// Largest algebraic degree bound for which a zero decision is attempted.
    pub max_degree: u64,
}

impl Default for SignConfig {
    fn default() -> Self {
        SignConfig { max_bits: 4096, max_degree: 1 << 16 }
    }
}

static GLOBAL_MAX_BITS: AtomicI64 = AtomicI64::new(4096);
static GLOBAL_MAX_DEGREE: AtomicU64 = AtomicU64::new(1 << 16);

thread_local! {
    static LOCAL_CONFIG: Cell<Option<SignConfig>> = const { Cell::new(None) };
}

/// Replace the process-wide sign configuration.
pub fn set_sign_config(cfg: SignConfig) {
    GLOBAL_MAX_BITS.store(cfg.max_bits, AtomicOrdering::Relaxed);
    GLOBAL_MAX_DEGREE.store(cfg.max_degree, AtomicOrdering::Relaxed);
}

pub fn sign_config() -> SignConfig {
    LOCAL_CONFIG.with(|c| c.get()).unwrap_or_else(|| SignConfig {
        max_bits: GLOBAL_MAX_BITS.load(AtomicOrdering::Relaxed),
        max_degree: GLOBAL_MAX_DEGREE.load(AtomicOrdering::Relaxed),
    })
}

/// Run `f` with a sign configuration that applies to the current thread only.
pub fn with_sign_config<T>(cfg: SignConfig, f: impl FnOnce() -> T) -> T {
    let prev = LOCAL_CONFIG.with(|c| c.replace(Some(cfg)));
    struct Restore(Option<SignConfig>);
    impl Drop for Restore {
        fn drop(&mut self) {
            let prev = self.0;
            LOCAL_CONFIG.with(|c| c.set(prev));
        }
    }
    let _restore = Restore(prev);
    f()
}

/// BFMSS-style bound: the value is `U / L` with algebraic integers `U`, `L`
/// whose conjugates are bounded by `2^log_u` and `2^log_l`.
#[derive(Clone, Copy, Debug)]
struct Bound {
    log_u: f64,
    log_l: f64,
}

// Slack applied to floating-point bound arithmetic so the result stays an upper bound.
fn up(x: f64) -> f64 {
    x * (1.0 + 1e-12) + 1e-9
}

impl Bound {
    fn of_rational(q: &Rational) -> Bound {
        Bound { log_u: q.numer().bits() as f64, log_l: q.denom().bits() as f64 }
    }

    fn sum(a: Bound, b: Bound) -> Bound {
        Bound {
            log_u: up((a.log_u + b.log_l).max(a.log_l + b.log_u) + 1.0),
            log_l: up(a.log_l + b.log_l),
        }
    }

    fn product(a: Bound, b: Bound) -> Bound {
        Bound { log_u: up(a.log_u + b.log_u), log_l: up(a.log_l + b.log_l) }
    }

    fn quotient(a: Bound, b: Bound) -> Bound {
        Bound { log_u: up(a.log_u + b.log_l), log_l: up(a.log_l + b.log_u) }
    }

    // (U L^(k-1))^(1/k) / L
    fn root(a: Bound, k: f64) -> Bound {
        Bound { log_u: up((a.log_u + (k - 1.0) * a.log_l) / k), log_l: a.log_l }
    }

    // s = Lp*Lq*r is a root of t^3 + (Lp Lq^2 Up) t + Lp^3 Lq^2 Uq, so by Cauchy
    // |s| <= 1 + max of those coefficient bounds.
    fn cubic_root(p: Bound, q: Bound) -> Bound {
        let a = p.log_l + 2.0 * q.log_l + p.log_u;
        let b = 3.0 * p.log_l + 2.0 * q.log_l + q.log_u;
        Bound { log_u: up(a.max(b).max(0.0) + 1.0), log_l: up(p.log_l + q.log_l) }
    }
}

#[derive(Default)]
struct Cache {
    prec: Option<i64>,
    best: Option<Interval>,
}

/// Isolating data for a real root of `t^3 + p t + q`.
pub(crate) struct CubicRootData {
    p: ExactReal,
    q: ExactReal,
    lo: Dyadic,
    hi: Dyadic,
    /// Sign of the cubic at `lo`; the sign at `hi` is the opposite.
    lo_sign: i32,
    narrowed: Mutex<Narrowing>,
}

struct Narrowing {
    lo: Dyadic,
    hi: Dyadic,
    work_prec: i64,
}

enum Kind {
    Const(Rational),
    Add(ExactReal, ExactReal),
    Sub(ExactReal, ExactReal),
    Mul(ExactReal, ExactReal),
    Div(ExactReal, ExactReal),
    Neg(ExactReal),
    Sqrt(ExactReal),
    Cbrt(ExactReal),
    CubicRoot(CubicRootData),
}

struct Node {
    kind: Kind,
    bound: Bound,
    cache: Mutex<Cache>,
    /// Canonical multi-quadratic form, for nodes built from one.
    surd: Option<Surd>,
    /// Normal form over the atom tower, for nodes built from one.
    alg: Option<Alg>,
}

/// An exact real number represented lazily as an expression DAG.
#[derive(Clone)]
pub struct ExactReal(Arc<Node>);

fn lock<T>(m: &Mutex<T>) -> MutexGuard<'_, T> {
    m.lock().unwrap_or_else(|e| e.into_inner())
}

type RadicalTable = Mutex<HashMap<(u32, Rational), Weak<Node>>>;

/// Radicals of rational constants are shared, so that repeated occurrences of
/// e.g. `sqrt(2)` count once in the degree bound.
fn interned_radical(index: u32, q: &Rational, surd: Option<Surd>) -> ExactReal {
    static TABLE: OnceLock<RadicalTable> = OnceLock::new();
    let table = TABLE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut t = lock(table);
    let key = (index, q.clone());
    if let Some(node) = t.get(&key).and_then(Weak::upgrade) {
        return ExactReal(node);
    }
    if t.len() > 4096 {
        t.retain(|_, w| w.strong_count() > 0);
    }
    let arg = ExactReal::from_rational(q.clone());
    let kind = if index == 2 { Kind::Sqrt(arg) } else { Kind::Cbrt(arg) };
    let x = if index == 3 {
        // cube roots of rationals are tower atoms, sharing this node
        let radicand = Alg::from_rational(q.clone());
        alg::interned(3, &radicand, |a| ExactReal::with_forms(kind, None, Some(a))).1
    } else {
        ExactReal::with_forms(kind, surd, None)
    };
    t.insert(key, Arc::downgrade(&x.0));
    x
}

impl ExactReal {
    fn from_kind(kind: Kind) -> ExactReal {
        ExactReal::with_forms(kind, None, None)
    }

    fn with_surd(kind: Kind, surd: Option<Surd>) -> ExactReal {
        ExactReal::with_forms(kind, surd, None)
    }

    fn with_forms(kind: Kind, surd: Option<Surd>, alg: Option<Alg>) -> ExactReal {
        let bound = match &kind {
            Kind::Const(q) => Bound::of_rational(q),
            Kind::Add(a, b) | Kind::Sub(a, b) => Bound::sum(a.0.bound, b.0.bound),
            Kind::Mul(a, b) => Bound::product(a.0.bound, b.0.bound),
            Kind::Div(a, b) => Bound::quotient(a.0.bound, b.0.bound),
            Kind::Neg(a) => a.0.bound,
            Kind::Sqrt(a) => Bound::root(a.0.bound, 2.0),
            Kind::Cbrt(a) => Bound::root(a.0.bound, 3.0),
            Kind::CubicRoot(d) => Bound::cubic_root(d.p.0.bound, d.q.0.bound),
        };
        ExactReal(Arc::new(Node { kind, bound, cache: Mutex::new(Cache::default()), surd, alg }))
    }

    fn surd(&self) -> Option<Cow<'_, Surd>> {
        match &self.0.kind {
            Kind::Const(q) => Some(Cow::Owned(Surd::from_rational(q.clone()))),
            _ => self.0.surd.as_ref().map(Cow::Borrowed),
        }
    }

    /// Builds the canonical expression `c0 + c1 sqrt(m1) + ...`.
    fn from_surd(s: Surd) -> ExactReal {
        if let Some(q) = s.as_rational() {
            return ExactReal::from_rational(q);
        }
        let mut acc: Option<ExactReal> = None;
        let single = s.terms().count() == 1;
        for (key, c) in s.terms() {
            let radical = (!key.primes().is_empty()).then(|| {
                let m = Rational::from_integer(key.product().into());
                interned_radical(2, &m, Some(Surd::radical(key.clone())))
            });
            let signed = acc.is_none();
            let coeff = if signed { c.clone() } else { c.abs() };
            let term = match radical {
                Some(r) if single && coeff.is_one() => return r,
                None => ExactReal::from_rational(coeff),
                Some(r) if coeff.is_one() => r,
                Some(r) if (-&coeff).is_one() => ExactReal::from_kind(Kind::Neg(r)),
                Some(r) => ExactReal::from_kind(Kind::Mul(ExactReal::from_rational(coeff), r)),
            };
            acc = Some(match acc {
                None => term,
                Some(a) if c.is_negative() => ExactReal::from_kind(Kind::Sub(a, term)),
                Some(a) => ExactReal::from_kind(Kind::Add(a, term)),
            });
        }
        let x = acc.expect("nonrational surd has terms");
        ExactReal::with_surd(Self::take_kind(x), Some(s))
    }

    fn take_kind(x: ExactReal) -> Kind {
        match Arc::try_unwrap(x.0) {
            Ok(node) => node.kind,
            Err(shared) => Kind::Add(ExactReal(shared), ExactReal::zero()),
        }
    }

    fn surd_binary(&self, other: &ExactReal, f: impl Fn(&Surd, &Surd) -> Option<Surd>) -> Option<ExactReal> {
        let (a, b) = (self.surd()?, other.surd()?);
        f(&a, &b).map(ExactReal::from_surd)
    }

    /// `sqrt(p)` as a tower atom.
    fn prime_atom(p: u64) -> Alg {
        let q = Rational::from_integer(p.into());
        let (id, _) = alg::interned(2, &Alg::from_rational(q.clone()), |_| {
            interned_radical(2, &q, Surd::sqrt_of_rational(&q))
        });
        Alg::atom(id)
    }

    fn alg_form(&self) -> Option<Cow<'_, Alg>> {
        if let Some(a) = &self.0.alg {
            return Some(Cow::Borrowed(a));
        }
        ExactReal::surd_to_alg(&*self.surd()?).map(Cow::Owned)
    }

    fn surd_to_alg(s: &Surd) -> Option<Alg> {
        let mut out = Alg::zero();
        for (key, c) in s.terms() {
            let mut term = Alg::from_rational(c.clone());
            for &p in key.primes() {
                term = term.mul(&ExactReal::prime_atom(p))?;
            }
            out = out.add(&term)?;
        }
        Some(out)
    }

    /// Builds the expression `c0 + c1 m1 + ...` over the atom monomials.
    fn from_alg(a: Alg) -> ExactReal {
        if let Some(q) = a.as_rational() {
            return ExactReal::from_rational(q);
        }
        let atoms: Vec<_> = a.atoms().into_iter().map(alg::atom).collect();
        if atoms.iter().all(|at| at.prime.is_some()) {
            let prime_of = |id| alg::atom(id).prime.expect("checked above");
            let terms = a.terms().map(|(m, c)| (m.factors().iter().map(|&(id, _)| prime_of(id)).collect(), c.clone()));
            if let Some(s) = Surd::from_prime_terms(terms) {
                return ExactReal::from_surd(s);
            }
        }
        // integer coefficients over one denominator keep the bound's L small
        let den = a.terms().fold(BigInt::one(), |acc, (_, c)| acc.lcm(c.denom()));
        let scale = Rational::from_integer(den.clone());
        let single = a.len() == 1;
        let mut acc: Option<ExactReal> = None;
        for (m, c) in a.terms() {
            let c = &(c * &scale);
            let mut mono: Option<ExactReal> = None;
            for &(id, e) in m.factors() {
                let node = alg::atom(id).node.clone();
                for _ in 0..e {
                    mono = Some(match mono {
                        None => node.clone(),
                        Some(x) => ExactReal::from_kind(Kind::Mul(x, node.clone())),
                    });
                }
            }
            let signed = acc.is_none();
            let coeff = if signed { c.clone() } else { c.abs() };
            let term = match mono {
                Some(r) if single && den.is_one() && coeff.is_one() && matches!(m.factors(), [(_, 1)]) => return r,
                None => ExactReal::from_rational(coeff),
                Some(r) if coeff.is_one() => r,
                Some(r) if (-&coeff).is_one() => ExactReal::from_kind(Kind::Neg(r)),
                Some(r) => ExactReal::from_kind(Kind::Mul(ExactReal::from_rational(coeff), r)),
            };
            acc = Some(match acc {
                None => term,
                Some(x) if c.is_negative() => ExactReal::from_kind(Kind::Sub(x, term)),
                Some(x) => ExactReal::from_kind(Kind::Add(x, term)),
            });
        }
        let mut x = acc.expect("nonrational element has terms");
        if !den.is_one() {
            x = ExactReal::from_kind(Kind::Div(x, ExactReal::from_rational(scale)));
        }
        ExactReal::with_forms(Self::take_kind(x), None, Some(a))
    }

    fn alg_binary(&self, other: &ExactReal, f: impl Fn(&Alg, &Alg) -> Option<Alg>) -> Option<ExactReal> {
        if self.0.alg.is_none() && other.0.alg.is_none() {
            return None;
        }
        let (a, b) = (self.alg_form()?, other.alg_form()?);
        f(&a, &b).map(ExactReal::from_alg)
    }

    pub fn from_rational(q: Rational) -> ExactReal {
        ExactReal::from_kind(Kind::Const(q))
    }

    pub fn from_int(n: i64) -> ExactReal {
        ExactReal::from_rational(rational::int(n))
    }

    pub fn ratio(n: i64, d: i64) -> ExactReal {
        ExactReal::from_rational(rational::rat(n, d))
    }

    pub fn zero() -> ExactReal {
        ExactReal::from_int(0)
    }

    pub fn one() -> ExactReal {
        ExactReal::from_int(1)
    }

    pub(crate) fn from_dyadic(d: &Dyadic) -> ExactReal {
        ExactReal::from_rational(d.to_rational())
    }

    /// The rational value, when this node is a literal constant.
    pub fn as_rational(&self) -> Option<&Rational> {
        match &self.0.kind {
            Kind::Const(q) => Some(q),
            _ => None,
        }
    }

    pub fn is_rational_literal(&self) -> bool {
        self.as_rational().is_some()
    }

    /// Pointer identity of the underlying node.
    pub fn ptr_eq(&self, other: &ExactReal) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }

    fn id(&self) -> usize {
        Arc::as_ptr(&self.0) as usize
    }

    pub fn add(&self, other: &ExactReal) -> ExactReal {
        match (self.as_rational(), other.as_rational()) {
            (Some(a), Some(b)) => ExactReal::from_rational(a + b),
            (Some(a), _) if a.is_zero() => other.clone(),
            (_, Some(b)) if b.is_zero() => self.clone(),
            _ => self
                .surd_binary(other, Surd::add)
                .or_else(|| self.alg_binary(other, Alg::add))
                .unwrap_or_else(|| ExactReal::from_kind(Kind::Add(self.clone(), other.clone()))),
        }
    }

    pub fn sub(&self, other: &ExactReal) -> ExactReal {
        match (self.as_rational(), other.as_rational()) {
            (Some(a), Some(b)) => ExactReal::from_rational(a - b),
            (Some(a), _) if a.is_zero() => other.neg(),
            (_, Some(b)) if b.is_zero() => self.clone(),
            _ => self
                .surd_binary(other, Surd::sub)
                .or_else(|| self.alg_binary(other, Alg::sub))
                .unwrap_or_else(|| ExactReal::from_kind(Kind::Sub(self.clone(), other.clone()))),
        }
    }

    pub fn mul(&self, other: &ExactReal) -> ExactReal {
        match (self.as_rational(), other.as_rational()) {
            (Some(a), Some(b)) => ExactReal::from_rational(a * b),
            (Some(a), _) | (_, Some(a)) if a.is_zero() => ExactReal::zero(),
            (Some(a), _) if a.is_one() => other.clone(),
            (_, Some(b)) if b.is_one() => self.clone(),
            _ => self
                .surd_binary(other, Surd::mul)
                .or_else(|| self.alg_binary(other, Alg::mul))
                .unwrap_or_else(|| ExactReal::from_kind(Kind::Mul(self.clone(), other.clone()))),
        }
    }

    pub fn neg(&self) -> ExactReal {
        match &self.0.kind {
            Kind::Const(q) => ExactReal::from_rational(-q),
            Kind::Neg(inner) => inner.clone(),
            _ => match (&self.0.surd, &self.0.alg) {
                (Some(s), _) => ExactReal::from_surd(s.neg()),
                (None, Some(a)) => ExactReal::from_alg(a.neg()),
                (None, None) => ExactReal::from_kind(Kind::Neg(self.clone())),
            },
        }
    }

    /// Exact quotient; fails when the divisor is exactly zero.
    pub fn div(&self, other: &ExactReal) -> Result<ExactReal, ExactError> {
        if let (Some(a), Some(b)) = (self.surd(), other.surd()) {
            if b.as_rational().is_some_and(|q| q.is_zero()) {
                return Err(ExactError::DivisionByZero);
            }
            if let Some(s) = b.inv().and_then(|bi| a.mul(&bi)) {
                return Ok(ExactReal::from_surd(s));
            }
        }
        if self.0.alg.is_some() || other.0.alg.is_some() {
            if let (Some(a), Some(b)) = (self.alg_form(), other.alg_form()) {
                if b.is_zero() {
                    return Err(ExactError::DivisionByZero);
                }
                if let Some(x) = b.inv().and_then(|bi| a.mul(&bi)) {
                    return Ok(ExactReal::from_alg(x));
                }
            }
        }
        if other.sign()? == Sign::Zero {
            return Err(ExactError::DivisionByZero);
        }
        Ok(match (self.as_rational(), other.as_rational()) {
            (Some(a), Some(b)) => ExactReal::from_rational(a / b),
            (Some(a), _) if a.is_zero() => ExactReal::zero(),
            (_, Some(b)) if b.is_one() => self.clone(),
            _ => ExactReal::from_kind(Kind::Div(self.clone(), other.clone())),
        })
    }

    pub fn recip(&self) -> Result<ExactReal, ExactError> {
        ExactReal::one().div(self)
    }

    /// Nonnegative square root; fails on a negative radicand.
    pub fn sqrt(&self) -> Result<ExactReal, ExactError> {
        if let Some(q) = self.as_rational() {
            if q.is_negative() {
                return Err(ExactError::NegativeRadicand);
            }
            if let Some(r) = rational::rational_sqrt(q) {
                return Ok(ExactReal::from_rational(r));
            }
            return Ok(match Surd::sqrt_of_rational(q) {
                Some(s) => ExactReal::from_surd(s),
                None => interned_radical(2, q, None),
            });
        }
        match self.sign()? {
            Sign::Negative => Err(ExactError::NegativeRadicand),
            Sign::Zero => Ok(ExactReal::zero()),
            Sign::Positive => {
                if let Some(r) = self.0.surd.as_ref().and_then(Surd::sqrt) {
                    let x = ExactReal::from_surd(r);
                    return Ok(if x.sign()? == Sign::Negative { x.neg() } else { x });
                }
                if self.0.alg.is_some() {
                    let base = |q: &Rational| Surd::sqrt_of_rational(q).and_then(|s| ExactReal::surd_to_alg(&s));
                    if let Some(r) = self.0.alg.as_ref().and_then(|a| a.sqrt(&base)) {
                        let x = ExactReal::from_alg(r);
                        return Ok(if x.sign()? == Sign::Negative { x.neg() } else { x });
                    }
                }
                Ok(self.radical_atom(2, Kind::Sqrt(self.clone())))
            }
        }
    }

    /// Real cube root (defined for every sign).
    pub fn cbrt(&self) -> ExactReal {
        if let Some(q) = self.as_rational() {
            if let Some(r) = rational::rational_cbrt(q) {
                return ExactReal::from_rational(r);
            }
            return interned_radical(3, q, None);
        }
        self.radical_atom(3, Kind::Cbrt(self.clone()))
    }

    /// The root node `kind` of this radicand, as a tower atom when possible.
    fn radical_atom(&self, index: u8, kind: Kind) -> ExactReal {
        match self.alg_form() {
            Some(r) => alg::interned(index, &r, |a| ExactReal::with_forms(kind, None, Some(a))).1,
            None => ExactReal::from_kind(kind),
        }
    }

    pub fn square(&self) -> ExactReal {
        self.mul(self)
    }

    pub fn powi(&self, n: u32) -> ExactReal {
        let mut acc = ExactReal::one();
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn scale(&self, q: &Rational) -> ExactReal {
        self.mul(&ExactReal::from_rational(q.clone()))
    }

    /// The unique root of `t^3 + p t + q` inside `[lo, hi]`. The caller
    /// guarantees isolation and that `lo_sign` is the (nonzero) sign at `lo`.
    pub(crate) fn cubic_root_unchecked(
        p: &ExactReal,
        q: &ExactReal,
        lo: Dyadic,
        hi: Dyadic,
        lo_sign: i32,
    ) -> ExactReal {
        let narrowed = Narrowing { lo: lo.clone(), hi: hi.clone(), work_prec: 32 };
        let kind = Kind::CubicRoot(CubicRootData {
            p: p.clone(),
            q: q.clone(),
            lo,
            hi,
            lo_sign,
            narrowed: Mutex::new(narrowed),
        });
        match (p.alg_form(), q.alg_form()) {
            (Some(pa), Some(qa)) => {
                // t^3 = -q - p t
                let relation = vec![qa.neg(), pa.neg(), Alg::zero()];
                alg::register(3, relation, |a| ExactReal::with_forms(kind, None, Some(a))).1
            }
            _ => ExactReal::from_kind(kind),
        }
    }

    /// Enclosure at working precision `w`, or `None` when `w` is too coarse
    /// to separate a divisor from zero.
    fn eval(&self, w: i64) -> Option<Interval> {
        {
            let c = lock(&self.0.cache);
            if let Some(best) = &c.best {
                if best.is_point() || c.prec.is_some_and(|p| p >= w) {
                    return Some(best.clone());
                }
            }
        }
        let fresh = match &self.0.kind {
            Kind::Const(q) => match Dyadic::from_rational(q) {
                Some(d) => Interval::point(d),
                None => Interval::new(Dyadic::floor_rational(q, w), Dyadic::ceil_rational(q, w)),
            },
            Kind::Add(a, b) => a.eval(w)?.add(&b.eval(w)?).round_out(w),
            Kind::Sub(a, b) => a.eval(w)?.sub(&b.eval(w)?).round_out(w),
            Kind::Mul(a, b) => a.eval(w)?.mul(&b.eval(w)?).round_out(w),
            Kind::Div(a, b) => a.eval(w)?.div(&b.eval(w)?, w)?,
            Kind::Neg(a) => a.eval(w)?.neg(),
            Kind::Sqrt(a) => a.eval(w)?.sqrt(w),
            Kind::Cbrt(a) => a.eval(w)?.cbrt(w),
            Kind::CubicRoot(d) => d.narrow(w)?,
        };
        let mut c = lock(&self.0.cache);
        let merged = match &c.best {
            Some(best) => best.intersect(&fresh),
            None => fresh,
        };
        c.best = Some(merged.clone());
        c.prec = Some(c.prec.map_or(w, |p| p.max(w)));
        Some(merged)
    }

    /// An enclosure of width at most `2^-bits`. Successive calls only narrow.
    pub fn refine(&self, bits: i64) -> Interval {
        let mut w = bits.max(0) + 4;
        loop {
            if let Some(iv) = self.eval(w) {
                if iv.width_at_most(bits) {
                    return iv;
                }
            }
            w = w + w / 2 + 8;
        }
    }

    /// The tightest enclosure computed so far, if any.
    pub fn cached_interval(&self) -> Option<Interval> {
        lock(&self.0.cache).best.clone()
    }

    pub fn to_f64(&self) -> f64 {
        self.refine(64).to_f64_mid()
    }

    /// Product of radical degrees over the distinct radical nodes of the
    /// DAG, saturating just above `cap`.
    fn degree_bound(&self, cap: u64) -> u64 {
        let mut seen = HashSet::new();
        let mut stack = vec![self.clone()];
        let mut degree: u64 = 1;
        while let Some(x) = stack.pop() {
            if !seen.insert(x.id()) {
                continue;
            }
            match &x.0.kind {
                Kind::Const(_) => {}
                Kind::Add(a, b) | Kind::Sub(a, b) | Kind::Mul(a, b) | Kind::Div(a, b) => {
                    stack.push(a.clone());
                    stack.push(b.clone());
                }
                Kind::Neg(a) => stack.push(a.clone()),
                Kind::Sqrt(a) => {
                    degree = degree.saturating_mul(2);
                    stack.push(a.clone());
                }
                Kind::Cbrt(a) => {
                    degree = degree.saturating_mul(3);
                    stack.push(a.clone());
                }
                Kind::CubicRoot(d) => {
                    degree = degree.saturating_mul(3);
                    stack.push(d.p.clone());
                    stack.push(d.q.clone());
                }
            }
            if degree > cap {
                return cap.saturating_add(1);
            }
        }
        degree
    }

    /// `(bits, degree)`: a nonzero value of this expression has magnitude at
    /// least `2^-bits`.
    fn separation(&self, cfg: &SignConfig) -> (Option<i64>, u64) {
        let degree = self.degree_bound(cfg.max_degree);
        if degree > cfg.max_degree {
            return (None, degree);
        }
        let b = self.0.bound;
        let log_u = b.log_u.max(0.0);
        let bits = (degree as f64 - 1.0) * log_u + b.log_l.max(0.0);
        if !bits.is_finite() || bits > 1e15 {
            return (None, degree);
        }
        (Some(bits.ceil() as i64 + 1), degree)
    }

    /// Exact sign.
    pub fn sign(&self) -> Result<Sign, ExactError> {
        if let Some(q) = self.as_rational() {
            return Ok(Sign::from_i32(match q.numer().sign() {
                num_bigint::Sign::Minus => -1,
                num_bigint::Sign::NoSign => 0,
                num_bigint::Sign::Plus => 1,
            }));
        }
        if let Some(iv) = self.cached_interval() {
            if let Some(s) = decided(&iv) {
                return Ok(s);
            }
        }
        if self.0.surd.is_some() {
            // A canonical surd that is not a literal is nonzero.
            let mut bits: i64 = 32;
            loop {
                if let Some(s) = decided(&self.refine(bits)) {
                    return Ok(s);
                }
                bits *= 2;
            }
        }
        let cfg = sign_config();
        let mut bits: i64 = 24;
        let mut sep: Option<(Option<i64>, u64)> = None;
        loop {
            let iv = self.refine(bits);
            if let Some(s) = decided(&iv) {
                return Ok(s);
            }
            let (sep_bits, degree) = *sep.get_or_insert_with(|| self.separation(&cfg));
            if let Some(sb) = sep_bits {
                if bits > sb {
                    return Ok(Sign::Zero);
                }
            }
            if bits >= cfg.max_bits {
                return Err(ExactError::PrecisionExhausted { bits, degree });
            }
            let mut next = bits * 2;
            if let Some(sb) = sep_bits {
                next = next.min(sb + 1);
            }
            bits = next.min(cfg.max_bits).max(bits + 1);
        }
    }

    pub fn is_zero(&self) -> Result<bool, ExactError> {
        Ok(self.sign()? == Sign::Zero)
    }

    /// Exact comparison.
    pub fn cmp_exact(&self, other: &ExactReal) -> Result<Ordering, ExactError> {
        if self.ptr_eq(other) {
            return Ok(Ordering::Equal);
        }
        if let (Some(a), Some(b)) = (self.cached_interval(), other.cached_interval()) {
            if a.hi < b.lo {
                return Ok(Ordering::Less);
            }
            if b.hi < a.lo {
                return Ok(Ordering::Greater);
            }
        }
        Ok(self.sub(other).sign()?.to_ordering())
    }

    pub fn eq_exact(&self, other: &ExactReal) -> Result<bool, ExactError> {
        Ok(self.cmp_exact(other)? == Ordering::Equal)
    }

    pub fn abs(&self) -> Result<ExactReal, ExactError> {
        Ok(match self.sign()? {
            Sign::Negative => self.neg(),
            _ => self.clone(),
        })
    }

    /// Significant-digit decimal rendering, rounded half-to-even. The value
    /// is approximate unless the expansion terminates.
    pub fn to_decimal(&self, digits: usize) -> Result<String, ExactError> {
        super::decimal::render(self, digits.max(1))
    }

    /// `≈`-prefixed decimal rendering.
    pub fn approx_string(&self, digits: usize) -> Result<String, ExactError> {
        Ok(format!("≈{}", self.to_decimal(digits)?))
    }

    /// Number of nodes of the expression written out as a tree, saturating at `cap`.
    pub fn tree_size(&self, cap: usize) -> usize {
        fn go(x: &ExactReal, cap: usize, acc: &mut usize) {
            *acc += 1;
            if *acc >= cap {
                return;
            }
            match &x.0.kind {
                Kind::Const(_) => {}
                Kind::Add(a, b) | Kind::Sub(a, b) | Kind::Mul(a, b) | Kind::Div(a, b) => {
                    go(a, cap, acc);
                    go(b, cap, acc);
                }
                Kind::Neg(a) | Kind::Sqrt(a) | Kind::Cbrt(a) => go(a, cap, acc),
                Kind::CubicRoot(d) => {
                    go(&d.p, cap, acc);
                    go(&d.q, cap, acc);
                }
            }
        }
        let mut n = 0;
        go(self, cap, &mut n);
        n.min(cap)
    }

    /// Expression text in the literal grammar.
    pub fn expr_string(&self) -> String {
        let mut s = String::new();
        self.write_expr(&mut s, 0);
        s
    }

    fn precedence(&self) -> u8 {
        match &self.0.kind {
            Kind::Const(q) => {
                if !q.is_integer() {
                    2
                } else if q.is_negative() {
                    3
                } else {
                    5
                }
            }
            Kind::Add(..) | Kind::Sub(..) => 1,
            Kind::Mul(..) | Kind::Div(..) => 2,
            Kind::Neg(_) => 3,
            _ => 5,
        }
    }

    fn write_child(&self, out: &mut String, min_prec: u8) {
        if self.precedence() < min_prec {
            out.push('(');
            self.write_expr(out, 0);
            out.push(')');
        } else {
            self.write_expr(out, min_prec);
        }
    }

    fn write_expr(&self, out: &mut String, _ctx: u8) {
        match &self.0.kind {
            Kind::Const(q) => out.push_str(&rational::format_rational(q)),
            Kind::Add(a, b) => {
                a.write_child(out, 1);
                out.push_str(" + ");
                b.write_child(out, 2);
            }
            Kind::Sub(a, b) => {
                a.write_child(out, 1);
                out.push_str(" - ");
                b.write_child(out, 2);
            }
            Kind::Mul(a, b) => {
                a.write_child(out, 2);
                out.push_str(" * ");
                b.write_child(out, 3);
            }
            Kind::Div(a, b) => {
                a.write_child(out, 2);
                out.push_str(" / ");
                b.write_child(out, 3);
            }
            Kind::Neg(a) => {
                out.push('-');
                a.write_child(out, 4);
            }
            Kind::Sqrt(a) => {
                out.push_str("sqrt(");
                a.write_expr(out, 0);
                out.push(')');
            }
            Kind::Cbrt(a) => {
                out.push_str("cbrt(");
                a.write_expr(out, 0);
                out.push(')');
            }
            Kind::CubicRoot(d) => {
                out.push_str("cubicroot(");
                d.p.write_expr(out, 0);
                out.push_str(", ");
                d.q.write_expr(out, 0);
                out.push_str(", ");
                out.push_str(&d.lo.to_string());
                out.push_str(", ");
                out.push_str(&d.hi.to_string());
                out.push(')');
            }
        }
    }
}

fn decided(iv: &Interval) -> Option<Sign> {
    if iv.lo.is_positive() {
        Some(Sign::Positive)
    } else if iv.hi.is_negative() {
        Some(Sign::Negative)
    } else if iv.lo.is_zero() && iv.hi.is_zero() {
        Some(Sign::Zero)
    } else {
        None
    }
}

impl CubicRootData {
    /// Narrow the isolating interval to width `2^-w` by sampling the cubic at
    /// the quarter points. At most one sample can be the root itself, so at
    /// least two of the three become decidable once `p` and `q` are known
    /// precisely enough.
    fn narrow(&self, w: i64) -> Option<Interval> {
        let mut st = lock(&self.narrowed);
        st.work_prec = st.work_prec.max(w + 8);
        let target = Dyadic::pow2(-w);
        let mut rounds_without_progress = 0;
        while st.hi.sub(&st.lo) > target {
            let p = self.p.eval(st.work_prec);
            let q = self.q.eval(st.work_prec);
            let (p, q) = match (p, q) {
                (Some(p), Some(q)) => (p, q),
                _ => {
                    st.work_prec = st.work_prec + st.work_prec / 2 + 8;
                    continue;
                }
            };
            let quarter = st.hi.sub(&st.lo).shl(-2);
            let mut lo = st.lo.clone();
            let mut hi = st.hi.clone();
            let mut progressed = false;
            for k in 1..=3 {
                let m = st.lo.add(&quarter.mul(&Dyadic::from_int(k)));
                if m <= lo || m >= hi {
                    continue;
                }
                let m3 = m.mul(&m).mul(&m);
                let f = p.scale(&m).add(&q).add(&Interval::point(m3));
                let s = if f.lo.is_positive() {
                    1
                } else if f.hi.is_negative() {
                    -1
                } else {
                    0
                };
                if s == 0 {
                    continue;
                }
                progressed = true;
                if s == self.lo_sign {
                    lo = m;
                } else {
                    hi = m;
                }
            }
            if progressed {
                st.lo = lo;
                st.hi = hi;
                rounds_without_progress = 0;
            } else {
                rounds_without_progress += 1;
                st.work_prec = st.work_prec + st.work_prec / 2 + 8 * rounds_without_progress;
            }
        }
        Some(Interval::new(st.lo.clone(), st.hi.clone()))
    }
}

impl fmt::Display for ExactReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.expr_string())
    }
}

impl fmt::Debug for ExactReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let approx = self.refine(40).to_f64_mid();
        write!(f, "ExactReal({} ~ {approx})", self.expr_string())
    }
}

impl From<i64> for ExactReal {
    fn from(n: i64) -> Self {
        ExactReal::from_int(n)
    }
}

impl From<Rational> for ExactReal {
    fn from(q: Rational) -> Self {
        ExactReal::from_rational(q)
    }
}

impl From<BigInt> for ExactReal {
    fn from(n: BigInt) -> Self {
        ExactReal::from_rational(Rational::from_integer(n))
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident) => {
        impl std::ops::$tr<&ExactReal> for &ExactReal {
            type Output = ExactReal;
            fn $method(self, rhs: &ExactReal) -> ExactReal {
                ExactReal::$method(self, rhs)
            }
        }
        impl std::ops::$tr<ExactReal> for ExactReal {
            type Output = ExactReal;
            fn $method(self, rhs: ExactReal) -> ExactReal {
                ExactReal::$method(&self, &rhs)
            }
        }
        impl std::ops::$tr<&ExactReal> for ExactReal {
            type Output = ExactReal;
            fn $method(self, rhs: &ExactReal) -> ExactReal {
                ExactReal::$method(&self, rhs)
            }
        }
        impl std::ops::$tr<ExactReal> for &ExactReal {
            type Output = ExactReal;
            fn $method(self, rhs: ExactReal) -> ExactReal {
                ExactReal::$method(self, &rhs)
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

impl std::ops::Neg for &ExactReal {
    type Output = ExactReal;
    fn neg(self) -> ExactReal {
        ExactReal::neg(self)
    }
}

impl std::ops::Neg for ExactReal {
    type Output = ExactReal;
    fn neg(self) -> ExactReal {
        ExactReal::neg(&self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rational::rat;

    fn sqrt(n: i64) -> ExactReal {
        ExactReal::from_int(n).sqrt().unwrap()
    }

    #[test]
    fn rational_folding() {
        let x = ExactReal::ratio(1, 2).add(&ExactReal::ratio(1, 3));
        assert_eq!(x.as_rational(), Some(&rat(5, 6)));
    }

    #[test]
    fn sqrt_squared_is_exact() {
        let s = sqrt(2);
        let d = s.mul(&s).sub(&ExactReal::from_int(2));
        assert_eq!(d.as_rational(), Some(&rat(0, 1)));
        let c = ExactReal::from_int(2).cbrt();
        assert_eq!(c.powi(3).as_rational(), Some(&rat(2, 1)));
        let c6 = ExactReal::from_int(2).cbrt().mul(&ExactReal::from_int(3).cbrt());
        assert_eq!(c6.powi(3).as_rational(), Some(&rat(6, 1)));
        let e = c6.sub(&ExactReal::from_int(6).cbrt());
        assert!(!e.is_rational_literal());
        assert_eq!(e.sign().unwrap(), Sign::Zero);
    }

    #[test]
    fn surds_stay_canonical() {
        let x = ExactReal::one().add(&sqrt(2));
        let inv = x.recip().unwrap();
        assert_eq!(inv.expr_string(), "-1 + sqrt(2)");
        let y = sqrt(2).add(&sqrt(3)).square();
        assert_eq!(y.expr_string(), "5 + 2 * sqrt(6)");
        assert!(y.sqrt().unwrap().sub(&sqrt(2)).sub(&sqrt(3)).is_rational_literal());
        let nested = ExactReal::from_int(4).add(&sqrt(8)).sqrt().unwrap();
        assert_eq!(nested.expr_string(), "sqrt(4 + 2 * sqrt(2))");
        assert_eq!(ExactReal::ratio(1, 2).sqrt().unwrap().expr_string(), "1/2 * sqrt(2)");
    }

    #[test]
    fn tower_identities() {
        use crate::exactnum::cubic_roots;
        // t^3 - 13/3 t + 178/27 has one real root
        let p = ExactReal::ratio(-13, 3);
        let q = ExactReal::ratio(178, 27);
        let t = cubic_roots(&p, &q).unwrap().remove(0).value;
        assert!(t.powi(3).add(&p.mul(&t)).add(&q).is_rational_literal());
        let inv = t.recip().unwrap();
        assert_eq!(inv.mul(&t).as_rational(), Some(&rat(1, 1)));
        // a square of a linear element, and 18 - t - 3t^2, whose root needs t^2
        let lin = t.add(&ExactReal::ratio(1, 3));
        let r = lin.square().sqrt().unwrap();
        assert!(r.sub(&lin.abs().unwrap()).is_rational_literal());
        let x = ExactReal::from_int(18).sub(&t).sub(&t.square().scale(&rat(3, 1)));
        let y = x.sqrt().unwrap();
        assert!(y.square().sub(&x).is_rational_literal());
        assert!(!matches!(y.0.kind, Kind::Sqrt(_)));
        // nested radical over the cubic field
        let s = ExactReal::from_int(2).add(&t.square()).sqrt().unwrap();
        assert!(s.square().sub(&t.square()).is_rational_literal());
    }

    #[test]
    fn nested_radical_identity() {
        // (sqrt2 + sqrt3)^2 = 5 + 2 sqrt6
        let lhs = sqrt(2).add(&sqrt(3));
        let inner = ExactReal::from_int(5).add(&ExactReal::from_int(2).mul(&sqrt(6)));
        let rhs = inner.sqrt().unwrap();
        assert_eq!(lhs.sub(&rhs).sign().unwrap(), Sign::Zero);
        assert_eq!(lhs.cmp_exact(&rhs).unwrap(), Ordering::Equal);
    }

    #[test]
    fn errors_on_bad_inputs() {
        assert_eq!(ExactReal::from_int(-1).sqrt().unwrap_err(), ExactError::NegativeRadicand);
        let z = sqrt(2).mul(&sqrt(2)).sub(&ExactReal::from_int(2));
        assert_eq!(ExactReal::one().div(&z).unwrap_err(), ExactError::DivisionByZero);
        assert_eq!(z.sqrt().unwrap().as_rational(), Some(&rat(0, 1)));
    }

    #[test]
    fn cbrt_roundtrip() {
        assert_eq!(ExactReal::from_int(-8).cbrt().as_rational(), Some(&rat(-2, 1)));
        let c = ExactReal::from_int(2).cbrt();
        assert_eq!(c.powi(3).sub(&ExactReal::from_int(2)).sign().unwrap(), Sign::Zero);
        let cc = c.cbrt();
        assert_eq!(cc.powi(9).sub(&ExactReal::from_int(2)).sign().unwrap(), Sign::Zero);
        let neg = ExactReal::from_int(-3).cbrt();
        assert_eq!(neg.sign().unwrap(), Sign::Negative);
    }

    #[test]
    fn rational_compare() {
        let d = ExactReal::ratio(22, 7).sub(&ExactReal::ratio(157, 50));
        assert_eq!(d.sign().unwrap(), Sign::Positive);
    }

    #[test]
    fn refine_widths() {
        let third = ExactReal::ratio(1, 3);
        let iv = third.refine(10);
        assert!(iv.width_at_most(10));
        let q = rat(1, 3);
        assert!(iv.lo.to_rational() <= q && q <= iv.hi.to_rational());
        let z = ExactReal::zero().refine(100);
        assert!(z.is_point() && z.lo.is_zero());
        let a = sqrt(2).refine(20);
        let b = sqrt(2).refine(80);
        assert!(b.width_at_most(80));
        assert!(a.lo <= b.lo && b.hi <= a.hi);
        assert!(sqrt(2).ptr_eq(&sqrt(2)));
    }

    #[test]
    fn refine_is_monotone_on_one_node() {
        let s = sqrt(3).add(&ExactReal::ratio(1, 7));
        let a = s.refine(10);
        let b = s.refine(50);
        let c = s.refine(30);
        assert!(a.contains(&b));
        assert!(b.contains(&c) || c == b);
    }

    #[test]
    fn precision_exhausted_when_capped() {
        let cb = |n: i64| ExactReal::from_int(n).cbrt();
        let z = cb(2).mul(&cb(3)).sub(&cb(6));
        let cfg = SignConfig { max_bits: 16, max_degree: 1 << 16 };
        let r = with_sign_config(cfg, || z.sign());
        assert!(matches!(r, Err(ExactError::PrecisionExhausted { .. })));
        let cfg = SignConfig { max_bits: 4096, max_degree: 4 };
        let r = with_sign_config(cfg, || z.sign());
        assert!(matches!(r, Err(ExactError::PrecisionExhausted { .. })));
        assert_eq!(z.sign().unwrap(), Sign::Zero);
    }

    #[test]
    fn expression_text() {
        let c = ExactReal::from_int(2).cbrt();
        let x = ExactReal::one().add(&c).mul(&ExactReal::ratio(-1, 2));
        assert_eq!(x.expr_string(), "(-1 - cbrt(2)) / 2");
        let y = ExactReal::from_int(3).sub(&c.sub(&ExactReal::one()));
        assert_eq!(y.expr_string(), "4 - cbrt(2)");
        let raw = |k| ExactReal::from_kind(k);
        let sum = raw(Kind::Add(ExactReal::one(), c.clone()));
        let x = raw(Kind::Mul(sum, ExactReal::ratio(-1, 2)));
        assert_eq!(x.expr_string(), "(1 + cbrt(2)) * (-1/2)");
        let diff = raw(Kind::Sub(c.clone(), ExactReal::one()));
        let y = raw(Kind::Sub(ExactReal::from_int(3), diff));
        assert_eq!(y.expr_string(), "3 - (cbrt(2) - 1)");
        assert_eq!(c.square().expr_string(), "cbrt(2) * cbrt(2)");
        let z = ExactReal::ratio(-1, 2).sub(&sqrt(2).scale(&rat(3, 2)));
        assert_eq!(z.expr_string(), "-1/2 - 3/2 * sqrt(2)");
    }

    #[test]
    fn shared_across_threads() {
        let s = sqrt(5).add(&sqrt(7));
        let handles: Vec<_> = (0..4)
            .map(|i| {
                let s = s.clone();
                std::thread::spawn(move || s.refine(40 + 20 * i))
            })
            .collect();
        let truth = 5f64.sqrt() + 7f64.sqrt();
        for h in handles {
            let iv = h.join().unwrap();
            assert!(iv.lo.to_f64() <= truth + 1e-12 && truth - 1e-12 <= iv.hi.to_f64());
        }
    }
}
