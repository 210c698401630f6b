//! Classifiers for the constructible-number hierarchy: Thalian numbers,
//! roots of unity, totally real square roots, the origami degree condition
//! and regular polygons.

mod intpoly;

use std::fmt;

use crate::exactnum::{factor_u64, format_rational, rational_sqrt, ExactError, ExactReal, Rational, Sign};

pub use intpoly::{divide_exact, irreducibility, primitive, IntPoly, Irreducibility};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum FieldError {
    #[error("input lies outside the supported tower: {0}")]
    UnsupportedTower(String),
    #[error("square root of a negative number")]
    NegativeRadicand,
    #[error("polynomial is reducible: factor {0}")]
    ReduciblePolynomial(String),
    #[error("irreducibility could not be decided")]
    Undecided,
    #[error("out of range: {0}")]
    OutOfRange(String),
    #[error(transparent)]
    Exact(ExactError),
}

impl From<ExactError> for FieldError {
    fn from(e: ExactError) -> Self {
        FieldError::Exact(e)
    }
}

pub type FieldResult<T> = Result<T, FieldError>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Thalian,
    NonThalian,
    DegreeConditionPass,
    DegreeConditionFail,
    TotallyRealWitness,
    NotTotallyReal,
}

/// Evidence behind a verdict, detailed enough to be rechecked.
#[derive(Clone, Debug)]
pub enum Certificate {
    /// `z = a + b i` with `b^2 = bsq`; `b_root` is `b` when rational.
    Thalian { a: Rational, bsq: Rational, b_root: Option<Rational>, field: String },
    /// `x = p + q sqrt(r)` and its conjugate `p - q sqrt(r)`.
    Conjugates { value: ExactReal, conjugate: ExactReal, conjugate_sign: Sign },
    /// Degree of an irreducible polynomial, its factorization, and the
    /// irreducibility evidence.
    Degree { degree: usize, factors: Vec<(u64, u32)>, irreducibility: Irreducibility },
}

#[derive(Clone, Debug)]
pub struct FieldClass {
    pub verdict: Verdict,
    pub certificate: Certificate,
}

fn exponents(n: u64) -> Vec<(u64, u32)> {
    let mut out: Vec<(u64, u32)> = Vec::new();
    for p in factor_u64(n) {
        match out.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => out.push((p, 1)),
        }
    }
    out
}

/// `2^3·3`, or `1`.
pub fn format_factors(f: &[(u64, u32)]) -> String {
    if f.is_empty() {
        return "1".to_string();
    }
    f.iter()
        .map(|&(p, e)| if e == 1 { p.to_string() } else { format!("{p}^{e}") })
        .collect::<Vec<_>>()
        .join("·")
}

/// Classifies `z = a + b i` (with `b != 0`, `b^2 = bsq`): Thalian iff `b`
/// lies in `Q(a, b^2)`, which for rational `a` and `b^2` means `b` rational.
///
/// `b_is_rational` states how `b` was given; it must agree with `bsq`.
pub fn thalian_classify(a: &Rational, bsq: &Rational, b_is_rational: bool) -> FieldResult<FieldClass> {
    use num_traits::{Signed, Zero};
    if !bsq.is_positive() {
        let why = if bsq.is_zero() { "b = 0 (z is real)" } else { "b^2 < 0 (b not real)" };
        return Err(FieldError::UnsupportedTower(why.to_string()));
    }
    let b_root = rational_sqrt(bsq);
    if b_is_rational && b_root.is_none() {
        return Err(FieldError::UnsupportedTower(format!("b is marked rational but b^2 = {} is not a square", format_rational(bsq))));
    }
    let (verdict, field) = match &b_root {
        Some(b) => (Verdict::Thalian, format!("Q(a, b, i) = Q(i), b = {}", format_rational(b))),
        None => (
            Verdict::NonThalian,
            format!("Q(a, b^2) + Q(a, b^2)·b i = Q + Q·sqrt({}) i", format_rational(bsq)),
        ),
    };
    Ok(FieldClass {
        verdict,
        certificate: Certificate::Thalian { a: a.clone(), bsq: bsq.clone(), b_root, field },
    })
}

/// Whether `exp(2 pi i / m)` is Thalian: exactly when `4 | m`.
pub fn root_of_unity_thalian(m: u64) -> FieldResult<bool> {
    if m < 3 {
        return Err(FieldError::OutOfRange(format!("m = {m} < 3")));
    }
    Ok(m % 4 == 0)
}

/// Whether `sqrt(p + q sqrt(r))` has a real conjugate, i.e. whether both
/// `p + q sqrt(r)` and `p - q sqrt(r)` are nonnegative.
pub fn totally_real_quadratic(p: &Rational, q: &Rational, r: &Rational) -> FieldResult<FieldClass> {
    use num_traits::Signed;
    if r.is_negative() {
        return Err(FieldError::NegativeRadicand);
    }
    let root = ExactReal::from_rational(r.clone()).sqrt()?;
    let base = ExactReal::from_rational(p.clone());
    let shift = root.scale(q);
    let value = base.add(&shift);
    if value.sign()? != Sign::Positive {
        return Err(FieldError::NegativeRadicand);
    }
    let conjugate = base.sub(&shift);
    let conjugate_sign = conjugate.sign()?;
    let verdict = if conjugate_sign == Sign::Negative { Verdict::NotTotallyReal } else { Verdict::TotallyRealWitness };
    Ok(FieldClass { verdict, certificate: Certificate::Conjugates { value, conjugate, conjugate_sign } })
}

/// The degree condition for origami numbers: the minimal polynomial (given
/// by coefficients, leading first) must be irreducible, and passes when its
/// degree is `2^a 3^b`. The condition is necessary, not sufficient.
pub fn origami_degree_check(coeffs: &[Rational]) -> FieldResult<FieldClass> {
    let asc: Vec<Rational> = coeffs.iter().rev().cloned().collect();
    let f = primitive(&asc);
    if f.len() < 2 {
        return Err(FieldError::OutOfRange("polynomial must have degree at least 1".to_string()));
    }
    let degree = f.len() - 1;
    let evidence = irreducibility(&f);
    match &evidence {
        Irreducibility::Reducible(g) => return Err(FieldError::ReduciblePolynomial(format_int_poly(g))),
        Irreducibility::Undecided => return Err(FieldError::Undecided),
        Irreducibility::Irreducible { .. } => {}
    }
    let factors = exponents(degree as u64);
    let pass = factors.iter().all(|&(p, _)| p == 2 || p == 3);
    Ok(FieldClass {
        verdict: if pass { Verdict::DegreeConditionPass } else { Verdict::DegreeConditionFail },
        certificate: Certificate::Degree { degree, factors, irreducibility: evidence },
    })
}

/// `3x^2 - 2`, from ascending integer coefficients.
pub fn format_int_poly(f: &IntPoly) -> String {
    use num_traits::{Signed, Zero};
    let mut out = String::new();
    for (i, c) in f.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let mag = c.abs();
        if out.is_empty() {
            if c.is_negative() {
                out.push('-');
            }
        } else {
            out.push_str(if c.is_negative() { " - " } else { " + " });
        }
        let unit = mag == num_bigint::BigInt::from(1);
        match i {
            0 => out.push_str(&mag.to_string()),
            _ => {
                if !unit {
                    out.push_str(&mag.to_string());
                }
                out.push('x');
                if i > 1 {
                    out.push_str(&format!("^{i}"));
                }
            }
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

/// Why a polygon is not constructible.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NgonObstruction {
    /// A prime above 3 divides `n` more than once.
    RepeatedPrime { p: u64, exponent: u32 },
    /// `p - 1` has a prime factor other than 2 and 3.
    NotPierpont { p: u64, factors: Vec<(u64, u32)> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NgonCertificate {
    pub n: u64,
    pub factors: Vec<(u64, u32)>,
    /// Each prime above 3 with the factorization of `p - 1`.
    pub pierpont: Vec<(u64, Vec<(u64, u32)>)>,
    pub obstruction: Option<NgonObstruction>,
}

impl fmt::Display for NgonCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.obstruction {
            Some(NgonObstruction::NotPierpont { p, factors }) => {
                write!(f, "not constructible: {p} − 1 = {}", format_factors(factors))
            }
            Some(NgonObstruction::RepeatedPrime { p, exponent }) => {
                write!(f, "not constructible: {} = {}, prime {p} repeated ({p}^{exponent})", self.n, format_factors(&self.factors))
            }
            None => {
                write!(f, "constructible: {} = {}", self.n, format_factors(&self.factors))?;
                for (p, pf) in &self.pierpont {
                    write!(f, "; {p} − 1 = {}", format_factors(pf))?;
                }
                Ok(())
            }
        }
    }
}

pub const NGON_LIMIT: u64 = 1_000_000_000;

/// A regular `n`-gon is constructible by folding iff
/// `n = 2^a 3^b p_1 ... p_s` with distinct primes `p_i > 3` of the form `2^c 3^d + 1`.
pub fn ngon_constructible(n: u64) -> FieldResult<(bool, NgonCertificate)> {
    if !(3..=NGON_LIMIT).contains(&n) {
        return Err(FieldError::OutOfRange(format!("n = {n} is outside 3..={NGON_LIMIT}")));
    }
    let factors = exponents(n);
    let mut pierpont = Vec::new();
    let mut obstruction = None;
    for &(p, e) in factors.iter().filter(|(p, _)| *p > 3) {
        let pf = exponents(p - 1);
        let smooth = pf.iter().all(|&(q, _)| q == 2 || q == 3);
        if obstruction.is_none() {
            if !smooth {
                obstruction = Some(NgonObstruction::NotPierpont { p, factors: pf.clone() });
            } else if e > 1 {
                obstruction = Some(NgonObstruction::RepeatedPrime { p, exponent: e });
            }
        }
        pierpont.push((p, pf));
    }
    Ok((obstruction.is_none(), NgonCertificate { n, factors, pierpont, obstruction }))
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Thalian => "Thalian",
            Verdict::NonThalian => "non-Thalian",
            Verdict::DegreeConditionPass => "degree condition holds",
            Verdict::DegreeConditionFail => "degree condition fails",
            Verdict::TotallyRealWitness => "totally real",
            Verdict::NotTotallyReal => "not totally real",
        })
    }
}

impl fmt::Display for FieldClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.verdict)?;
        match &self.certificate {
            Certificate::Thalian { field, .. } => write!(f, "; field {field}"),
            Certificate::Conjugates { conjugate, conjugate_sign, .. } => {
                let s = match conjugate_sign {
                    Sign::Negative => "negative, so its square root is not real",
                    Sign::Zero => "zero",
                    Sign::Positive => "positive",
                };
                write!(f, "; conjugate {conjugate} is {s}")
            }
            Certificate::Degree { degree, factors, irreducibility } => {
                write!(f, "; irreducible of degree {degree} = {}", format_factors(factors))?;
                if let Irreducibility::Irreducible { primes, exhaustive } = irreducibility {
                    let shown: Vec<String> =
                        primes.iter().map(|(p, d)| format!("mod {p}: {d:?}")).collect();
                    write!(f, " (factor degrees {}", shown.join(", "))?;
                    if *exhaustive {
                        write!(f, "; remaining degrees excluded by root-subset search")?;
                    }
                    write!(f, ")")?;
                }
                if self.verdict == Verdict::DegreeConditionPass {
                    write!(f, "; necessary only, not sufficient")?;
                }
                Ok(())
            }
        }
    }
}
