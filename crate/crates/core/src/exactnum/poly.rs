//! Dense univariate polynomials with exact real coefficients, and real roots
//! up to degree three.

use super::cubic::{cubic_roots, sort_roots, Root};
use super::rational::rat;
use super::real::{ExactReal, Sign};
use super::ExactError;

/// Coefficients from the constant term upward.
#[derive(Clone, Debug)]
pub struct Poly(pub Vec<ExactReal>);

impl Poly {
    pub fn new(coeffs: Vec<ExactReal>) -> Poly {
        Poly(coeffs)
    }

    pub fn from_ints(coeffs: &[i64]) -> Poly {
        Poly(coeffs.iter().map(|&c| ExactReal::from_int(c)).collect())
    }

    pub fn constant(c: ExactReal) -> Poly {
        Poly(vec![c])
    }

    /// `c0 + c1 t`
    pub fn linear(c0: ExactReal, c1: ExactReal) -> Poly {
        Poly(vec![c0, c1])
    }

    pub fn coeff(&self, i: usize) -> ExactReal {
        self.0.get(i).cloned().unwrap_or_else(ExactReal::zero)
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.0.len().max(other.0.len());
        Poly((0..n).map(|i| self.coeff(i).add(&other.coeff(i))).collect())
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let n = self.0.len().max(other.0.len());
        Poly((0..n).map(|i| self.coeff(i).sub(&other.coeff(i))).collect())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.0.is_empty() || other.0.is_empty() {
            return Poly(Vec::new());
        }
        let mut out = vec![ExactReal::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        Poly(out)
    }

    pub fn scale(&self, k: &ExactReal) -> Poly {
        Poly(self.0.iter().map(|c| c.mul(k)).collect())
    }

    pub fn eval(&self, t: &ExactReal) -> ExactReal {
        let mut acc = ExactReal::zero();
        for c in self.0.iter().rev() {
            acc = acc.mul(t).add(c);
        }
        acc
    }

    pub fn derivative(&self) -> Poly {
        Poly(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c.mul(&ExactReal::from_int(i as i64)))
                .collect(),
        )
    }

    /// Exact degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Result<Option<usize>, ExactError> {
        for i in (0..self.0.len()).rev() {
            if self.0[i].sign()? != Sign::Zero {
                return Ok(Some(i));
            }
        }
        Ok(None)
    }

    /// Distinct real roots, ascending, with multiplicities. Supports degree
    /// at most three; the zero polynomial yields no roots.
    pub fn real_roots(&self) -> Result<Vec<Root>, ExactError> {
        match self.degree()? {
            None | Some(0) => Ok(Vec::new()),
            Some(1) => Ok(vec![Root { value: self.coeff(0).neg().div(&self.coeff(1))?, multiplicity: 1 }]),
            Some(2) => quadratic_roots(&self.coeff(2), &self.coeff(1), &self.coeff(0)),
            Some(3) => {
                let a3 = self.coeff(3);
                let b2 = self.coeff(2).div(&a3)?;
                let b1 = self.coeff(1).div(&a3)?;
                let b0 = self.coeff(0).div(&a3)?;
                // t = u - b2/3 removes the quadratic term
                let shift = b2.scale(&rat(1, 3));
                let p = b1.sub(&b2.mul(&shift));
                let q = ExactReal::from_rational(rat(2, 27))
                    .mul(&b2.powi(3))
                    .sub(&b2.mul(&b1).scale(&rat(1, 3)))
                    .add(&b0);
                let mut roots = cubic_roots(&p, &q)?;
                for r in &mut roots {
                    r.value = r.value.sub(&shift);
                }
                Ok(roots)
            }
            Some(d) => panic!("real_roots supports degree <= 3, got {d}"),
        }
    }
}

/// Real roots of `a t^2 + b t + c` with `a != 0`.
pub fn quadratic_roots(a: &ExactReal, b: &ExactReal, c: &ExactReal) -> Result<Vec<Root>, ExactError> {
    let disc = b.square().sub(&ExactReal::from_int(4).mul(a).mul(c));
    let two_a = a.mul(&ExactReal::from_int(2));
    match disc.sign()? {
        Sign::Negative => Ok(Vec::new()),
        Sign::Zero => Ok(vec![Root { value: b.neg().div(&two_a)?, multiplicity: 2 }]),
        Sign::Positive => {
            let s = disc.sqrt()?;
            let mut roots = vec![
                Root { value: b.neg().sub(&s).div(&two_a)?, multiplicity: 1 },
                Root { value: b.neg().add(&s).div(&two_a)?, multiplicity: 1 },
            ];
            sort_roots(&mut roots)?;
            Ok(roots)
        }
    }
}
