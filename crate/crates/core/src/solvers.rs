//! Equation solving by folding: square roots with axiom 5, real cubics with
//! axiom 6, and quartics through the pencil of two parabolas.

use crate::conics::{self, Conic, ConicError};
use crate::exactnum::{quadratic_roots, rat, ExactError, ExactReal, Poly, Root, Sign};
use crate::folds::{Construction, FoldError, Level, Trace};
use crate::geom::{self, GeomError, Line, Point};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum SolveError {
    #[error("input must be positive")]
    NonPositiveInput,
    #[error("input is out of range: {0}")]
    OutOfRange(String),
    #[error("leading coefficient is zero")]
    ZeroLeading,
    #[error("fold construction produced no solution")]
    NoSolution,
    #[error(transparent)]
    Fold(FoldError),
    #[error(transparent)]
    Conic(ConicError),
    #[error(transparent)]
    Exact(ExactError),
}

impl From<FoldError> for SolveError {
    fn from(e: FoldError) -> Self {
        match e {
            FoldError::Exact(x) => SolveError::Exact(x),
            other => SolveError::Fold(other),
        }
    }
}

impl From<ConicError> for SolveError {
    fn from(e: ConicError) -> Self {
        match e {
            ConicError::Exact(x) => SolveError::Exact(x),
            other => SolveError::Conic(other),
        }
    }
}

impl From<GeomError> for SolveError {
    fn from(e: GeomError) -> Self {
        FoldError::from(e).into()
    }
}

impl From<ExactError> for SolveError {
    fn from(e: ExactError) -> Self {
        SolveError::Exact(e)
    }
}

pub type SolveResult<T> = Result<T, SolveError>;

fn q(n: i64, d: i64) -> ExactReal {
    ExactReal::ratio(n, d)
}

/// How many successive derivatives of `p` vanish at `x`.
pub fn multiplicity(p: &Poly, x: &ExactReal) -> SolveResult<u32> {
    let mut k = 0;
    let mut d = p.clone();
    while d.degree()?.is_some() && d.eval(x).sign()? == Sign::Zero {
        k += 1;
        d = d.derivative();
    }
    Ok(k)
}

/// Folds `sqrt(r)` into `cons`: the tangents to `y = x^2/4` (focus `(0,1)`,
/// directrix `y = -1`) through `(0, -r/4)` touch it at `x = +-sqrt(r)`.
/// Returns the positive tangency abscissa.
fn fold_sqrt(cons: &mut Construction, r: &ExactReal) -> SolveResult<ExactReal> {
    if r.sign()? != Sign::Positive {
        return Err(SolveError::NonPositiveInput);
    }
    let focus = cons.add_point(Point::from_ints(0, 1));
    let directrix = cons.add_line(Line::horizontal(ExactReal::from_int(-1)));
    let aux = cons.add_point(Point::new(ExactReal::zero(), r.scale(&rat(-1, 4))));
    let folds = cons.o5(focus, directrix, aux)?;
    // folds are slope-ascending; the last has positive slope
    let fold = *folds.ids.last().ok_or(SolveError::NoSolution)?;
    let image = cons.reflect(focus, fold)?;
    let normal = cons.perpendicular(image, directrix)?;
    let touch = cons.o2(fold, normal)?;
    cons.set_label(touch, "S");
    Ok(cons.point(touch)?.x)
}

/// `sqrt(r)` for positive `r` by axiom 5, with its construction trace.
pub fn sqrt_by_fold(r: &ExactReal) -> SolveResult<(ExactReal, Trace)> {
    let mut cons = Construction::new(Level::Euclidean);
    let s = fold_sqrt(&mut cons, r)?;
    Ok((s, cons.into_trace()))
}

fn sort_by_value(roots: &mut [Root]) -> SolveResult<()> {
    let mut err = None;
    roots.sort_by(|a, b| {
        a.value.cmp_exact(&b.value).unwrap_or_else(|e| {
            err.get_or_insert(e);
            std::cmp::Ordering::Equal
        })
    });
    err.map_or(Ok(()), |e| Err(e.into()))
}

fn cubic_in_cons(cons: &mut Construction, a: &ExactReal, b: &ExactReal) -> SolveResult<Vec<Root>> {
    let poly = Poly::new(vec![b.clone(), a.clone(), ExactReal::zero(), ExactReal::one()]);
    let mut roots = Vec::new();
    if b.sign()? == Sign::Zero {
        // mu (mu^2 + a)
        let mult = if a.sign()? == Sign::Zero { 3 } else { 1 };
        roots.push(Root { value: ExactReal::zero(), multiplicity: mult });
        if a.sign()? == Sign::Negative {
            let s = fold_sqrt(cons, &a.neg())?;
            roots.push(Root { value: s.neg(), multiplicity: 1 });
            roots.push(Root { value: s, multiplicity: 1 });
        }
    } else {
        // slopes of the common tangents of (y - a/2)^2 = 2bx and y = x^2/2
        let half = rat(1, 2);
        let f1 = cons.add_point(Point::new(b.scale(&half), a.scale(&half)));
        let d1 = cons.add_line(Line::vertical(b.scale(&rat(-1, 2))));
        let f2 = cons.add_point(Point::new(ExactReal::zero(), q(1, 2)));
        let d2 = cons.add_line(Line::horizontal(q(-1, 2)));
        for (id, name) in [(f1, "F1"), (d1, "d1"), (f2, "F2"), (d2, "d2")] {
            cons.set_label(id, name);
        }
        let folds = cons.o6(f1, d1, f2, d2)?;
        for (i, l) in folds.result.lines.iter().enumerate() {
            cons.set_label(folds.ids[i], &format!("t{}", i + 1));
            let mu = l.slope()?.ok_or(SolveError::NoSolution)?;
            let m = multiplicity(&poly, &mu)?;
            if m == 0 {
                return Err(SolveError::NoSolution);
            }
            roots.push(Root { value: mu, multiplicity: m });
        }
    }
    sort_by_value(&mut roots)?;
    Ok(roots)
}

/// Real roots of `mu^3 + a mu + b` as slopes of axiom-6 folds, ascending.
pub fn cubic_by_fold(a: &ExactReal, b: &ExactReal) -> SolveResult<(Vec<Root>, Trace)> {
    let mut cons = Construction::new(Level::Origami);
    let roots = cubic_in_cons(&mut cons, a, b)?;
    Ok((roots, cons.into_trace()))
}

/// Real roots of `c3 t^3 + c2 t^2 + c1 t + c0`, by the shift removing the
/// quadratic term and then [`cubic_by_fold`].
pub fn solve_cubic(c3: &ExactReal, c2: &ExactReal, c1: &ExactReal, c0: &ExactReal) -> SolveResult<(Vec<Root>, Trace)> {
    if c3.sign()? == Sign::Zero {
        return Err(SolveError::ZeroLeading);
    }
    let p = c2.div(c3)?;
    let r1 = c1.div(c3)?;
    let r0 = c0.div(c3)?;
    let shift = p.scale(&rat(1, 3));
    let a = r1.sub(&p.mul(&shift));
    let b = p.powi(3).scale(&rat(2, 27)).sub(&p.mul(&r1).scale(&rat(1, 3))).add(&r0);
    let (mut roots, trace) = cubic_by_fold(&a, &b)?;
    for r in &mut roots {
        r.value = r.value.sub(&shift);
    }
    Ok((roots, trace))
}

/// The roots of `4x^3 - 3x = c`, i.e. the cosines of the thirds of the angle
/// whose cosine is `c`.
pub fn trisect(c: &ExactReal) -> SolveResult<Vec<Root>> {
    Ok(trisect_with_trace(c)?.0)
}

pub fn trisect_with_trace(c: &ExactReal) -> SolveResult<(Vec<Root>, Trace)> {
    if c.abs()?.cmp_exact(&ExactReal::one())? == std::cmp::Ordering::Greater {
        return Err(SolveError::OutOfRange(format!("|{c}| > 1")));
    }
    cubic_by_fold(&q(-3, 4), &c.scale(&rat(-1, 4)))
}

/// The real cube root of 2 as the slope of an axiom-6 fold.
pub fn duplicate_cube() -> SolveResult<ExactReal> {
    let (roots, _) = cubic_by_fold(&ExactReal::zero(), &ExactReal::from_int(-2))?;
    match roots.as_slice() {
        [r] => Ok(r.value.clone()),
        _ => Err(SolveError::NoSolution),
    }
}

/// `cos(2 pi / 9)`, the largest root of `4x^3 - 3x + 1/2`.
pub fn ninegon_cos() -> SolveResult<ExactReal> {
    let roots = trisect(&q(-1, 2))?;
    roots.last().map(|r| r.value.clone()).ok_or(SolveError::NoSolution)
}

/// Real roots of `x^4 + a x^2 + b x + c`, ascending with multiplicities.
///
/// For `b != 0` they are the abscissae of the common points of `y = x^2` and
/// `(y + a/2)^2 = -b (x + (4c - a^2)/(4b))`, that is `y^2 + a y + b x + c = 0`.
/// For `b = 0` the quartic is a quadratic in `x^2`.
pub fn quartic_roots(a: &ExactReal, b: &ExactReal, c: &ExactReal) -> SolveResult<Vec<Root>> {
    let z = ExactReal::zero;
    let poly = Poly::new(vec![c.clone(), b.clone(), a.clone(), z(), ExactReal::one()]);
    let mut xs: Vec<ExactReal> = Vec::new();
    if b.sign()? == Sign::Zero {
        for u in quadratic_roots(&ExactReal::one(), a, c)? {
            match u.value.sign()? {
                Sign::Negative => {}
                Sign::Zero => xs.push(z()),
                Sign::Positive => {
                    let s = u.value.sqrt()?;
                    xs.push(s.neg());
                    xs.push(s);
                }
            }
        }
    } else {
        let one = ExactReal::one;
        let par = Conic::from_coeffs([one(), z(), z(), z(), one().neg(), z()])?;
        let other = Conic::from_coeffs([z(), z(), one(), b.clone(), a.clone(), c.clone()])?;
        for p in conics::common_points(&par, &other)? {
            if p.is_at_infinity()? {
                continue;
            }
            let x = geom::to_affine(&p)?.x;
            let mut dup = false;
            for prev in &xs {
                if prev.eq_exact(&x)? {
                    dup = true;
                }
            }
            if !dup {
                xs.push(x);
            }
        }
    }
    let mut roots = Vec::with_capacity(xs.len());
    for x in xs {
        let m = multiplicity(&poly, &x)?;
        if m == 0 {
            return Err(SolveError::NoSolution);
        }
        roots.push(Root { value: x, multiplicity: m });
    }
    sort_by_value(&mut roots)?;
    Ok(roots)
}

/// `cos(2 pi / n)` built from folded square roots and cubic roots, for the
/// table `n` in {3, 4, 5, 6, 7, 8, 9, 12}.
pub fn unit_cosine(n: u32) -> SolveResult<ExactReal> {
    let fs = |r: i64| sqrt_by_fold(&ExactReal::from_int(r)).map(|(s, _)| s);
    Ok(match n {
        3 => q(-1, 2),
        4 => ExactReal::zero(),
        5 => fs(5)?.sub(&ExactReal::one()).scale(&rat(1, 4)),
        6 => q(1, 2),
        7 => {
            // largest root of 8x^3 + 4x^2 - 4x - 1
            let (roots, _) = solve_cubic(&8.into(), &4.into(), &(-4).into(), &(-1).into())?;
            roots.last().ok_or(SolveError::NoSolution)?.value.clone()
        }
        8 => fs(2)?.scale(&rat(1, 2)),
        9 => ninegon_cos()?,
        12 => fs(3)?.scale(&rat(1, 2)),
        _ => return Err(SolveError::OutOfRange(format!("no cosine construction for n = {n}"))),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::{cubic_roots, parse_literal, Rational};
    use crate::folds::Construction;

    /// Coefficients `(p, q, r)` of the monic cubic with the given roots.
    fn cubic_from_roots(r: [Rational; 3]) -> (Rational, Rational, Rational) {
        let s1 = &r[0] + &r[1] + &r[2];
        let s2 = &r[0] * &r[1] + &r[0] * &r[2] + &r[1] * &r[2];
        let s3 = &r[0] * &r[1] * &r[2];
        (-s1, s2, -s3)
    }

    fn e(s: &str) -> ExactReal {
        parse_literal(s).unwrap()
    }

    fn values(roots: &[Root]) -> Vec<f64> {
        roots.iter().map(|r| r.value.to_f64()).collect()
    }

    #[test]
    fn square_roots() {
        let (s, trace) = sqrt_by_fold(&e("4")).unwrap();
        assert_eq!(s.as_rational(), Some(&rat(2, 1)));
        let fold = trace.steps().iter().find(|st| st.op == "O5").unwrap();
        let Some(crate::folds::Object::Line(l)) = trace.object(*fold.out.last().unwrap()) else { panic!() };
        assert_eq!(l.slope().unwrap().unwrap().as_rational(), Some(&rat(1, 1)));
        assert!(l.contains(&Point::from_ints(0, -1)).unwrap());
        for r in ["2", "1", "3/7", "sqrt(2)"] {
            let x = e(r);
            let (s, _) = sqrt_by_fold(&x).unwrap();
            assert!(s.square().sub(&x).is_zero().unwrap());
            assert!(s.sign().unwrap() == Sign::Positive);
        }
        assert_eq!(sqrt_by_fold(&e("0")).unwrap_err(), SolveError::NonPositiveInput);
        assert_eq!(sqrt_by_fold(&e("-1")).unwrap_err(), SolveError::NonPositiveInput);
    }

    #[test]
    fn cubics() {
        let (roots, trace) = cubic_by_fold(&e("0"), &e("-2")).unwrap();
        assert_eq!(roots.len(), 1);
        assert_eq!(trace.count_op("O6"), 1);
        assert_eq!(roots[0].value.expr_string(), "cbrt(2)");
        let (roots, _) = cubic_by_fold(&e("-3/4"), &e("1/8")).unwrap();
        assert_eq!(roots.len(), 3);
        let (roots, trace) = cubic_by_fold(&e("-1"), &e("0")).unwrap();
        let v: Vec<_> = roots.iter().map(|r| r.value.as_rational().cloned().unwrap()).collect();
        assert_eq!(v, vec![rat(-1, 1), rat(0, 1), rat(1, 1)]);
        assert_eq!(trace.count_op("O5"), 1);
        let (roots, _) = cubic_by_fold(&e("0"), &e("0")).unwrap();
        assert_eq!(roots.len(), 1);
        assert_eq!(roots[0].multiplicity, 3);
        // double root: (x - 1)^2 (x + 2) = x^3 - 3x + 2
        let (roots, _) = cubic_by_fold(&e("-3"), &e("2")).unwrap();
        let m: Vec<_> = roots.iter().map(|r| r.multiplicity).collect();
        assert_eq!(m, vec![1, 2]);
        let alg = cubic_roots(&e("-3"), &e("2")).unwrap();
        for (x, y) in roots.iter().zip(&alg) {
            assert!(x.value.eq_exact(&y.value).unwrap());
            assert_eq!(x.multiplicity, y.multiplicity);
        }
    }

    #[test]
    fn general_cubic_shift() {
        // (t - 1)(t - 2)(t + 3) = t^3 - 7t + 6; shifted: (t-2)(t-3)(t+1)
        let (p, q1, r) = cubic_from_roots([rat(2, 1), rat(3, 1), rat(-1, 1)]);
        let (roots, _) = solve_cubic(
            &ExactReal::one(),
            &ExactReal::from_rational(p),
            &ExactReal::from_rational(q1),
            &ExactReal::from_rational(r),
        )
        .unwrap();
        let v: Vec<_> = roots.iter().map(|r| r.value.as_rational().cloned()).collect();
        assert_eq!(v, vec![Some(rat(-1, 1)), Some(rat(2, 1)), Some(rat(3, 1))]);
        assert_eq!(solve_cubic(&e("0"), &e("1"), &e("1"), &e("1")).unwrap_err(), SolveError::ZeroLeading);
    }

    #[test]
    fn trisection() {
        let roots = trisect(&e("-1/2")).unwrap();
        let want = [-0.9396926207859084, 0.17364817766693041, 0.766044443118978];
        for (x, w) in values(&roots).iter().zip(want) {
            assert!((x - w).abs() < 1e-12);
        }
        let roots = trisect(&e("1")).unwrap();
        assert_eq!(roots.len(), 2);
        assert_eq!(roots[0].value.as_rational(), Some(&rat(-1, 2)));
        assert_eq!(roots[0].multiplicity, 2);
        assert_eq!(roots[1].value.as_rational(), Some(&rat(1, 1)));
        let roots = trisect(&e("0")).unwrap();
        assert_eq!(roots.len(), 3);
        assert!(roots[2].value.sub(&e("sqrt(3)/2")).is_zero().unwrap());
        assert!(matches!(trisect(&e("3/2")), Err(SolveError::OutOfRange(_))));
    }

    #[test]
    fn delian_and_ninegon() {
        let r = duplicate_cube().unwrap();
        assert!(r.powi(3).sub(&e("2")).is_zero().unwrap());
        assert!((r.to_f64() - 1.2599210498948732).abs() < 1e-12);
        let c = ninegon_cos().unwrap();
        let v = c.powi(3).scale(&rat(4, 1)).sub(&c.scale(&rat(3, 1))).add(&e("1/2"));
        assert!(v.is_zero().unwrap());
        assert!((c.to_f64() - 0.766044443118978).abs() < 1e-12);
    }

    #[test]
    fn quartics() {
        let roots = quartic_roots(&e("-5"), &e("0"), &e("4")).unwrap();
        let v: Vec<_> = roots.iter().map(|r| r.value.as_rational().cloned().unwrap()).collect();
        assert_eq!(v, vec![rat(-2, 1), rat(-1, 1), rat(1, 1), rat(2, 1)]);
        let roots = quartic_roots(&e("0"), &e("0"), &e("0")).unwrap();
        assert_eq!(roots.len(), 1);
        assert_eq!(roots[0].multiplicity, 4);
        let roots = quartic_roots(&e("0"), &e("-1"), &e("0")).unwrap();
        let v: Vec<_> = roots.iter().map(|r| r.value.as_rational().cloned().unwrap()).collect();
        assert_eq!(v, vec![rat(0, 1), rat(1, 1)]);
        // (x - 1)^2 (x^2 + 2x + 3) = x^4 + 0x^3 + 0x^2 - 4x + 3
        let roots = quartic_roots(&e("0"), &e("-4"), &e("3")).unwrap();
        assert_eq!(roots.len(), 1);
        assert_eq!(roots[0].multiplicity, 2);
    }

    #[test]
    fn cosine_table() {
        for n in [3, 4, 5, 6, 7, 8, 9, 12] {
            let c = unit_cosine(n).unwrap();
            let want = (std::f64::consts::TAU / n as f64).cos();
            assert!((c.to_f64() - want).abs() < 1e-12, "n = {n}");
        }
        assert!(unit_cosine(11).is_err());
    }

    #[test]
    fn fold_sqrt_reuses_construction() {
        let mut cons = Construction::new(Level::Euclidean);
        fold_sqrt(&mut cons, &e("2")).unwrap();
        fold_sqrt(&mut cons, &e("3")).unwrap();
        assert_eq!(cons.trace().count_op("O5"), 2);
        assert!(matches!(
            cubic_in_cons(&mut cons, &e("1"), &e("1")),
            Err(SolveError::Fold(FoldError::AxiomNotAvailable { .. }))
        ));
    }
}
