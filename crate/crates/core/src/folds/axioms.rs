//! Pure fold solvers.

use std::cmp::Ordering;

use crate::exactnum::{rat, ExactReal, Poly, Sign};
use crate::geom::{self, squared_distance, Line, Point};

use super::FoldError;

/// The fold lines produced by one axiom application.
#[derive(Clone, Debug, Default)]
pub struct FoldResult {
    /// Distinct folds, slope ascending with vertical lines last.
    pub lines: Vec<Line>,
    /// The solutions form a continuum; `lines` then holds only isolated extras.
    pub continuum: bool,
    /// The line at infinity is also a solution.
    pub at_infinity: bool,
}

impl FoldResult {
    fn from_lines(lines: Vec<Line>) -> Result<FoldResult, FoldError> {
        Ok(FoldResult { lines: sort_lines(lines)?, continuum: false, at_infinity: false })
    }

    pub fn degenerate(&self) -> bool {
        self.continuum || self.at_infinity
    }

    pub fn len(&self) -> usize {
        self.lines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }
}

/// Sort by slope (vertical last) and drop exact duplicates.
pub fn sort_lines(lines: Vec<Line>) -> Result<Vec<Line>, FoldError> {
    let mut keyed = lines;
    let mut err = None;
    keyed.sort_by(|a, b| match a.cmp_slope(b) {
        Ok(o) => o,
        Err(e) => {
            err.get_or_insert(e);
            Ordering::Equal
        }
    });
    if let Some(e) = err {
        return Err(e.into());
    }
    let mut out: Vec<Line> = Vec::with_capacity(keyed.len());
    for l in keyed {
        let dup = match out.last() {
            Some(prev) => prev.eq_exact(&l)?,
            None => false,
        };
        if !dup {
            out.push(l);
        }
    }
    Ok(out)
}

pub fn o1(p: &Point, q: &Point) -> Result<Line, FoldError> {
    Ok(geom::line_through(p, q)?)
}

pub fn o2(l: &Line, m: &Line) -> Result<Point, FoldError> {
    Ok(geom::intersect(l, m)?)
}

pub fn o3(p: &Point, q: &Point) -> Result<Line, FoldError> {
    Ok(geom::perp_bisector(p, q)?)
}

/// Folds placing `l` onto `m`: the two angle bisectors, or the midline of
/// parallel lines.
pub fn o4(l: &Line, m: &Line) -> Result<FoldResult, FoldError> {
    if l.eq_exact(m)? {
        return Err(geom::GeomError::CoincidentLines.into());
    }
    if l.is_parallel(m)? {
        // Normalized parallel lines share (a, b).
        let c = l.c().add(m.c()).scale(&rat(1, 2));
        return FoldResult::from_lines(vec![Line::new(l.a().clone(), l.b().clone(), c)?]);
    }
    let n1 = l.a().square().add(&l.b().square()).sqrt()?;
    let n2 = m.a().square().add(&m.b().square()).sqrt()?;
    let mut lines = Vec::new();
    for s in [-1, 1] {
        let k = ExactReal::from_int(s);
        let coeff = |x: &ExactReal, y: &ExactReal| -> Result<ExactReal, FoldError> {
            Ok(x.div(&n1)?.add(&k.mul(&y.div(&n2)?)))
        };
        lines.push(Line::new(coeff(l.a(), m.a())?, coeff(l.b(), m.b())?, coeff(l.c(), m.c())?)?);
    }
    FoldResult::from_lines(lines)
}

/// Point on `l` nearest to `q`, and the squared distance from `q` to `l`.
fn foot(q: &Point, l: &Line) -> Result<(Point, ExactReal), FoldError> {
    let n2 = l.a().square().add(&l.b().square());
    let e = l.eval(q);
    let t = e.div(&n2)?;
    let f = Point::new(q.x.sub(&t.mul(l.a())), q.y.sub(&t.mul(l.b())));
    Ok((f, e.square().div(&n2)?))
}

/// Points of `l` at squared distance `r2` from `q`.
fn circle_line(q: &Point, r2: &ExactReal, l: &Line) -> Result<Vec<Point>, FoldError> {
    let (f, d2) = foot(q, l)?;
    let h2 = r2.sub(&d2);
    match h2.sign()? {
        Sign::Negative => Ok(Vec::new()),
        Sign::Zero => Ok(vec![f]),
        Sign::Positive => {
            let n2 = l.a().square().add(&l.b().square());
            let t = h2.div(&n2)?.sqrt()?;
            // direction along l is (-b, a)
            let dx = l.b().neg().mul(&t);
            let dy = l.a().mul(&t);
            Ok(vec![
                Point::new(f.x.sub(&dx), f.y.sub(&dy)),
                Point::new(f.x.add(&dx), f.y.add(&dy)),
            ])
        }
    }
}

/// Folds through `q` that reflect `p` onto `l`: the tangents from `q` to the
/// parabola with focus `p` and directrix `l`.
pub fn o5(p: &Point, l: &Line, q: &Point) -> Result<FoldResult, FoldError> {
    if l.contains(p)? {
        return Err(FoldError::DegenerateParabola);
    }
    let r2 = squared_distance(q, p);
    let mut lines = Vec::new();
    for image in circle_line(q, &r2, l)? {
        lines.push(geom::perp_bisector(p, &image)?);
    }
    FoldResult::from_lines(lines)
}

/// The same construction with `p` on `l`. Then `p` itself is an admissible
/// image, so the line through `p` and `q` is a solution, besides the fold
/// mapping `p` to the other point of `l` at distance `|qp|` from `q`.
pub fn o5_degenerate(p: &Point, l: &Line, q: &Point) -> Result<FoldResult, FoldError> {
    if !l.contains(p)? {
        return o5(p, l, q);
    }
    if p.eq_exact(q)? {
        return Ok(FoldResult { lines: Vec::new(), continuum: true, at_infinity: false });
    }
    let r2 = squared_distance(q, p);
    let mut lines = vec![geom::line_through(p, q)?];
    for image in circle_line(q, &r2, l)? {
        if !image.eq_exact(p)? {
            lines.push(geom::perp_bisector(p, &image)?);
        }
    }
    FoldResult::from_lines(lines)
}

/// Common tangents of the parabolas (focus `p`, directrix `l`) and (focus
/// `q`, directrix `m`): folds reflecting `p` onto `l` and `q` onto `m`.
///
/// A fold `y = μx + k` reflects `p` onto `l` iff
/// `E1 (μ² + 1) = 2 (μ px − py + k)(aμ − b)` with `E1 = l(p)`. Eliminating
/// `k` between the two conditions leaves a cubic in the slope μ. A vertical
/// fold is checked separately. The line at infinity is tangent to every
/// parabola, so it is always reported as a common solution.
pub fn o6(p: &Point, l: &Line, q: &Point, m: &Line) -> Result<FoldResult, FoldError> {
    if l.contains(p)? || m.contains(q)? {
        return Err(FoldError::DegenerateParabola);
    }
    if p.eq_exact(q)? && l.eq_exact(m)? {
        return Err(FoldError::IdenticalParabolas);
    }
    let e1 = l.eval(p);
    let e2 = m.eval(q);
    let u = Poly::linear(l.b().neg(), l.a().clone());
    let v = Poly::linear(m.b().neg(), m.a().clone());
    let w = Poly::linear(q.y.sub(&p.y).neg(), q.x.sub(&p.x));
    let s = Poly::from_ints(&[1, 0, 1]);
    let g = s
        .mul(&v)
        .scale(&e1)
        .sub(&s.mul(&u).scale(&e2))
        .add(&w.mul(&u).mul(&v).scale(&ExactReal::from_int(2)));

    let mut result = FoldResult { at_infinity: true, ..FoldResult::default() };
    let mut lines = Vec::new();
    if g.degree()?.is_none() {
        result.continuum = true;
    } else {
        for root in g.real_roots()? {
            let mu = &root.value;
            let um = u.eval(mu);
            if um.sign()? == Sign::Zero || v.eval(mu).sign()? == Sign::Zero {
                continue;
            }
            let s_mu = mu.square().add(&ExactReal::one());
            let k = e1.mul(&s_mu).div(&um.mul(&ExactReal::from_int(2)))?.sub(&mu.mul(&p.x)).add(&p.y);
            lines.push(Line::new(mu.clone(), ExactReal::from_int(-1), k)?);
        }
    }
    // vertical fold x = k: reflecting p gives (2k - px, py)
    if l.a().sign()? != Sign::Zero && m.a().sign()? != Sign::Zero {
        let half = rat(1, 2);
        let k1 = p.x.sub(&e1.div(l.a())?.scale(&half));
        let k2 = q.x.sub(&e2.div(m.a())?.scale(&half));
        if k1.eq_exact(&k2)? {
            lines.push(Line::vertical(k1));
        }
    }
    result.lines = sort_lines(lines)?;
    Ok(result)
}
