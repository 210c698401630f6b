//! Exact affine and projective primitives.

use std::cmp::Ordering;
use std::fmt;

use crate::exactnum::{ExactError, ExactReal, Sign};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum GeomError {
    #[error("points coincide")]
    CoincidentPoints,
    #[error("lines are parallel")]
    ParallelLines,
    #[error("lines coincide")]
    CoincidentLines,
    #[error("point lies at infinity")]
    PointAtInfinity,
    #[error("line equation has a = b = 0")]
    DegenerateLine,
    #[error("all homogeneous coordinates are zero")]
    ZeroVector,
    #[error(transparent)]
    Exact(#[from] ExactError),
}

pub type GeomResult<T> = Result<T, GeomError>;

fn r(n: i64) -> ExactReal {
    ExactReal::from_int(n)
}

#[derive(Clone, Debug)]
pub struct Point {
    pub x: ExactReal,
    pub y: ExactReal,
}

impl Point {
    pub fn new(x: ExactReal, y: ExactReal) -> Point {
        Point { x, y }
    }

    pub fn from_ints(x: i64, y: i64) -> Point {
        Point::new(r(x), r(y))
    }

    pub fn origin() -> Point {
        Point::from_ints(0, 0)
    }

    pub fn eq_exact(&self, other: &Point) -> GeomResult<bool> {
        Ok(self.x.eq_exact(&other.x)? && self.y.eq_exact(&other.y)?)
    }

    pub fn add(&self, other: &Point) -> Point {
        Point::new(self.x.add(&other.x), self.y.add(&other.y))
    }

    pub fn sub(&self, other: &Point) -> Point {
        Point::new(self.x.sub(&other.x), self.y.sub(&other.y))
    }

    pub fn scale(&self, k: &ExactReal) -> Point {
        Point::new(self.x.mul(k), self.y.mul(k))
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.x.to_f64(), self.y.to_f64())
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// The locus `a x + b y + c = 0`, normalized so the first nonzero of `(a, b)` is 1.
#[derive(Clone, Debug)]
pub struct Line {
    a: ExactReal,
    b: ExactReal,
    c: ExactReal,
}

impl Line {
    pub fn new(a: ExactReal, b: ExactReal, c: ExactReal) -> GeomResult<Line> {
        if a.sign()? != Sign::Zero {
            Ok(Line { b: b.div(&a)?, c: c.div(&a)?, a: r(1) })
        } else if b.sign()? != Sign::Zero {
            Ok(Line { a: r(0), c: c.div(&b)?, b: r(1) })
        } else {
            Err(GeomError::DegenerateLine)
        }
    }

    pub fn from_ints(a: i64, b: i64, c: i64) -> GeomResult<Line> {
        Line::new(r(a), r(b), r(c))
    }

    /// `y = c`
    pub fn horizontal(c: ExactReal) -> Line {
        Line { a: r(0), b: r(1), c: c.neg() }
    }

    /// `x = c`
    pub fn vertical(c: ExactReal) -> Line {
        Line { a: r(1), b: r(0), c: c.neg() }
    }

    pub fn a(&self) -> &ExactReal {
        &self.a
    }

    pub fn b(&self) -> &ExactReal {
        &self.b
    }

    pub fn c(&self) -> &ExactReal {
        &self.c
    }

    /// `a x + b y + c` at `p`.
    pub fn eval(&self, p: &Point) -> ExactReal {
        self.a.mul(&p.x).add(&self.b.mul(&p.y)).add(&self.c)
    }

    pub fn contains(&self, p: &Point) -> GeomResult<bool> {
        Ok(self.eval(p).sign()? == Sign::Zero)
    }

    pub fn is_vertical(&self) -> GeomResult<bool> {
        Ok(self.b.sign()? == Sign::Zero)
    }

    /// `-a/b`, or `None` for a vertical line.
    pub fn slope(&self) -> GeomResult<Option<ExactReal>> {
        if self.is_vertical()? {
            Ok(None)
        } else {
            Ok(Some(self.a.neg().div(&self.b)?))
        }
    }

    pub fn eq_exact(&self, other: &Line) -> GeomResult<bool> {
        Ok(self.a.eq_exact(&other.a)? && self.b.eq_exact(&other.b)? && self.c.eq_exact(&other.c)?)
    }

    pub fn is_parallel(&self, other: &Line) -> GeomResult<bool> {
        Ok(cross(&self.a, &self.b, &other.a, &other.b).sign()? == Sign::Zero)
    }

    /// Two distinct points on the line.
    pub fn two_points(&self) -> GeomResult<(Point, Point)> {
        if self.is_vertical()? {
            let x = self.c.neg();
            Ok((Point::new(x.clone(), r(0)), Point::new(x, r(1))))
        } else {
            let y0 = self.c.div(&self.b)?.neg();
            let y1 = self.a.add(&self.c).div(&self.b)?.neg();
            Ok((Point::new(r(0), y0), Point::new(r(1), y1)))
        }
    }

    /// Ordering used for fold results: slope ascending, vertical last, then intercept.
    pub fn cmp_slope(&self, other: &Line) -> GeomResult<Ordering> {
        match (self.slope()?, other.slope()?) {
            (None, None) => Ok(self.c.neg().cmp_exact(&other.c.neg())?),
            (None, Some(_)) => Ok(Ordering::Greater),
            (Some(_), None) => Ok(Ordering::Less),
            (Some(s), Some(t)) => match s.cmp_exact(&t)? {
                Ordering::Equal => Ok(self.c.neg().cmp_exact(&other.c.neg())?),
                o => Ok(o),
            },
        }
    }

    pub fn to_f64(&self) -> (f64, f64, f64) {
        (self.a.to_f64(), self.b.to_f64(), self.c.to_f64())
    }
}

impl fmt::Display for Line {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}, {}, {}>", self.a, self.b, self.c)
    }
}

fn cross(a1: &ExactReal, b1: &ExactReal, a2: &ExactReal, b2: &ExactReal) -> ExactReal {
    a1.mul(b2).sub(&a2.mul(b1))
}

pub fn squared_distance(p: &Point, q: &Point) -> ExactReal {
    let dx = p.x.sub(&q.x);
    let dy = p.y.sub(&q.y);
    dx.square().add(&dy.square())
}

pub fn midpoint(p: &Point, q: &Point) -> Point {
    let half = crate::exactnum::rat(1, 2);
    Point::new(p.x.add(&q.x).scale(&half), p.y.add(&q.y).scale(&half))
}

pub fn line_through(p: &Point, q: &Point) -> GeomResult<Line> {
    if p.eq_exact(q)? {
        return Err(GeomError::CoincidentPoints);
    }
    let a = p.y.sub(&q.y);
    let b = q.x.sub(&p.x);
    let c = p.x.mul(&q.y).sub(&q.x.mul(&p.y));
    Line::new(a, b, c)
}

pub fn intersect(l: &Line, m: &Line) -> GeomResult<Point> {
    let det = cross(&l.a, &l.b, &m.a, &m.b);
    if det.sign()? == Sign::Zero {
        return Err(if l.eq_exact(m)? { GeomError::CoincidentLines } else { GeomError::ParallelLines });
    }
    let x = l.b.mul(&m.c).sub(&m.b.mul(&l.c)).div(&det)?;
    let y = l.c.mul(&m.a).sub(&m.c.mul(&l.a)).div(&det)?;
    Ok(Point::new(x, y))
}

/// Points equidistant from `p` and `q`: `2(q - p)·X = |q|^2 - |p|^2`.
pub fn perp_bisector(p: &Point, q: &Point) -> GeomResult<Line> {
    if p.eq_exact(q)? {
        return Err(GeomError::CoincidentPoints);
    }
    let a = q.x.sub(&p.x);
    let b = q.y.sub(&p.y);
    let np = p.x.square().add(&p.y.square());
    let nq = q.x.square().add(&q.y.square());
    let c = np.sub(&nq).scale(&crate::exactnum::rat(1, 2));
    Line::new(a, b, c)
}

pub fn reflect_point(p: &Point, l: &Line) -> GeomResult<Point> {
    let n2 = l.a.square().add(&l.b.square());
    let d = l.eval(p).div(&n2)?;
    let k = d.mul(&r(2));
    Ok(Point::new(p.x.sub(&k.mul(&l.a)), p.y.sub(&k.mul(&l.b))))
}

/// Image of `l` under reflection across `f`.
pub fn reflect_line(l: &Line, f: &Line) -> GeomResult<Line> {
    let (p, q) = l.two_points()?;
    line_through(&reflect_point(&p, f)?, &reflect_point(&q, f)?)
}

pub fn perpendicular_through(p: &Point, l: &Line) -> GeomResult<Line> {
    let c = l.a.mul(&p.y).sub(&l.b.mul(&p.x));
    Line::new(l.b.clone(), l.a.neg(), c)
}

pub fn parallel_through(p: &Point, l: &Line) -> GeomResult<Line> {
    let c = l.a.mul(&p.x).add(&l.b.mul(&p.y)).neg();
    Line::new(l.a.clone(), l.b.clone(), c)
}

/// Homogeneous point `(x : y : z)`.
#[derive(Clone, Debug)]
pub struct ProjPoint {
    pub x: ExactReal,
    pub y: ExactReal,
    pub z: ExactReal,
}

impl ProjPoint {
    pub fn new(x: ExactReal, y: ExactReal, z: ExactReal) -> GeomResult<ProjPoint> {
        if x.sign()? == Sign::Zero && y.sign()? == Sign::Zero && z.sign()? == Sign::Zero {
            return Err(GeomError::ZeroVector);
        }
        Ok(ProjPoint { x, y, z })
    }

    pub fn coords(&self) -> [ExactReal; 3] {
        [self.x.clone(), self.y.clone(), self.z.clone()]
    }

    pub fn is_at_infinity(&self) -> GeomResult<bool> {
        Ok(self.z.sign()? == Sign::Zero)
    }

    /// Equality up to a nonzero scale (vanishing cross product).
    pub fn eq_projective(&self, other: &ProjPoint) -> GeomResult<bool> {
        let c1 = cross(&self.x, &self.y, &other.x, &other.y);
        let c2 = cross(&self.y, &self.z, &other.y, &other.z);
        let c3 = cross(&self.x, &self.z, &other.x, &other.z);
        Ok(c1.sign()? == Sign::Zero && c2.sign()? == Sign::Zero && c3.sign()? == Sign::Zero)
    }
}

pub fn embed(p: &Point) -> ProjPoint {
    ProjPoint { x: p.x.clone(), y: p.y.clone(), z: r(1) }
}

pub fn to_affine(p: &ProjPoint) -> GeomResult<Point> {
    if p.z.sign()? == Sign::Zero {
        return Err(GeomError::PointAtInfinity);
    }
    Ok(Point::new(p.x.div(&p.z)?, p.y.div(&p.z)?))
}

/// A projective line: an affine line or the line at infinity `z = 0`.
#[derive(Clone, Debug)]
pub enum ProjLine {
    Finite(Line),
    Infinity,
}

impl ProjLine {
    pub fn is_infinity(&self) -> bool {
        matches!(self, ProjLine::Infinity)
    }

    pub fn finite(&self) -> Option<&Line> {
        match self {
            ProjLine::Finite(l) => Some(l),
            ProjLine::Infinity => None,
        }
    }
}

/// The point `(a : b : c)` read as the line `a x + b y + c z = 0`.
pub fn dual_exchange(p: &ProjPoint) -> GeomResult<ProjLine> {
    if p.x.sign()? == Sign::Zero && p.y.sign()? == Sign::Zero {
        if p.z.sign()? == Sign::Zero {
            return Err(GeomError::ZeroVector);
        }
        return Ok(ProjLine::Infinity);
    }
    Ok(ProjLine::Finite(Line::new(p.x.clone(), p.y.clone(), p.z.clone())?))
}

/// The line `a x + b y + c z = 0` as the point `(a : b : c)`.
pub fn dual_point(l: &ProjLine) -> ProjPoint {
    match l {
        ProjLine::Finite(l) => ProjPoint { x: l.a.clone(), y: l.b.clone(), z: l.c.clone() },
        ProjLine::Infinity => ProjPoint { x: r(0), y: r(0), z: r(1) },
    }
}
