//! Projective conics as symmetric 3x3 matrices: duality, pencils, splitting
//! of degenerate members, and common points and tangents of two conics.

use std::cmp::Ordering;
use std::fmt;

use crate::exactnum::{rat, ExactError, ExactReal, Poly, Sign};
use crate::geom::{self, GeomError, Line, Point, ProjLine, ProjPoint};

pub type Mat3 = [[ExactReal; 3]; 3];

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ConicError {
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("matrix is zero")]
    ZeroMatrix,
    #[error("focus lies on the directrix")]
    DegenerateParabola,
    #[error("conic is degenerate")]
    DegenerateConic,
    #[error("pencil is degenerate (conics are proportional or det(A - tB) vanishes identically)")]
    DegeneratePencil,
    #[error("conic is not degenerate")]
    NotDegenerate,
    #[error("line factorization failed its re-expansion check")]
    FactorCheck,
    #[error(transparent)]
    Geom(GeomError),
    #[error(transparent)]
    Exact(ExactError),
}

impl From<GeomError> for ConicError {
    fn from(e: GeomError) -> Self {
        match e {
            GeomError::Exact(x) => ConicError::Exact(x),
            other => ConicError::Geom(other),
        }
    }
}

impl From<ExactError> for ConicError {
    fn from(e: ExactError) -> Self {
        ConicError::Exact(e)
    }
}

pub type ConicResult<T> = Result<T, ConicError>;

fn r(n: i64) -> ExactReal {
    ExactReal::from_int(n)
}

fn is_zero(x: &ExactReal) -> ConicResult<bool> {
    Ok(x.sign()? == Sign::Zero)
}

pub fn mat_from_fn(f: impl Fn(usize, usize) -> ExactReal) -> Mat3 {
    std::array::from_fn(|i| std::array::from_fn(|j| f(i, j)))
}

pub fn mat_from_ints(m: [[i64; 3]; 3]) -> Mat3 {
    mat_from_fn(|i, j| r(m[i][j]))
}

pub fn det(m: &Mat3) -> ExactReal {
    let minor = |a: usize, b: usize, c: usize, d: usize| m[1][a].mul(&m[2][b]).sub(&m[1][c].mul(&m[2][d]));
    m[0][0]
        .mul(&minor(1, 2, 2, 1))
        .sub(&m[0][1].mul(&minor(0, 2, 2, 0)))
        .add(&m[0][2].mul(&minor(0, 1, 1, 0)))
}

/// Classical adjoint (transposed cofactor matrix), so `M adj(M) = det(M) I`.
pub fn adjoint(m: &Mat3) -> Mat3 {
    mat_from_fn(|i, j| {
        // cofactor of entry (j, i)
        let rows: Vec<usize> = (0..3).filter(|&k| k != j).collect();
        let cols: Vec<usize> = (0..3).filter(|&k| k != i).collect();
        let d = m[rows[0]][cols[0]].mul(&m[rows[1]][cols[1]]).sub(&m[rows[0]][cols[1]].mul(&m[rows[1]][cols[0]]));
        if (i + j) % 2 == 0 {
            d
        } else {
            d.neg()
        }
    })
}

pub fn mat_mul(a: &Mat3, b: &Mat3) -> Mat3 {
    mat_from_fn(|i, j| (0..3).fold(ExactReal::zero(), |acc, k| acc.add(&a[i][k].mul(&b[k][j]))))
}

pub fn transpose(a: &Mat3) -> Mat3 {
    mat_from_fn(|i, j| a[j][i].clone())
}

pub fn mat_scale(a: &Mat3, k: &ExactReal) -> Mat3 {
    mat_from_fn(|i, j| a[i][j].mul(k))
}

pub fn mat_sub(a: &Mat3, b: &Mat3) -> Mat3 {
    mat_from_fn(|i, j| a[i][j].sub(&b[i][j]))
}

pub fn mat_is_zero(a: &Mat3) -> ConicResult<bool> {
    for row in a {
        for x in row {
            if !is_zero(x)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

pub fn mat_eq(a: &Mat3, b: &Mat3) -> ConicResult<bool> {
    for i in 0..3 {
        for j in 0..3 {
            if !a[i][j].eq_exact(&b[i][j])? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Whether `a = k b` for some nonzero `k`.
pub fn mat_proportional(a: &Mat3, b: &Mat3) -> ConicResult<bool> {
    let Some((pi, pj)) = first_nonzero(a)? else {
        return mat_is_zero(b);
    };
    if is_zero(&b[pi][pj])? {
        return Ok(false);
    }
    for i in 0..3 {
        for j in 0..3 {
            if !a[i][j].mul(&b[pi][pj]).eq_exact(&b[i][j].mul(&a[pi][pj]))? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn first_nonzero(a: &Mat3) -> ConicResult<Option<(usize, usize)>> {
    for i in 0..3 {
        for j in 0..3 {
            if !is_zero(&a[i][j])? {
                return Ok(Some((i, j)));
            }
        }
    }
    Ok(None)
}

fn quad_form(m: &Mat3, u: &[ExactReal; 3], v: &[ExactReal; 3]) -> ExactReal {
    let mut acc = ExactReal::zero();
    for i in 0..3 {
        for j in 0..3 {
            acc = acc.add(&u[i].mul(&m[i][j]).mul(&v[j]));
        }
    }
    acc
}

fn cross3(u: &[ExactReal; 3], v: &[ExactReal; 3]) -> [ExactReal; 3] {
    [
        u[1].mul(&v[2]).sub(&u[2].mul(&v[1])),
        u[2].mul(&v[0]).sub(&u[0].mul(&v[2])),
        u[0].mul(&v[1]).sub(&u[1].mul(&v[0])),
    ]
}

fn line_coords(l: &ProjLine) -> [ExactReal; 3] {
    geom::dual_point(l).coords()
}

fn line_from_coords(v: &[ExactReal; 3]) -> ConicResult<ProjLine> {
    Ok(geom::dual_exchange(&ProjPoint::new(v[0].clone(), v[1].clone(), v[2].clone())?)?)
}

/// Representative with `z = 1` for affine points, first nonzero coordinate 1 otherwise.
fn normalize_point(v: &[ExactReal; 3]) -> ConicResult<ProjPoint> {
    for k in [2, 0, 1] {
        if !is_zero(&v[k])? {
            let s = &v[k];
            let c = |i: usize| if i == k { Ok(r(1)) } else { v[i].div(s) };
            return Ok(ProjPoint::new(c(0)?, c(1)?, c(2)?)?);
        }
    }
    Err(GeomError::ZeroVector.into())
}

/// A projective conic `X^T M X = 0`, stored with the first nonzero entry
/// (row-major) scaled to 1.
#[derive(Clone, Debug)]
pub struct Conic {
    m: Mat3,
}

impl Conic {
    pub fn new(m: Mat3) -> ConicResult<Conic> {
        for i in 0..3 {
            for j in i + 1..3 {
                if !m[i][j].eq_exact(&m[j][i])? {
                    return Err(ConicError::NotSymmetric);
                }
            }
        }
        let (pi, pj) = first_nonzero(&m)?.ok_or(ConicError::ZeroMatrix)?;
        let pivot = m[pi][pj].clone();
        let m = if pivot.as_rational().is_some_and(|q| *q == rat(1, 1)) {
            m
        } else {
            let inv = pivot.recip()?;
            mat_from_fn(|i, j| if (i, j) == (pi, pj) { r(1) } else { m[i][j].mul(&inv) })
        };
        Ok(Conic { m })
    }

    /// `a x^2 + b x y + c y^2 + d x + e y + f = 0`.
    pub fn from_coeffs(c: [ExactReal; 6]) -> ConicResult<Conic> {
        let h = |x: &ExactReal| x.scale(&rat(1, 2));
        let [a, b, cc, d, e, f] = c;
        Conic::new([
            [a, h(&b), h(&d)],
            [h(&b), cc, h(&e)],
            [h(&d), h(&e), f],
        ])
    }

    pub fn from_int_coeffs(c: [i64; 6]) -> ConicResult<Conic> {
        Conic::from_coeffs(c.map(r))
    }

    pub fn matrix(&self) -> &Mat3 {
        &self.m
    }

    /// Coefficients `[a, b, c, d, e, f]` of the affine equation.
    pub fn coeffs(&self) -> [ExactReal; 6] {
        let m = &self.m;
        let two = |x: &ExactReal| x.mul(&r(2));
        [m[0][0].clone(), two(&m[0][1]), m[1][1].clone(), two(&m[0][2]), two(&m[1][2]), m[2][2].clone()]
    }

    pub fn eval(&self, p: &ProjPoint) -> ExactReal {
        let v = p.coords();
        quad_form(&self.m, &v, &v)
    }

    pub fn eval_affine(&self, p: &Point) -> ExactReal {
        self.eval(&geom::embed(p))
    }

    pub fn contains(&self, p: &ProjPoint) -> ConicResult<bool> {
        is_zero(&self.eval(p))
    }

    pub fn det(&self) -> ExactReal {
        det(&self.m)
    }

    pub fn is_degenerate(&self) -> ConicResult<bool> {
        is_zero(&self.det())
    }

    /// Equality up to scale.
    pub fn eq_conic(&self, other: &Conic) -> ConicResult<bool> {
        mat_eq(&self.m, &other.m)
    }

    /// Whether a line is tangent to this non-degenerate conic: `l^T adj(M) l = 0`.
    pub fn is_tangent(&self, l: &ProjLine) -> ConicResult<bool> {
        let v = line_coords(l);
        is_zero(&quad_form(&adjoint(&self.m), &v, &v))
    }

    /// Non-degenerate and tangent to the line at infinity.
    pub fn is_parabola(&self) -> ConicResult<bool> {
        Ok(!self.is_degenerate()? && self.is_tangent(&ProjLine::Infinity)?)
    }

    /// The same conic in coordinates `X' = S X`: matrix `S^-T M S^-1`.
    pub fn transform(&self, s: &Mat3) -> ConicResult<Conic> {
        let d = det(s);
        if is_zero(&d)? {
            return Err(ConicError::DegenerateConic);
        }
        let inv = mat_scale(&adjoint(s), &d.recip()?);
        Conic::new(mat_mul(&transpose(&inv), &mat_mul(&self.m, &inv)))
    }

    pub fn to_f64_coeffs(&self) -> [f64; 6] {
        self.coeffs().map(|c| c.to_f64())
    }
}

impl Conic {
    /// The equation in the variables `u` and `v`, e.g. `u^2 - 2*v = 0`.
    pub fn equation_in(&self, u: &str, v: &str) -> String {
        let monomials = [format!("{u}^2"), format!("{u}*{v}"), format!("{v}^2"), u.to_string(), v.to_string(), String::new()];
        let mut out = String::new();
        for (c, mono) in self.coeffs().iter().zip(monomials.iter().map(String::as_str)) {
            let negative = c.sign().map(|s| s == Sign::Negative).unwrap_or(false);
            if c.sign().map(|s| s == Sign::Zero).unwrap_or(false) {
                continue;
            }
            let mag = if negative { c.neg() } else { c.clone() };
            let mut coeff = mag.expr_string();
            if mag.as_rational().is_none() {
                coeff = format!("({coeff})");
            }
            let term = match (mono, coeff.as_str()) {
                ("", _) => coeff.clone(),
                (m, "1") => m.to_string(),
                (m, c) => format!("{c}*{m}"),
            };
            match (out.is_empty(), negative) {
                (true, true) => out.push_str(&format!("-{term}")),
                (true, false) => out.push_str(&term),
                (false, true) => out.push_str(&format!(" - {term}")),
                (false, false) => out.push_str(&format!(" + {term}")),
            }
        }
        format!("{out} = 0")
    }
}

impl fmt::Display for Conic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.equation_in("x", "y"))
    }
}

/// The parabola of points equidistant from `focus` and `directrix`.
pub fn conic_from_parabola(focus: &Point, directrix: &Line) -> ConicResult<Conic> {
    if directrix.contains(focus)? {
        return Err(ConicError::DegenerateParabola);
    }
    let (a, b, c) = (directrix.a(), directrix.b(), directrix.c());
    let n = a.square().add(&b.square());
    let two = r(2);
    Conic::from_coeffs([
        n.sub(&a.square()),
        two.mul(a).mul(b).neg(),
        n.sub(&b.square()),
        two.mul(&n).mul(&focus.x).add(&two.mul(a).mul(c)).neg(),
        two.mul(&n).mul(&focus.y).add(&two.mul(b).mul(c)).neg(),
        n.mul(&focus.x.square().add(&focus.y.square())).sub(&c.square()),
    ])
}

/// The line conic of tangents, given by the adjoint matrix.
pub fn dual(c: &Conic) -> ConicResult<Conic> {
    if c.is_degenerate()? {
        return Err(ConicError::DegenerateConic);
    }
    Conic::new(adjoint(c.matrix()))
}

/// The family `A - t B` of two non-proportional conics.
#[derive(Clone, Debug)]
pub struct Pencil {
    a: Conic,
    b: Conic,
}

impl Pencil {
    pub fn new(a: Conic, b: Conic) -> ConicResult<Pencil> {
        if a.eq_conic(&b)? {
            return Err(ConicError::DegeneratePencil);
        }
        Ok(Pencil { a, b })
    }

    pub fn a(&self) -> &Conic {
        &self.a
    }

    pub fn b(&self) -> &Conic {
        &self.b
    }

    pub fn member(&self, t: &ExactReal) -> Mat3 {
        mat_sub(self.a.matrix(), &mat_scale(self.b.matrix(), t))
    }

    /// `det(A - t B)` as a polynomial in `t`, using
    /// `det(A + s B) = det A + s tr(adj(A) B) + s^2 tr(A adj(B)) + s^3 det B`.
    pub fn det_poly(&self) -> Poly {
        let (a, b) = (self.a.matrix(), self.b.matrix());
        let trace = |x: &Mat3| x[0][0].add(&x[1][1]).add(&x[2][2]);
        let c1 = trace(&mat_mul(&adjoint(a), b));
        let c2 = trace(&mat_mul(a, &adjoint(b)));
        Poly::new(vec![det(a), c1.neg(), c2, det(b).neg()])
    }
}

/// Real parameters `t` with `det(A - t B) = 0`, ascending.
pub fn degenerate_params(pen: &Pencil) -> ConicResult<Vec<ExactReal>> {
    let poly = pen.det_poly();
    if poly.degree()?.is_none() {
        return Err(ConicError::DegeneratePencil);
    }
    Ok(poly.real_roots()?.into_iter().map(|root| root.value).collect())
}

/// Order in which degenerate members are tried: smallest `|t|` first, ties to the negative one.
pub fn selection_order(mut params: Vec<ExactReal>) -> ConicResult<Vec<ExactReal>> {
    let mut err = None;
    params.sort_by(|x, y| {
        let key = |v: &ExactReal| v.abs();
        match (key(x), key(y)) {
            (Ok(ax), Ok(ay)) => match ax.cmp_exact(&ay) {
                Ok(Ordering::Equal) => x.cmp_exact(y).unwrap_or(Ordering::Equal),
                Ok(o) => o,
                Err(e) => {
                    err = Some(e);
                    Ordering::Equal
                }
            },
            (Err(e), _) | (_, Err(e)) => {
                err = Some(e);
                Ordering::Equal
            }
        }
    });
    match err {
        Some(e) => Err(e.into()),
        None => Ok(params),
    }
}

#[derive(Clone, Debug)]
pub enum Split {
    TwoLines(ProjLine, ProjLine),
    DoubleLine(ProjLine),
    NoRealLines,
}

/// `l m^T + m l^T`.
pub fn expand_lines(l: &ProjLine, m: &ProjLine) -> Mat3 {
    let (u, v) = (line_coords(l), line_coords(m));
    mat_from_fn(|i, j| u[i].mul(&v[j]).add(&v[i].mul(&u[j])))
}

/// Factor a degenerate symmetric matrix into its lines.
///
/// For rank 2, `M = g h^T + h g^T` has `adj(M) = -p p^T` with `p = g x h`
/// the meeting point; the lines are real exactly when the diagonal of the
/// adjoint is nonpositive. Adding the cross-product matrix of `p` to `M`
/// leaves the rank-one matrix `2 g h^T` (or `2 h g^T`), whose nonzero row
/// and column are the two lines.
pub fn split_matrix(m: &Mat3) -> ConicResult<Split> {
    if !is_zero(&det(m))? {
        return Err(ConicError::NotDegenerate);
    }
    if mat_is_zero(m)? {
        return Err(ConicError::ZeroMatrix);
    }
    let adj = adjoint(m);
    let split = if mat_is_zero(&adj)? {
        // rank one: M = +-l l^T, any nonzero row is proportional to l
        let (i, _) = first_nonzero(m)?.expect("nonzero matrix");
        Split::DoubleLine(line_from_coords(&m[i])?)
    } else {
        let mut pivot = None;
        for i in 0..3 {
            let s = adj[i][i].sign()?;
            if s == Sign::Positive {
                return Ok(Split::NoRealLines);
            }
            if s == Sign::Negative && pivot.is_none() {
                pivot = Some(i);
            }
        }
        let i = pivot.ok_or(ConicError::FactorCheck)?;
        let beta = adj[i][i].neg().sqrt()?;
        let p: [ExactReal; 3] = std::array::from_fn(|k| adj[k][i].div(&beta)).map(|x| x.expect("beta > 0"));
        let px = [
            [ExactReal::zero(), p[2].neg(), p[1].clone()],
            [p[2].clone(), ExactReal::zero(), p[0].neg()],
            [p[1].neg(), p[0].clone(), ExactReal::zero()],
        ];
        let c = mat_from_fn(|a, b| m[a][b].add(&px[a][b]));
        let (j, k) = first_nonzero(&c)?.ok_or(ConicError::FactorCheck)?;
        let row = c[j].clone();
        let col = [c[0][k].clone(), c[1][k].clone(), c[2][k].clone()];
        Split::TwoLines(line_from_coords(&row)?, line_from_coords(&col)?)
    };
    let check = match &split {
        Split::TwoLines(l, n) => expand_lines(l, n),
        Split::DoubleLine(l) => expand_lines(l, l),
        Split::NoRealLines => unreachable!(),
    };
    if !mat_proportional(m, &check)? {
        return Err(ConicError::FactorCheck);
    }
    Ok(split)
}

pub fn split_degenerate(c: &Conic) -> ConicResult<Split> {
    split_matrix(c.matrix())
}

/// Real intersection points of a projective line with the conic `X^T M X = 0`.
pub fn line_conic_points(l: &ProjLine, m: &Mat3) -> ConicResult<Vec<ProjPoint>> {
    let lv = line_coords(l);
    let basis = [
        [r(1), r(0), r(0)],
        [r(0), r(1), r(0)],
        [r(0), r(0), r(1)],
    ];
    let mut span: Vec<[ExactReal; 3]> = Vec::new();
    for e in &basis {
        let p = cross3(&lv, e);
        if p.iter().all(|x| is_zero(x).unwrap_or(false)) {
            continue;
        }
        if let Some(q) = span.first() {
            if cross3(q, &p).iter().all(|x| is_zero(x).unwrap_or(false)) {
                continue;
            }
        }
        span.push(p);
        if span.len() == 2 {
            break;
        }
    }
    let (p0, p1) = (&span[0], &span[1]);
    let q00 = quad_form(m, p0, p0);
    let q01 = quad_form(m, p0, p1);
    let q11 = quad_form(m, p1, p1);
    let combo = |s: &ExactReal, t: &ExactReal| -> [ExactReal; 3] {
        std::array::from_fn(|k| s.mul(&p0[k]).add(&t.mul(&p1[k])))
    };
    let mut out = Vec::new();
    if is_zero(&q11)? {
        if is_zero(&q00)? && is_zero(&q01)? {
            // the line lies on the conic; only possible for degenerate conics
            return Ok(out);
        }
        out.push(normalize_point(p1)?);
        if !is_zero(&q01)? {
            out.push(normalize_point(&combo(&q01.mul(&r(2)), &q00.neg()))?);
        }
        return Ok(out);
    }
    // s = 1: q11 t^2 + 2 q01 t + q00 = 0
    let disc = q01.square().sub(&q00.mul(&q11));
    match disc.sign()? {
        Sign::Negative => {}
        Sign::Zero => {
            let t = q01.neg().div(&q11)?;
            out.push(normalize_point(&combo(&r(1), &t))?);
        }
        Sign::Positive => {
            let sq = disc.sqrt()?;
            for s in [sq.neg(), sq] {
                let t = q01.neg().add(&s).div(&q11)?;
                out.push(normalize_point(&combo(&r(1), &t))?);
            }
        }
    }
    Ok(out)
}

fn push_unique(list: &mut Vec<ProjPoint>, p: ProjPoint) -> ConicResult<()> {
    for q in list.iter() {
        if q.eq_projective(&p)? {
            return Ok(());
        }
    }
    list.push(p);
    Ok(())
}

fn cmp_points(p: &ProjPoint, q: &ProjPoint) -> ConicResult<Ordering> {
    let (pi, qi) = (p.is_at_infinity()?, q.is_at_infinity()?);
    if pi != qi {
        return Ok(if pi { Ordering::Greater } else { Ordering::Less });
    }
    Ok(match p.x.cmp_exact(&q.x)? {
        Ordering::Equal => p.y.cmp_exact(&q.y)?,
        o => o,
    })
}

fn sort_points(points: &mut [ProjPoint]) -> ConicResult<()> {
    let mut err = None;
    points.sort_by(|p, q| {
        cmp_points(p, q).unwrap_or_else(|e| {
            err.get_or_insert(e);
            Ordering::Equal
        })
    });
    err.map_or(Ok(()), Err)
}

/// Real common points of two distinct non-degenerate conics: split a real
/// degenerate member of their pencil into lines and cut them with `B`.
/// Affine points come first (by `x`, then `y`), then points at infinity.
pub fn common_points(a: &Conic, b: &Conic) -> ConicResult<Vec<ProjPoint>> {
    if a.is_degenerate()? || b.is_degenerate()? {
        return Err(ConicError::DegenerateConic);
    }
    let pen = Pencil::new(a.clone(), b.clone())?;
    let params = selection_order(degenerate_params(&pen)?)?;
    let mut out = Vec::new();
    let mut vertex = None;
    for t in &params {
        let d = pen.member(t);
        let lines = match split_matrix(&d)? {
            Split::TwoLines(l, m) => vec![l, m],
            Split::DoubleLine(l) => vec![l],
            Split::NoRealLines => {
                // the real locus of this member is the single point ker(D)
                if vertex.is_none() {
                    let adj = adjoint(&d);
                    let i = (0..3).find(|&i| !is_zero(&adj[i][i]).unwrap_or(true)).unwrap_or(0);
                    let col = [adj[0][i].clone(), adj[1][i].clone(), adj[2][i].clone()];
                    vertex = Some(normalize_point(&col)?);
                }
                continue;
            }
        };
        for l in &lines {
            for p in line_conic_points(l, b.matrix())? {
                push_unique(&mut out, p)?;
            }
        }
        sort_points(&mut out)?;
        return Ok(out);
    }
    if let Some(p) = vertex {
        if a.contains(&p)? && b.contains(&p)? {
            out.push(p);
        }
    }
    Ok(out)
}

/// Real common tangents, as the duals of the common points of the dual
/// conics. Affine lines are sorted by slope (vertical last); the line at
/// infinity comes last.
pub fn common_tangents(a: &Conic, b: &Conic) -> ConicResult<Vec<ProjLine>> {
    let points = common_points(&dual(a)?, &dual(b)?)?;
    let mut lines = Vec::with_capacity(points.len());
    for p in &points {
        lines.push(geom::dual_exchange(p)?);
    }
    let mut err = None;
    lines.sort_by(|l, m| match (l, m) {
        (ProjLine::Infinity, ProjLine::Infinity) => Ordering::Equal,
        (ProjLine::Infinity, _) => Ordering::Greater,
        (_, ProjLine::Infinity) => Ordering::Less,
        (ProjLine::Finite(l), ProjLine::Finite(m)) => l.cmp_slope(m).unwrap_or_else(|e| {
            err.get_or_insert(e);
            Ordering::Equal
        }),
    });
    match err {
        Some(e) => Err(e.into()),
        None => Ok(lines),
    }
}

/// A coordinate change `S` (rows: two unit vectors and `l`) under which `l`
/// becomes `z = 0`. For `y = 0` this is the swap of `y` and `z`.
pub fn line_to_infinity(l: &ProjLine) -> ConicResult<Mat3> {
    let v = line_coords(l);
    let unit = |k: usize| -> [ExactReal; 3] { std::array::from_fn(|i| r((i == k) as i64)) };
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        let s = [unit(i), unit(j), v.clone()];
        if !is_zero(&det(&s))? {
            return Ok(s);
        }
    }
    Err(GeomError::ZeroVector.into())
}
