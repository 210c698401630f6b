//! A construction session: level-gated fold operations recorded into a trace,
//! and the derived constructions built from them.

use crate::exactnum::{parse_literal, ExactReal, Sign};
use crate::geom::{self, GeomError, Line, Point};

use super::axioms::{self, FoldResult};
use super::trace::{Object, ObjId, Step, Trace};
use super::{Axiom, FoldError, Level};

type Result<T> = std::result::Result<T, FoldError>;

/// Result of a multi-solution fold together with the ids of its lines.
#[derive(Clone, Debug)]
pub struct FoldOutcome {
    pub result: FoldResult,
    pub ids: Vec<ObjId>,
}

#[derive(Clone, Debug)]
pub struct Construction {
    level: Level,
    trace: Trace,
}

fn cross(u: &Point, v: &Point) -> ExactReal {
    u.x.mul(&v.y).sub(&u.y.mul(&v.x))
}

fn dot(u: &Point, v: &Point) -> ExactReal {
    u.x.mul(&v.x).add(&u.y.mul(&v.y))
}

impl Construction {
    pub fn new(level: Level) -> Construction {
        Construction { level, trace: Trace::default() }
    }

    pub fn level(&self) -> Level {
        self.level
    }

    pub fn trace(&self) -> &Trace {
        &self.trace
    }

    pub fn into_trace(self) -> Trace {
        self.trace
    }

    pub fn set_label(&mut self, id: ObjId, label: &str) {
        self.trace.set_label(id, label);
    }

    pub fn object(&self, id: ObjId) -> Result<&Object> {
        self.trace.object(id).ok_or(FoldError::UnknownObject(id))
    }

    pub fn point(&self, id: ObjId) -> Result<Point> {
        match self.object(id)? {
            Object::Point(p) => Ok(p.clone()),
            _ => Err(FoldError::WrongKind { id, expected: "point" }),
        }
    }

    pub fn line(&self, id: ObjId) -> Result<Line> {
        match self.object(id)? {
            Object::Line(l) => Ok(l.clone()),
            _ => Err(FoldError::WrongKind { id, expected: "line" }),
        }
    }

    pub fn allows(&self, axiom: Axiom) -> bool {
        self.level.allows(axiom)
    }

    fn require(&self, axiom: Axiom) -> Result<()> {
        if self.allows(axiom) {
            Ok(())
        } else {
            Err(FoldError::AxiomNotAvailable { axiom, level: self.level })
        }
    }

    fn record(&mut self, op: &str, args: &[ObjId], params: Vec<String>, outs: Vec<Object>) -> Vec<ObjId> {
        let ids: Vec<ObjId> = outs.into_iter().map(|o| self.trace.push_object(o)).collect();
        self.trace.push_step(Step { op: op.to_string(), args: args.to_vec(), out: ids.clone(), params });
        ids
    }

    fn record_one(&mut self, op: &str, args: &[ObjId], obj: Object) -> ObjId {
        self.record(op, args, Vec::new(), vec![obj])[0]
    }

    fn record_fold(&mut self, op: &str, args: &[ObjId], result: FoldResult) -> FoldOutcome {
        let mut params = Vec::new();
        if result.continuum {
            params.push("continuum".to_string());
        }
        if result.at_infinity {
            params.push("at_infinity".to_string());
        }
        let outs = result.lines.iter().cloned().map(Object::Line).collect();
        let ids = self.record(op, args, params, outs);
        FoldOutcome { result, ids }
    }

    /// A given point (axiom 0 data).
    pub fn add_point(&mut self, p: Point) -> ObjId {
        let params = vec![p.x.expr_string(), p.y.expr_string()];
        self.record("point", &[], params, vec![Object::Point(p)])[0]
    }

    /// A given line.
    pub fn add_line(&mut self, l: Line) -> ObjId {
        let params = vec![l.a().expr_string(), l.b().expr_string(), l.c().expr_string()];
        self.record("line", &[], params, vec![Object::Line(l)])[0]
    }

    pub fn o1(&mut self, p: ObjId, q: ObjId) -> Result<ObjId> {
        self.require(Axiom::O1)?;
        let l = axioms::o1(&self.point(p)?, &self.point(q)?)?;
        Ok(self.record_one("O1", &[p, q], Object::Line(l)))
    }

    pub fn o2(&mut self, l: ObjId, m: ObjId) -> Result<ObjId> {
        self.require(Axiom::O2)?;
        let x = axioms::o2(&self.line(l)?, &self.line(m)?)?;
        Ok(self.record_one("O2", &[l, m], Object::Point(x)))
    }

    pub fn o3(&mut self, p: ObjId, q: ObjId) -> Result<ObjId> {
        self.require(Axiom::O3)?;
        let l = axioms::o3(&self.point(p)?, &self.point(q)?)?;
        Ok(self.record_one("O3", &[p, q], Object::Line(l)))
    }

    pub fn o4(&mut self, l: ObjId, m: ObjId) -> Result<FoldOutcome> {
        self.require(Axiom::O4)?;
        let r = axioms::o4(&self.line(l)?, &self.line(m)?)?;
        Ok(self.record_fold("O4", &[l, m], r))
    }

    /// Folds through `q` reflecting `p` onto `l`.
    pub fn o5(&mut self, p: ObjId, l: ObjId, q: ObjId) -> Result<FoldOutcome> {
        self.require(Axiom::O5)?;
        let r = axioms::o5(&self.point(p)?, &self.line(l)?, &self.point(q)?)?;
        Ok(self.record_fold("O5", &[p, l, q], r))
    }

    /// Axiom 5 allowing `p` on `l`.
    pub fn o5_degenerate(&mut self, p: ObjId, l: ObjId, q: ObjId) -> Result<FoldOutcome> {
        self.require(Axiom::O5)?;
        let r = axioms::o5_degenerate(&self.point(p)?, &self.line(l)?, &self.point(q)?)?;
        Ok(self.record_fold("O5d", &[p, l, q], r))
    }

    /// Folds reflecting `p` onto `l` and `q` onto `m`.
    pub fn o6(&mut self, p: ObjId, l: ObjId, q: ObjId, m: ObjId) -> Result<FoldOutcome> {
        self.require(Axiom::O6)?;
        let r = axioms::o6(&self.point(p)?, &self.line(l)?, &self.point(q)?, &self.line(m)?)?;
        Ok(self.record_fold("O6", &[p, l, q, m], r))
    }

    pub fn reflect(&mut self, p: ObjId, l: ObjId) -> Result<ObjId> {
        let x = geom::reflect_point(&self.point(p)?, &self.line(l)?)?;
        Ok(self.record_one("reflect", &[p, l], Object::Point(x)))
    }

    pub fn mid(&mut self, p: ObjId, q: ObjId) -> Result<ObjId> {
        let x = geom::midpoint(&self.point(p)?, &self.point(q)?);
        Ok(self.record_one("mid", &[p, q], Object::Point(x)))
    }

    pub fn perpendicular(&mut self, p: ObjId, l: ObjId) -> Result<ObjId> {
        let x = geom::perpendicular_through(&self.point(p)?, &self.line(l)?)?;
        Ok(self.record_one("perp", &[p, l], Object::Line(x)))
    }

    pub fn parallel(&mut self, p: ObjId, l: ObjId) -> Result<ObjId> {
        let x = geom::parallel_through(&self.point(p)?, &self.line(l)?)?;
        Ok(self.record_one("parallel", &[p, l], Object::Line(x)))
    }

    /// One of two canonical points on a line (`index` 0 or 1).
    pub fn pick(&mut self, l: ObjId, index: usize) -> Result<ObjId> {
        let (a, b) = self.line(l)?.two_points()?;
        let x = if index == 0 { a } else { b };
        Ok(self.record("pick", &[l], vec![index.to_string()], vec![Object::Point(x)])[0])
    }

    /// The line through two points: axiom 1 when available, otherwise its
    /// derivation from axioms 3 and 5.
    fn join(&mut self, p: ObjId, q: ObjId) -> Result<ObjId> {
        if self.allows(Axiom::O1) {
            self.o1(p, q)
        } else {
            self.derive_o1(p, q)
        }
    }

    fn bisect(&mut self, l: ObjId, m: ObjId) -> Result<FoldOutcome> {
        if self.allows(Axiom::O4) {
            self.o4(l, m)
        } else if self.allows(Axiom::O5) {
            self.derive_o4(l, m)
        } else {
            Err(FoldError::AxiomNotAvailable { axiom: Axiom::O4, level: self.level })
        }
    }

    /// Midpoint as the meet of the segment's line and its perpendicular bisector.
    fn fold_midpoint(&mut self, p: ObjId, q: ObjId) -> Result<ObjId> {
        let l = self.join(p, q)?;
        let b = self.o3(p, q)?;
        self.o2(l, b)
    }

    fn same_point(&self, p: ObjId, q: ObjId) -> Result<bool> {
        Ok(p == q || self.point(p)?.eq_exact(&self.point(q)?)?)
    }

    /// First constructed point off `l`, in id order.
    fn auxiliary_point(&self, l: &Line) -> Result<ObjId> {
        for (id, obj) in self.trace.objects().iter().enumerate() {
            if let Object::Point(p) = obj {
                if !l.contains(p)? {
                    return Ok(id);
                }
            }
        }
        Err(FoldError::NoAuxiliaryPoint)
    }

    /// `p + (b - a)/2` for `p` off the line `ab`: with midpoints `m_ab`,
    /// `m_pb`, `m_pa` of the triangle and `d` the midpoint of `p m_pb`, the
    /// lines `m_ab m_pb` and `m_pa d` meet there.
    fn half_translate(&mut self, p: ObjId, a: ObjId, b: ObjId) -> Result<ObjId> {
        let m_ab = self.fold_midpoint(a, b)?;
        let m_pb = self.fold_midpoint(p, b)?;
        let m_pa = self.fold_midpoint(p, a)?;
        let d = self.fold_midpoint(p, m_pb)?;
        let l1 = self.join(m_ab, m_pb)?;
        let l2 = self.join(m_pa, d)?;
        self.o2(l1, l2)
    }

    fn translate_off_line(&mut self, p: ObjId, a: ObjId, b: ObjId) -> Result<ObjId> {
        let d = self.half_translate(p, a, b)?;
        let d2 = self.half_translate(b, a, p)?;
        let pd = self.join(p, d)?;
        let bd2 = self.join(b, d2)?;
        self.o2(pd, bd2)
    }

    /// The point `p + (b - a)`, built from axioms 1-3 only. When `p` lies on
    /// the line `ab` the segment is first moved to an auxiliary point off it.
    pub fn translate(&mut self, p: ObjId, a: ObjId, b: ObjId) -> Result<ObjId> {
        if self.same_point(a, b)? {
            return Ok(p);
        }
        if self.same_point(p, a)? {
            return Ok(b);
        }
        let ab = geom::line_through(&self.point(a)?, &self.point(b)?)?;
        if !ab.contains(&self.point(p)?)? {
            return self.translate_off_line(p, a, b);
        }
        let q = self.auxiliary_point(&ab)?;
        let q2 = self.translate_off_line(q, a, b)?;
        self.translate_off_line(p, q, q2)
    }

    /// For collinear `a, b, c` with `b - a = k (c - a)`, the point
    /// `a + k (p - a)`: the parallel to `cp` through `b` meets the line `ap` there.
    pub fn scale(&mut self, a: ObjId, b: ObjId, c: ObjId, p: ObjId) -> Result<ObjId> {
        let (pa, pb, pc, pp) = (self.point(a)?, self.point(b)?, self.point(c)?, self.point(p)?);
        if pa.eq_exact(&pc)? {
            return Err(FoldError::DegenerateRatio);
        }
        if cross(&pb.sub(&pa), &pc.sub(&pa)).sign()? != Sign::Zero {
            return Err(FoldError::NotCollinear);
        }
        if pp.eq_exact(&pa)? {
            return Ok(a);
        }
        if pb.eq_exact(&pc)? {
            return Ok(p);
        }
        let ac = geom::line_through(&pa, &pc)?;
        if !ac.contains(&pp)? {
            let b2 = self.translate(b, c, p)?;
            let l1 = self.join(a, p)?;
            let l2 = self.join(b, b2)?;
            return self.o2(l1, l2);
        }
        let q = self.auxiliary_point(&ac)?;
        let e = self.scale(a, b, c, q)?;
        self.scale(a, e, q, p)
    }

    /// The point on the ray from `o` through `r` at distance `|ab|` from `o`:
    /// move `ab` to start at `o`, bisect the angle to the ray, reflect.
    pub fn mark_length(&mut self, a: ObjId, b: ObjId, o: ObjId, r: ObjId) -> Result<ObjId> {
        if !self.allows(Axiom::O4) && !self.allows(Axiom::O5) {
            return Err(FoldError::AxiomNotAvailable { axiom: Axiom::O4, level: self.level });
        }
        if self.same_point(a, b)? || self.same_point(o, r)? {
            return Err(GeomError::CoincidentPoints.into());
        }
        let d = self.translate(o, a, b)?;
        let po = self.point(o)?;
        let ray = self.point(r)?.sub(&po);
        let dv = self.point(d)?.sub(&po);
        if cross(&dv, &ray).sign()? == Sign::Zero {
            if dot(&dv, &ray).sign()? == Sign::Positive {
                return Ok(d);
            }
            return self.translate(o, d, o);
        }
        let od = self.join(o, d)?;
        let or = self.join(o, r)?;
        let bis = self.bisect(od, or)?;
        let pd = self.point(d)?;
        for (line, id) in bis.result.lines.iter().zip(&bis.ids) {
            let image = geom::reflect_point(&pd, line)?;
            if dot(&image.sub(&po), &ray).sign()? == Sign::Positive {
                return self.reflect(d, *id);
            }
        }
        Err(FoldError::NoSolution("no bisector maps the segment onto the ray".into()))
    }

    /// The line through `p` and `q` from axioms 3 and 5: fold `l` = O3(p, q),
    /// a fold `m` through `q` sending `p` onto `l`, then the fold through `p`
    /// sending `q` onto `m`, which (as `q` is on `m`) includes the line `pq`.
    pub fn derive_o1(&mut self, p: ObjId, q: ObjId) -> Result<ObjId> {
        self.require(Axiom::O3)?;
        self.require(Axiom::O5)?;
        if self.same_point(p, q)? {
            return Err(GeomError::CoincidentPoints.into());
        }
        let l = self.o3(p, q)?;
        let m = self.o5(p, l, q)?;
        let m0 = *m.ids.first().ok_or_else(|| FoldError::NoSolution("axiom 5 step".into()))?;
        let n = self.o5_degenerate(q, m0, p)?;
        let pq = self.point(q)?;
        for (line, id) in n.result.lines.iter().zip(&n.ids) {
            if line.contains(&pq)? {
                return Ok(*id);
            }
        }
        Err(FoldError::NoSolution("no fold through both points".into()))
    }

    /// Angle bisectors from axiom 5: folds through the intersection `q`
    /// sending another point of `l` onto `m`. Parallel lines use the
    /// midpoint of a transversal segment instead of `q`.
    pub fn derive_o4(&mut self, l: ObjId, m: ObjId) -> Result<FoldOutcome> {
        self.require(Axiom::O5)?;
        let (ll, lm) = (self.line(l)?, self.line(m)?);
        if ll.eq_exact(&lm)? {
            return Err(GeomError::CoincidentLines.into());
        }
        if !ll.is_parallel(&lm)? {
            let q = self.o2(l, m)?;
            let mut p = self.pick(l, 0)?;
            if self.same_point(p, q)? {
                p = self.pick(l, 1)?;
            }
            return self.o5(p, m, q);
        }
        let a = self.pick(l, 0)?;
        let b = self.pick(m, 0)?;
        let mid = self.fold_midpoint(a, b)?;
        let folds = self.o5(a, m, mid)?;
        for (line, id) in folds.result.lines.iter().zip(&folds.ids) {
            if line.is_parallel(&ll)? {
                let result = FoldResult { lines: vec![line.clone()], continuum: false, at_infinity: false };
                return Ok(FoldOutcome { result, ids: vec![*id] });
            }
        }
        Err(FoldError::NoSolution("midline not found".into()))
    }

    /// Re-execute every step of `trace` at `level`, checking that each step
    /// produces the same object ids.
    pub fn replay(trace: &Trace, level: Level) -> Result<Construction> {
        let mut c = Construction::new(level);
        for (index, step) in trace.steps().iter().enumerate() {
            let err = |message: String| FoldError::Replay { index, message };
            let arg = |i: usize| -> Result<ObjId> {
                step.args.get(i).copied().ok_or_else(|| err(format!("missing argument {i}")))
            };
            let lit = |i: usize| -> Result<ExactReal> {
                let s = step.params.get(i).ok_or_else(|| err(format!("missing parameter {i}")))?;
                parse_literal(s).map_err(|e| err(e.to_string()))
            };
            let out: Vec<ObjId> = match step.op.as_str() {
                "point" => vec![c.add_point(Point::new(lit(0)?, lit(1)?))],
                "line" => vec![c.add_line(Line::new(lit(0)?, lit(1)?, lit(2)?)?)],
                "O1" => vec![c.o1(arg(0)?, arg(1)?)?],
                "O2" => vec![c.o2(arg(0)?, arg(1)?)?],
                "O3" => vec![c.o3(arg(0)?, arg(1)?)?],
                "O4" => c.o4(arg(0)?, arg(1)?)?.ids,
                "O5" => c.o5(arg(0)?, arg(1)?, arg(2)?)?.ids,
                "O5d" => c.o5_degenerate(arg(0)?, arg(1)?, arg(2)?)?.ids,
                "O6" => c.o6(arg(0)?, arg(1)?, arg(2)?, arg(3)?)?.ids,
                "reflect" => vec![c.reflect(arg(0)?, arg(1)?)?],
                "mid" => vec![c.mid(arg(0)?, arg(1)?)?],
                "perp" => vec![c.perpendicular(arg(0)?, arg(1)?)?],
                "parallel" => vec![c.parallel(arg(0)?, arg(1)?)?],
                "pick" => {
                    let idx = step.params.first().and_then(|s| s.parse().ok()).unwrap_or(0);
                    vec![c.pick(arg(0)?, idx)?]
                }
                other => return Err(err(format!("unknown operation '{other}'"))),
            };
            if out != step.out {
                return Err(err(format!("produced {out:?}, trace records {:?}", step.out)));
            }
        }
        for id in 0..trace.len() {
            if let Some(label) = trace.label(id) {
                c.set_label(id, label);
            }
        }
        Ok(c)
    }
}
