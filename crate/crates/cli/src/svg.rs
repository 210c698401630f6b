//! Deterministic SVG figures of points, lines and conics.
//!
//! Exact coordinates are refined to 64 bits before the affine map to pixels.
//! Lines are clipped against the viewport exactly. Conics are sampled at
//! [`SAMPLES`] intervals across the viewport along one axis, solving for the
//! other coordinate, which gives at most two branches.

use std::cmp::Ordering;
use std::fmt::Write;

use origami_core::conics::{conic_from_parabola, Conic};
use origami_core::exactnum::{format_rational, ExactError, ExactReal, Rational, Sign};
use origami_core::folds::{Object, Trace};
use origami_core::geom::{Line, Point};

pub const SAMPLES: usize = 512;
pub const DEFAULT_SIZE: (u32, u32) = (400, 400);

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RenderError {
    EmptyViewport,
    Exact(ExactError),
}

impl std::fmt::Display for RenderError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RenderError::EmptyViewport => write!(f, "viewport is empty (need xmin < xmax and ymin < ymax)"),
            RenderError::Exact(e) => e.fmt(f),
        }
    }
}

impl From<ExactError> for RenderError {
    fn from(e: ExactError) -> Self {
        RenderError::Exact(e)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Viewport {
    pub xmin: Rational,
    pub ymin: Rational,
    pub xmax: Rational,
    pub ymax: Rational,
}

impl Viewport {
    pub fn new(xmin: Rational, ymin: Rational, xmax: Rational, ymax: Rational) -> Result<Viewport, RenderError> {
        if xmin >= xmax || ymin >= ymax {
            return Err(RenderError::EmptyViewport);
        }
        Ok(Viewport { xmin, ymin, xmax, ymax })
    }

    fn bounds_f64(&self) -> [f64; 4] {
        [&self.xmin, &self.ymin, &self.xmax, &self.ymax].map(|q| ExactReal::from_rational(q.clone()).to_f64())
    }

    fn contains(&self, p: &Point) -> Result<bool, ExactError> {
        let inside = |v: &ExactReal, lo: &Rational, hi: &Rational| -> Result<bool, ExactError> {
            Ok(v.cmp_exact(&exact(lo))? != Ordering::Less && v.cmp_exact(&exact(hi))? != Ordering::Greater)
        };
        Ok(inside(&p.x, &self.xmin, &self.xmax)? && inside(&p.y, &self.ymin, &self.ymax)?)
    }
}

impl std::fmt::Display for Viewport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let [a, b, c, d] = [&self.xmin, &self.ymin, &self.xmax, &self.ymax].map(format_rational);
        write!(f, "{a},{b},{c},{d}")
    }
}

fn exact(q: &Rational) -> ExactReal {
    ExactReal::from_rational(q.clone())
}

/// Objects to draw; labels are optional.
#[derive(Clone, Debug, Default)]
pub struct Scene {
    pub conics: Vec<Conic>,
    pub lines: Vec<(Option<String>, Line)>,
    pub points: Vec<(Option<String>, Point)>,
}

impl Scene {
    /// The labelled objects of a trace, plus the two parabolas of every O6 step.
    pub fn from_trace(trace: &Trace) -> Scene {
        let mut scene = Scene::default();
        for step in trace.steps().iter().filter(|s| s.op == "O6") {
            for pair in step.args.chunks(2) {
                if let (Some(Object::Point(f)), Some(Object::Line(d))) = (trace.object(pair[0]), trace.object(pair[1])) {
                    if let Ok(c) = conic_from_parabola(f, d) {
                        scene.conics.push(c);
                    }
                }
            }
        }
        for (id, obj) in trace.objects().iter().enumerate() {
            let Some(label) = trace.label(id) else { continue };
            match obj {
                Object::Point(p) => scene.points.push((Some(label.to_string()), p.clone())),
                Object::Line(l) => scene.lines.push((Some(label.to_string()), l.clone())),
            }
        }
        scene
    }

    /// A viewport around the points, padded and rounded outward to eighths.
    pub fn auto_viewport(&self) -> Viewport {
        let mut b = [-1.0f64, -1.0, 1.0, 1.0];
        for (_, p) in &self.points {
            let (x, y) = p.to_f64();
            if x.is_finite() && y.is_finite() {
                b = [b[0].min(x), b[1].min(y), b[2].max(x), b[3].max(y)];
            }
        }
        let pad = ((b[2] - b[0]).max(b[3] - b[1]) * 0.1).max(0.5);
        let eighths = |v: f64, up: bool| {
            let k = if up { (v * 8.0).ceil() } else { (v * 8.0).floor() };
            Rational::new((k as i64).into(), 8.into())
        };
        Viewport {
            xmin: eighths(b[0] - pad, false),
            ymin: eighths(b[1] - pad, false),
            xmax: eighths(b[2] + pad, true),
            ymax: eighths(b[3] + pad, true),
        }
    }
}

struct Map {
    b: [f64; 4],
    w: f64,
    h: f64,
}

impl Map {
    fn px(&self, x: f64, y: f64) -> (f64, f64) {
        let [xmin, ymin, xmax, ymax] = self.b;
        ((x - xmin) / (xmax - xmin) * self.w, (ymax - y) / (ymax - ymin) * self.h)
    }
}

/// Fixed three-decimal rendering without trailing zeros.
fn num(v: f64) -> String {
    let s = format!("{v:.3}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".to_string()
    } else {
        s.to_string()
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// End points of the part of `l` inside the viewport.
pub fn clip_line(l: &Line, vp: &Viewport) -> Result<Option<(Point, Point)>, ExactError> {
    let (a, b, c) = (l.a(), l.b(), l.c());
    let mut hits: Vec<Point> = Vec::new();
    if b.sign()? != Sign::Zero {
        for x in [&vp.xmin, &vp.xmax] {
            let x = exact(x);
            let y = a.mul(&x).add(c).neg().div(b)?;
            hits.push(Point::new(x, y));
        }
    }
    if a.sign()? != Sign::Zero {
        for y in [&vp.ymin, &vp.ymax] {
            let y = exact(y);
            let x = b.mul(&y).add(c).neg().div(a)?;
            hits.push(Point::new(x, y));
        }
    }
    let mut inside: Vec<Point> = Vec::new();
    for p in hits {
        if !vp.contains(&p)? {
            continue;
        }
        let mut dup = false;
        for q in &inside {
            if p.x.eq_exact(&q.x)? && p.y.eq_exact(&q.y)? {
                dup = true;
            }
        }
        if !dup {
            inside.push(p);
        }
    }
    if inside.len() < 2 {
        return Ok(None);
    }
    // collinear points: lexicographic order runs along the line
    let mut err = None;
    inside.sort_by(|p, q| {
        let o = p.x.cmp_exact(&q.x).and_then(|o| if o.is_eq() { p.y.cmp_exact(&q.y) } else { Ok(o) });
        o.unwrap_or_else(|e| {
            err.get_or_insert(e);
            Ordering::Equal
        })
    });
    if let Some(e) = err {
        return Err(e);
    }
    let last = inside.pop().unwrap();
    Ok(Some((inside.swap_remove(0), last)))
}

/// Polylines (in world coordinates) approximating the conic inside the viewport.
pub fn sample_conic(conic: &Conic, vp: &Viewport) -> Result<Vec<Vec<(f64, f64)>>, ExactError> {
    let exact_coeffs = conic.coeffs();
    let zero = |i: usize| -> Result<bool, ExactError> { Ok(exact_coeffs[i].sign()? == Sign::Zero) };
    let [a, b, c, d, e, f] = conic.to_f64_coeffs();
    let [xmin, ymin, xmax, ymax] = vp.bounds_f64();
    // sample along x and solve for y when y appears at most linearly, or
    // when y^2 dominates x^2
    let along_x = if zero(2)? {
        !(zero(1)? && zero(4)?)
    } else if zero(0)? {
        false
    } else {
        c.abs() >= a.abs()
    };
    let (t0, t1, s0, s1) = if along_x { (xmin, xmax, ymin, ymax) } else { (ymin, ymax, xmin, xmax) };
    let span = s1 - s0;
    let mut branches: [Vec<Vec<(f64, f64)>>; 2] = [vec![vec![]], vec![vec![]]];
    for i in 0..=SAMPLES {
        let t = t0 + (t1 - t0) * i as f64 / SAMPLES as f64;
        // q2 s^2 + q1 s + q0 = 0 in the other coordinate s
        let (q2, q1, q0) = if along_x { (c, b * t + e, a * t * t + d * t + f) } else { (a, b * t + d, c * t * t + e * t + f) };
        let quadratic = if along_x { !zero(2)? } else { !zero(0)? };
        let roots: Vec<f64> = if quadratic {
            let disc = q1 * q1 - 4.0 * q2 * q0;
            if disc < 0.0 {
                vec![]
            } else {
                let r = disc.sqrt();
                let (u, v) = ((-q1 - r) / (2.0 * q2), (-q1 + r) / (2.0 * q2));
                vec![u.min(v), u.max(v)]
            }
        } else if q1 != 0.0 {
            vec![-q0 / q1]
        } else {
            vec![]
        };
        for k in 0..2 {
            let keep = roots.get(k).filter(|s| s.is_finite() && **s >= s0 - span && **s <= s1 + span);
            let segs = &mut branches[k];
            match keep {
                Some(&s) => segs.last_mut().unwrap().push(if along_x { (t, s) } else { (s, t) }),
                None => {
                    if !segs.last().unwrap().is_empty() {
                        segs.push(vec![]);
                    }
                }
            }
        }
    }
    Ok(branches.into_iter().flatten().filter(|s| s.len() >= 2).collect())
}

/// SVG document with elements grouped as conics, lines, points, labels.
pub fn render(scene: &Scene, vp: &Viewport, size: (u32, u32)) -> Result<String, RenderError> {
    if vp.xmin >= vp.xmax || vp.ymin >= vp.ymax {
        return Err(RenderError::EmptyViewport);
    }
    let (w, h) = size;
    let map = Map { b: vp.bounds_f64(), w: w as f64, h: h as f64 };
    let mut out = String::new();
    let mut labels: Vec<(f64, f64, String)> = Vec::new();
    writeln!(out, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#).unwrap();
    writeln!(out, r#"<rect width="{w}" height="{h}" fill="white"/>"#).unwrap();

    writeln!(out, r##"<g id="conics" fill="none" stroke="#1f77b4" stroke-width="1.5">"##).unwrap();
    for conic in &scene.conics {
        for seg in sample_conic(conic, vp)? {
            let pts: Vec<String> = seg
                .iter()
                .map(|&(x, y)| {
                    let (u, v) = map.px(x, y);
                    format!("{},{}", num(u), num(v))
                })
                .collect();
            writeln!(out, r#"<polyline points="{}"/>"#, pts.join(" ")).unwrap();
        }
    }
    writeln!(out, "</g>").unwrap();

    writeln!(out, r##"<g id="lines" stroke="#444444" stroke-width="1">"##).unwrap();
    for (label, l) in &scene.lines {
        let Some((p, q)) = clip_line(l, vp)? else { continue };
        let (x1, y1) = map.px(p.x.to_f64(), p.y.to_f64());
        let (x2, y2) = map.px(q.x.to_f64(), q.y.to_f64());
        writeln!(out, r#"<line x1="{}" y1="{}" x2="{}" y2="{}"/>"#, num(x1), num(y1), num(x2), num(y2)).unwrap();
        if let Some(label) = label {
            labels.push((x2, y2, label.clone()));
        }
    }
    writeln!(out, "</g>").unwrap();

    writeln!(out, r##"<g id="points" fill="#d62728">"##).unwrap();
    for (label, p) in &scene.points {
        if !vp.contains(p)? {
            continue;
        }
        let (x, y) = map.px(p.x.to_f64(), p.y.to_f64());
        writeln!(out, r#"<circle cx="{}" cy="{}" r="3"/>"#, num(x), num(y)).unwrap();
        if let Some(label) = label {
            labels.push((x + 4.0, y - 4.0, label.clone()));
        }
    }
    writeln!(out, "</g>").unwrap();

    writeln!(out, r#"<g id="labels" font-family="sans-serif" font-size="12" fill="black">"#).unwrap();
    for (x, y, text) in labels {
        let x = x.clamp(0.0, (w as f64 - 12.0).max(0.0));
        let y = y.clamp(12.0, h as f64);
        writeln!(out, r#"<text x="{}" y="{}">{}</text>"#, num(x), num(y), escape(&text)).unwrap();
    }
    writeln!(out, "</g>").unwrap();
    writeln!(out, "</svg>").unwrap();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use origami_core::exactnum::{int, parse_literal, rat};

    fn unit_viewport() -> Viewport {
        Viewport::new(int(-1), int(-1), int(1), int(1)).unwrap()
    }

    #[test]
    fn origin_maps_to_center() {
        let scene = Scene { points: vec![(Some("O".into()), Point::from_ints(0, 0))], ..Scene::default() };
        let svg = render(&scene, &unit_viewport(), (400, 400)).unwrap();
        assert!(svg.contains(r#"<circle cx="200" cy="200" r="3"/>"#), "{svg}");
        assert!(svg.contains(">O</text>"));
    }

    #[test]
    fn diagonal_is_clipped_to_corners() {
        let scene = Scene { lines: vec![(None, Line::from_ints(1, -1, 0).unwrap())], ..Scene::default() };
        let svg = render(&scene, &unit_viewport(), (400, 400)).unwrap();
        assert!(svg.contains(r#"<line x1="0" y1="400" x2="400" y2="0"/>"#), "{svg}");
        // a line missing the viewport is skipped
        let far = Line::from_ints(1, 0, -5).unwrap();
        assert!(clip_line(&far, &unit_viewport()).unwrap().is_none());
        // an irrational crossing is clipped exactly
        let l = Line::new(parse_literal("sqrt(2)").unwrap(), ExactReal::from_int(1), ExactReal::zero()).unwrap();
        let (p, q) = clip_line(&l, &unit_viewport()).unwrap().unwrap();
        assert_eq!(p.y.as_rational(), Some(&int(1)));
        assert_eq!(q.y.as_rational(), Some(&int(-1)));
    }

    #[test]
    fn parabola_samples_lie_on_the_curve() {
        let vp = Viewport::new(int(-2), int(-1), int(2), int(3)).unwrap();
        let c = Conic::from_coeffs([rat(1, 2), int(0), int(0), int(0), int(-1), int(0)].map(ExactReal::from_rational)).unwrap();
        let segs = sample_conic(&c, &vp).unwrap();
        assert_eq!(segs.len(), 1);
        assert_eq!(segs[0].len(), SAMPLES + 1);
        let map = Map { b: vp.bounds_f64(), w: 400.0, h: 400.0 };
        for &(x, y) in &segs[0] {
            let (_, v) = map.px(x, y);
            let (_, v_ref) = map.px(x, x * x / 2.0);
            assert!((v - v_ref).abs() <= 1.0);
        }
        // a sideways parabola is sampled along y
        let c = Conic::from_int_coeffs([0, 0, 1, -1, 0, 0]).unwrap();
        let segs = sample_conic(&c, &vp).unwrap();
        assert!(segs.iter().all(|s| s.iter().all(|&(x, y)| (x - y * y).abs() < 1e-9)));
    }

    #[test]
    fn empty_viewport() {
        assert_eq!(Viewport::new(int(1), int(0), int(1), int(2)).unwrap_err(), RenderError::EmptyViewport);
        let vp = Viewport { xmin: int(0), ymin: int(0), xmax: int(1), ymax: int(0) };
        assert_eq!(render(&Scene::default(), &vp, (10, 10)).unwrap_err(), RenderError::EmptyViewport);
    }
}
