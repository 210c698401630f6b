//! End-to-end acceptance checks. Each criterion prints one PASS/FAIL line;
//! the process fails if any criterion fails or exceeds its time budget.

mod support;

use std::fs;
use std::panic::{self, AssertUnwindSafe};
use std::path::PathBuf;
use std::time::{Duration, Instant};

use num_traits::{Signed, Zero};
use origami_core::conics::{self, adjoint, det, mat_eq, mat_from_fn, mat_proportional, mat_scale, Conic};
use origami_core::exactnum::{rat, ExactReal, Rational, Sign};
use origami_core::fields::{self, Certificate, NgonObstruction, Verdict};
use origami_core::folds::{Construction, Level};
use origami_core::geom::{Line, Point, ProjLine};
use origami_core::solvers;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use support::{bisect, distinct_real_roots, real_roots, trial_factor, RPoly};

type Check = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn ok<T, E: std::fmt::Display>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn q(n: i64, d: i64) -> ExactReal {
    ExactReal::ratio(n, d)
}

fn er(r: &Rational) -> ExactReal {
    ExactReal::from_rational(r.clone())
}

fn random_rational(rng: &mut StdRng, bound: i64) -> Rational {
    rat(rng.gen_range(-bound..=bound), rng.gen_range(1..=bound))
}

fn conic(c: [(i64, i64); 6]) -> Result<Conic, String> {
    ok(Conic::from_coeffs(c.map(|(n, d)| q(n, d))))
}

fn delian() -> Check {
    let (roots, trace) = ok(solvers::cubic_by_fold(&q(0, 1), &q(-2, 1)))?;
    ensure!(roots.len() == 1, "expected one real root, got {}", roots.len());
    let r = &roots[0].value;
    ensure!(ok(r.powi(3).sub(&q(2, 1)).sign())? == Sign::Zero, "r^3 - 2 is not exactly zero");
    let approx = r.to_f64();
    ensure!((approx - 1.259921049894873).abs() <= 1e-12, "r ≈ {approx}");
    ensure!(trace.count_op("O6") == 1, "trace has {} O6 steps", trace.count_op("O6"));
    let algebraic = ExactReal::from_int(2).cbrt();
    ensure!(ok(r.eq_exact(&algebraic))?, "fold root differs from cbrt(2)");
    let out = origami_cli::run(["origami", "solve-cubic", "0", "-2"]);
    ensure!(out.code == 0 && out.stdout.contains("≈ 1.259921049894873"), "cli printed {:?}", out.stdout);
    Ok(format!("r = {} ≈ {}", r, ok(r.to_decimal(16))?))
}

fn ninegon_tangents() -> Check {
    let a = conic([(1, 2), (0, 1), (0, 1), (0, 1), (-1, 1), (0, 1)])?;
    let b = conic([(0, 1), (0, 1), (1, 1), (-1, 4), (3, 4), (9, 64)])?;
    let lines = ok(conics::common_tangents(&a, &b))?;
    let affine: Vec<&Line> = lines.iter().filter_map(ProjLine::finite).collect();
    let at_infinity = lines.iter().filter(|l| l.is_infinity()).count();
    ensure!(affine.len() == 3 && at_infinity == 1, "{} affine, {} at infinity", affine.len(), at_infinity);
    let f = |m: f64| 4.0 * m * m * m - 3.0 * m + 0.5;
    let oracle = [bisect(f, -1.0, -0.5), bisect(f, 0.0, 0.5), bisect(f, 0.5, 1.0)];
    let stated = [-0.9396926, 0.1736482, 0.7660444];
    let mut slopes = Vec::new();
    for (i, l) in affine.iter().enumerate() {
        let m = ok(l.slope())?.ok_or("vertical tangent")?;
        let cubic = m.powi(3).scale(&rat(4, 1)).sub(&m.scale(&rat(3, 1))).add(&q(1, 2));
        ensure!(ok(cubic.sign())? == Sign::Zero, "slope {i} is not a root of 4m^3 - 3m + 1/2");
        let v = m.to_f64();
        ensure!((v - oracle[i]).abs() <= 1e-9, "slope {v} vs bisection {}", oracle[i]);
        ensure!((v - stated[i]).abs() <= 1e-7, "slope {v} vs {}", stated[i]);
        slopes.push(format!("{v:.7}"));
    }
    Ok(format!("slopes {} and the line at infinity", slopes.join(", ")))
}

fn discriminant_law() -> Check {
    let mut rng = StdRng::seed_from_u64(3);
    let mut tally = [0usize; 4];
    for i in 0..200 {
        let (a, b) = if i % 10 == 9 {
            // a point on 27 b^2 + 4 a^3 = 0: a = -3 t^2, b = 2 t^3
            let t = random_rational(&mut rng, 4);
            (-rat(3, 1) * &t * &t, rat(2, 1) * &t * &t * &t)
        } else {
            (random_rational(&mut rng, 20), random_rational(&mut rng, 20))
        };
        let disc = rat(27, 1) * &b * &b + rat(4, 1) * &a * &a * &a;
        let expected = if disc.is_negative() {
            3
        } else if disc.is_positive() {
            1
        } else if a.is_zero() {
            1
        } else {
            2
        };
        let (roots, _) = ok(solvers::cubic_by_fold(&er(&a), &er(&b)))?;
        ensure!(roots.len() == expected, "a = {a}, b = {b}: {} roots, expected {expected}", roots.len());
        let sturm = distinct_real_roots(&vec![b.clone(), a.clone(), Rational::zero(), rat(1, 1)]);
        ensure!(sturm == expected, "Sturm count {sturm} for a = {a}, b = {b}");
        tally[expected] += 1;
    }
    Ok(format!("200 cubics: {} with 3 roots, {} with 2, {} with 1", tally[3], tally[2], tally[1]))
}

fn square_roots() -> Check {
    for r in [2, 3, 5, 7, 10] {
        let (s, trace) = ok(solvers::sqrt_by_fold(&ExactReal::from_int(r)))?;
        ensure!(ok(s.square().sub(&ExactReal::from_int(r)).sign())? == Sign::Zero, "s^2 != {r}");
        ensure!(ok(s.sign())? == Sign::Positive, "negative root for {r}");
        let replayed = ok(Construction::replay(&trace, Level::Euclidean))?;
        ensure!(replayed.trace().to_json() == trace.to_json(), "replay of sqrt({r}) differs");
        let (_, again) = ok(solvers::sqrt_by_fold(&ExactReal::from_int(r)))?;
        ensure!(again.to_json() == trace.to_json(), "second run of sqrt({r}) differs");
    }
    Ok("sqrt of 2, 3, 5, 7, 10 exact; traces replay identically".into())
}

fn duals() -> Check {
    let p = conic([(1, 2), (0, 1), (0, 1), (0, 1), (-1, 1), (0, 1)])?;
    let want = conic([(1, 2), (0, 1), (0, 1), (0, 1), (-1, 1), (0, 1)])?;
    ensure!(ok(mat_proportional(ok(conics::dual(&p))?.matrix(), want.matrix()))?, "dual of y = x^2/2");
    let r = conic([(0, 1), (0, 1), (1, 1), (-1, 4), (3, 4), (9, 64)])?;
    // v^2 + 6uv - 16u = 0
    let want = conic([(0, 1), (6, 1), (1, 1), (-16, 1), (0, 1), (0, 1)])?;
    ensure!(ok(mat_proportional(ok(conics::dual(&r))?.matrix(), want.matrix()))?, "dual of (y+3/8)^2 = x/4");

    let mut rng = StdRng::seed_from_u64(5);
    let roots = [ok(ExactReal::from_int(2).sqrt())?, ok(ExactReal::from_int(3).sqrt())?];
    for _ in 0..100 {
        let mut entry = || {
            let base = q(rng.gen_range(-3..=3), 1);
            let k = rng.gen_range(-2..=2);
            base.add(&roots[rng.gen_range(0..2)].scale(&rat(k, 1)))
        };
        let mut m = vec![vec![ExactReal::zero(); 3]; 3];
        for i in 0..3 {
            for j in i..3 {
                let e = entry();
                m[i][j] = e.clone();
                m[j][i] = e;
            }
        }
        let m = mat_from_fn(|i, j| m[i][j].clone());
        let lhs = adjoint(&adjoint(&m));
        let rhs = mat_scale(&m, &det(&m));
        ensure!(ok(mat_eq(&lhs, &rhs))?, "adj(adj M) != det(M) M");
    }
    Ok("both duals match up to scale; adj(adj M) = det(M) M on 100 matrices".into())
}

fn circle_and_parabola() -> Check {
    let parabola = conic([(1, 1), (0, 1), (0, 1), (0, 1), (-1, 1), (0, 1)])?;
    let circle = conic([(1, 1), (0, 1), (1, 1), (-2, 1), (-2, 1), (1, 1)])?;
    let lines = ok(conics::common_tangents(&parabola, &circle))?;
    let x_axis = ok(Line::from_ints(0, 1, 0))?;
    let mut found = false;
    for l in lines.iter().filter_map(ProjLine::finite) {
        found |= ok(l.eq_exact(&x_axis))?;
    }
    ensure!(found, "y = 0 missing from {} tangents", lines.len());
    Ok(format!("y = 0 among {} common tangents", lines.len()))
}

fn product(f: &[(u64, u32)]) -> u64 {
    f.iter().map(|&(p, e)| p.pow(e)).product()
}

fn ngon_table() -> Check {
    let yes = [3, 4, 5, 6, 7, 8, 9, 12, 13, 17, 19, 27, 36, 73];
    let no = [11, 22, 23, 25, 29, 49];
    for (n, want) in yes.iter().map(|&n| (n, true)).chain(no.iter().map(|&n| (n, false))) {
        let (verdict, cert) = ok(fields::ngon_constructible(n))?;
        ensure!(verdict == want, "n = {n}: verdict {verdict}");
        // the certificate must check out against trial division
        ensure!(cert.factors == trial_factor(n), "n = {n}: factorization {:?}", cert.factors);
        for (p, pf) in &cert.pierpont {
            ensure!(*pf == trial_factor(p - 1), "n = {n}: {p} - 1 factored as {pf:?}");
        }
        let oracle = trial_factor(n).iter().all(|&(p, e)| {
            p <= 3 || (e == 1 && trial_factor(p - 1).iter().all(|&(r, _)| r <= 3))
        });
        ensure!(oracle == want, "n = {n}: oracle disagrees");
        match (&cert.obstruction, want) {
            (None, true) => {}
            (Some(NgonObstruction::NotPierpont { p, factors }), false) => {
                ensure!(product(factors) == p - 1 && factors.iter().any(|&(r, _)| r > 3), "n = {n}: bad obstruction");
            }
            (Some(NgonObstruction::RepeatedPrime { p, exponent }), false) => {
                ensure!(*exponent > 1 && n % p.pow(*exponent) == 0, "n = {n}: bad obstruction");
            }
            (o, _) => return Err(format!("n = {n}: obstruction {o:?}")),
        }
    }
    Ok(format!("{} constructible, {} not, certificates verified", yes.len(), no.len()))
}

fn thalian() -> Check {
    for d in [-2i64, -3, -5, -6] {
        let class = ok(fields::thalian_classify(&rat(0, 1), &rat(-d, 1), false))?;
        ensure!(class.verdict == Verdict::NonThalian, "sqrt({d}) classified {:?}", class.verdict);
    }
    ensure!(
        ok(fields::thalian_classify(&rat(0, 1), &rat(1, 1), true))?.verdict == Verdict::Thalian,
        "i itself must be Thalian"
    );
    for m in 3..=24u64 {
        ensure!(ok(fields::root_of_unity_thalian(m))? == (m % 4 == 0), "m = {m}");
    }
    Ok("sqrt(-2), sqrt(-3), sqrt(-5), sqrt(-6) non-Thalian; unity verdicts match 4 | m".into())
}

fn totally_real() -> Check {
    let good = ok(fields::totally_real_quadratic(&rat(4, 1), &rat(2, 1), &rat(2, 1)))?;
    ensure!(good.verdict == Verdict::TotallyRealWitness, "sqrt(4 + 2 sqrt 2) rejected");
    let bad = ok(fields::totally_real_quadratic(&rat(2, 1), &rat(2, 1), &rat(2, 1)))?;
    ensure!(bad.verdict == Verdict::NotTotallyReal, "sqrt(2 + 2 sqrt 2) accepted");
    let Certificate::Conjugates { conjugate, conjugate_sign, .. } = &bad.certificate else {
        return Err("missing conjugate certificate".into());
    };
    let expected = q(2, 1).sub(&ok(ExactReal::from_int(2).sqrt())?.scale(&rat(2, 1)));
    ensure!(ok(conjugate.eq_exact(&expected))?, "conjugate is {conjugate}");
    ensure!(*conjugate_sign == Sign::Negative && ok(conjugate.sign())? == Sign::Negative, "conjugate sign");
    ensure!(conjugate.sqrt().is_err(), "sqrt of the conjugate should not be real");
    Ok(format!("flagged: {bad}"))
}

fn axiom_basis() -> Check {
    let mut rng = StdRng::seed_from_u64(10);
    for i in 0..50 {
        let mut reference = Construction::new(Level::Origami);
        let mut reduced = Construction::new(Level::Reduced);
        let p = Point::new(er(&random_rational(&mut rng, 9)), er(&random_rational(&mut rng, 9)));
        let mut qp = Point::new(er(&random_rational(&mut rng, 9)), er(&random_rational(&mut rng, 9)));
        if ok(p.eq_exact(&qp))? {
            qp = qp.add(&Point::from_ints(1, 0));
        }
        let ids = [reference.add_point(p.clone()), reference.add_point(qp.clone())];
        let rids = [reduced.add_point(p), reduced.add_point(qp)];
        let id = ok(reference.o1(ids[0], ids[1]))?;
        let direct = ok(reference.line(id))?;
        let id = ok(reduced.derive_o1(rids[0], rids[1]))?;
        let derived = ok(reduced.line(id))?;
        ensure!(ok(direct.eq_exact(&derived))?, "pair {i}: O1 {direct} vs derived {derived}");

        let l = random_line(&mut rng)?;
        let mut m = random_line(&mut rng)?;
        if i % 10 == 0 {
            // parallel pairs take the midline branch
            m = ok(Line::new(l.a().clone(), l.b().clone(), l.c().add(&q(rng.gen_range(1..=5), 1))))?;
        }
        if ok(l.eq_exact(&m))? {
            continue;
        }
        let (li, mi) = (reference.add_line(l.clone()), reference.add_line(m.clone()));
        let (rl, rm) = (reduced.add_line(l), reduced.add_line(m));
        let direct = ok(reference.o4(li, mi))?.result.lines;
        let derived = ok(reduced.derive_o4(rl, rm))?.result.lines;
        ensure!(direct.len() == derived.len(), "pair {i}: {} vs {} bisectors", direct.len(), derived.len());
        for d in &direct {
            let mut hit = false;
            for e in &derived {
                hit |= ok(d.eq_exact(e))?;
            }
            ensure!(hit, "pair {i}: bisector {d} not derived");
        }
    }
    Ok("50 point pairs and 50 line pairs agree".into())
}

fn random_line(rng: &mut StdRng) -> Result<Line, String> {
    loop {
        let (a, b) = (random_rational(rng, 6), random_rational(rng, 6));
        if a.is_zero() && b.is_zero() {
            continue;
        }
        return ok(Line::new(er(&a), er(&b), er(&random_rational(rng, 6))));
    }
}

fn check_quartic(a: &Rational, b: &Rational, c: &Rational) -> Result<usize, String> {
    let roots = ok(solvers::quartic_roots(&er(a), &er(b), &er(c)))?;
    let poly: RPoly = vec![c.clone(), b.clone(), a.clone(), Rational::zero(), rat(1, 1)];
    let oracle = real_roots(&poly, &rat(1, 1 << 20));
    let shape = |r: &[(String, u32)]| format!("{r:?}");
    let got: Vec<(String, u32)> = roots.iter().map(|r| (r.value.to_f64().to_string(), r.multiplicity)).collect();
    ensure!(roots.len() == oracle.len(), "x^4 + ({a}) x^2 + ({b}) x + ({c}): got {}, Sturm finds {}", shape(&got), oracle.len());
    for (r, iso) in roots.iter().zip(&oracle) {
        let above = ok(r.value.cmp_exact(&er(&iso.lo)))? == std::cmp::Ordering::Greater;
        let below = ok(r.value.cmp_exact(&er(&iso.hi)))? != std::cmp::Ordering::Greater;
        ensure!(above && below, "x^4 + ({a}) x^2 + ({b}) x + ({c}): root {} outside ({}, {}]", r.value.to_f64(), iso.lo, iso.hi);
        ensure!(r.multiplicity == iso.multiplicity, "multiplicity {} vs {}", r.multiplicity, iso.multiplicity);
    }
    Ok(roots.len())
}

fn quartics() -> Check {
    let roots = ok(solvers::quartic_roots(&q(-5, 1), &q(0, 1), &q(4, 1)))?;
    let want = [-2, -1, 1, 2];
    ensure!(roots.len() == 4, "{} roots of x^4 - 5x^2 + 4", roots.len());
    for (r, w) in roots.iter().zip(want) {
        ensure!(ok(r.value.eq_exact(&ExactReal::from_int(w)))? && r.multiplicity == 1, "root {} vs {w}", r.value);
    }
    let mut rng = StdRng::seed_from_u64(11);
    let mut total = 0;
    for i in 0..100 {
        let (a, b, c) = if i % 4 == 3 {
            // roots r1, r2, r3, -(r1 + r2 + r3), often repeated or rational
            let r: Vec<Rational> = (0..3).map(|_| rat(rng.gen_range(-3..=3), rng.gen_range(1..=2))).collect();
            let r4 = -(&r[0] + &r[1] + &r[2]);
            let all = [r[0].clone(), r[1].clone(), r[2].clone(), r4];
            let e2 = pairs(&all);
            let e3 = triples(&all);
            let e4 = all.iter().fold(rat(1, 1), |acc, x| acc * x);
            (e2, -e3, e4)
        } else {
            (random_rational(&mut rng, 6), random_rational(&mut rng, 6), random_rational(&mut rng, 6))
        };
        total += check_quartic(&a, &b, &c)?;
    }
    Ok(format!("x^4 - 5x^2 + 4 exact; 100 quartics with {total} real roots match Sturm isolation"))
}

fn pairs(r: &[Rational]) -> Rational {
    let mut s = Rational::zero();
    for i in 0..r.len() {
        for j in i + 1..r.len() {
            s += &r[i] * &r[j];
        }
    }
    s
}

fn triples(r: &[Rational]) -> Rational {
    let mut s = Rational::zero();
    for i in 0..r.len() {
        for j in i + 1..r.len() {
            for k in j + 1..r.len() {
                s += &r[i] * &r[j] * &r[k];
            }
        }
    }
    s
}

fn corpus_outputs(dir: &PathBuf, round: usize) -> Result<Vec<(String, Vec<u8>)>, String> {
    let corpus = PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/../../corpus"));
    let mut scripts: Vec<PathBuf> = ok(fs::read_dir(&corpus))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "ori"))
        .collect();
    scripts.sort();
    let mut out = Vec::new();
    for s in &scripts {
        let stem = s.file_stem().unwrap().to_string_lossy().into_owned();
        let json = dir.join(format!("{stem}.{round}.json"));
        let svg = dir.join(format!("{stem}.{round}.svg"));
        let args = ["origami", "run", &s.to_string_lossy(), "--trace", &json.to_string_lossy(), "--svg", &svg.to_string_lossy()]
            .map(String::from);
        let res = origami_cli::run(args);
        ensure!(res.code == 0, "{stem}: exit {} {}", res.code, res.stderr);
        out.push((format!("{stem}.json"), ok(fs::read(&json))?));
        out.push((format!("{stem}.svg"), ok(fs::read(&svg))?));
    }
    Ok(out)
}

fn determinism() -> Check {
    let dir = std::env::temp_dir().join(format!("origami-acceptance-{}", std::process::id()));
    ok(fs::create_dir_all(&dir))?;
    let first = corpus_outputs(&dir, 1)?;
    let second = corpus_outputs(&dir, 2)?;
    ensure!(first.len() == second.len() && !first.is_empty(), "output counts differ");
    for ((name, a), (_, b)) in first.iter().zip(&second) {
        ensure!(a == b, "{name} differs between runs");
    }
    let _ = fs::remove_dir_all(&dir);
    Ok(format!("{} scripts, {} files identical", first.len() / 2, first.len()))
}

fn main() {
    let criteria: [(&str, u64, fn() -> Check); 12] = [
        ("Delian cube root by fold", 1, delian),
        ("9-gon common tangents", 2, ninegon_tangents),
        ("cubic discriminant law", 30, discriminant_law),
        ("square roots by fold", 1, square_roots),
        ("dual conics and adjugates", 10, duals),
        ("circle and parabola tangent", 1, circle_and_parabola),
        ("regular polygon table", 1, ngon_table),
        ("Thalian classification", 1, thalian),
        ("totally real square roots", 1, totally_real),
        ("axiom basis equivalence", 10, axiom_basis),
        ("quartics via pencils", 60, quartics),
        ("corpus determinism", 60, determinism),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, budget, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = panic::catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let elapsed = start.elapsed();
        let result = match result {
            Ok(_) if elapsed > Duration::from_secs(*budget) => Err(format!("took {elapsed:.2?}, budget {budget} s")),
            r => r,
        };
        match result {
            Ok(detail) => println!("PASS criterion {:>2} {name} ({elapsed:.2?}): {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {:>2} {name} ({elapsed:.2?}): {why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
