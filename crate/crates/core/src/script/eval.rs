use std::collections::HashMap;
use std::fmt;

use crate::exactnum::{cubic_root_in, parse_literal, ExactError, ExactReal};
use crate::folds::{Axiom, Construction, FoldError, FoldOutcome, Level, ObjId, Object};
use crate::geom::{GeomError, Line, Point};

use super::ast::{BinOp, Expr, Field, Func, LineDef, MacroKind, Program, Relation, Stmt};

/// Expression trees above this many nodes are summarized in reports.
const TREE_LIMIT: usize = 20_000;
/// Significant digits of the decimals in assertion reports.
const REPORT_DIGITS: usize = 30;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EvalError {
    AxiomNotAvailable { line: usize, axiom: Axiom, level: Level },
    NoSolution { line: usize, message: String },
    /// Both sides to 30 significant digits, and as exact expressions.
    AssertFailed { line: usize, assertion: String, lhs: String, rhs: String, lhs_exact: String, rhs_exact: String },
    PrecisionExhausted { line: usize, message: String },
    /// Degenerate input to a construction step (coincident points, parallel lines, ...).
    Invalid { line: usize, message: String },
}

impl EvalError {
    pub fn line(&self) -> usize {
        match self {
            EvalError::AxiomNotAvailable { line, .. }
            | EvalError::NoSolution { line, .. }
            | EvalError::AssertFailed { line, .. }
            | EvalError::PrecisionExhausted { line, .. }
            | EvalError::Invalid { line, .. } => *line,
        }
    }
}

impl fmt::Display for EvalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EvalError::AxiomNotAvailable { line, axiom, level } => {
                write!(f, "line {line}: axiom {axiom} is not available at level {level}")
            }
            EvalError::NoSolution { line, message } => write!(f, "line {line}: no solution: {message}"),
            EvalError::AssertFailed { line, assertion, lhs, rhs, lhs_exact, rhs_exact } => write!(
                f,
                "line {line}: assertion failed: {assertion}\n  left  ≈ {lhs}\n  right ≈ {rhs}\n  left  = {lhs_exact}\n  right = {rhs_exact}"
            ),
            EvalError::PrecisionExhausted { line, message } => write!(f, "line {line}: {message}"),
            EvalError::Invalid { line, message } => write!(f, "line {line}: {message}"),
        }
    }
}

impl std::error::Error for EvalError {}

fn exact_error(line: usize, e: ExactError) -> EvalError {
    match e {
        ExactError::PrecisionExhausted { .. } => EvalError::PrecisionExhausted { line, message: e.to_string() },
        _ => EvalError::Invalid { line, message: e.to_string() },
    }
}

fn fold_error(line: usize, e: FoldError) -> EvalError {
    match e {
        FoldError::AxiomNotAvailable { axiom, level } => EvalError::AxiomNotAvailable { line, axiom, level },
        FoldError::NoSolution(message) => EvalError::NoSolution { line, message },
        FoldError::Exact(e) | FoldError::Geom(GeomError::Exact(e)) => exact_error(line, e),
        other => EvalError::Invalid { line, message: other.to_string() },
    }
}

fn lift<T>(line: usize, r: Result<T, FoldError>) -> Result<T, EvalError> {
    r.map_err(|e| fold_error(line, e))
}

fn geom_error(line: usize, e: GeomError) -> EvalError {
    fold_error(line, FoldError::Geom(e))
}

/// Outcome of one `assert` statement.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AssertionReport {
    pub line: usize,
    /// The assertion in canonical form.
    pub text: String,
    pub passed: bool,
}

/// The state after running a program.
#[derive(Clone, Debug)]
pub struct Evaluation {
    pub construction: Construction,
    /// Names in binding order with their object, `None` for unfilled optional binders.
    pub bindings: Vec<(String, Option<ObjId>)>,
    pub assertions: Vec<AssertionReport>,
    failures: Vec<EvalError>,
}

impl Evaluation {
    pub fn lookup(&self, name: &str) -> Option<&Object> {
        let id = self.bindings.iter().find(|(n, _)| n == name)?.1?;
        self.construction.object(id).ok()
    }

    /// `Ok` iff every assertion passed; otherwise the first failure.
    pub fn status(&self) -> Result<(), EvalError> {
        match self.failures.first() {
            Some(e) => Err(e.clone()),
            None => Ok(()),
        }
    }

    pub fn failures(&self) -> &[EvalError] {
        &self.failures
    }
}

/// Run a program at its declared level (origami by default).
pub fn eval(p: &Program) -> Result<Evaluation, EvalError> {
    eval_at(p, None)
}

/// Run a program; `level` overrides the declared one.
pub fn eval_at(p: &Program, level: Option<Level>) -> Result<Evaluation, EvalError> {
    let level = level.or(p.level()).unwrap_or(Level::Origami);
    let mut ev = Evaluator {
        c: Construction::new(level),
        names: HashMap::new(),
        order: Vec::new(),
        assertions: Vec::new(),
        failures: Vec::new(),
        line: 0,
    };
    for (stmt, &line) in p.statements.iter().zip(&p.lines) {
        ev.line = line;
        ev.statement(stmt)?;
    }
    Ok(Evaluation {
        construction: ev.c,
        bindings: ev.order.into_iter().map(|n| (n.clone(), ev.names[&n])).collect(),
        assertions: ev.assertions,
        failures: ev.failures,
    })
}

struct Evaluator {
    c: Construction,
    names: HashMap<String, Option<ObjId>>,
    order: Vec<String>,
    assertions: Vec<AssertionReport>,
    failures: Vec<EvalError>,
    line: usize,
}

type EResult<T> = Result<T, EvalError>;

enum Value {
    Num(ExactReal),
    Obj(Object),
}

impl Evaluator {
    fn bind(&mut self, name: &str, id: Option<ObjId>) {
        if let Some(id) = id {
            self.c.set_label(id, name);
        }
        self.names.insert(name.to_string(), id);
        self.order.push(name.to_string());
    }

    fn id(&self, name: &str) -> EResult<ObjId> {
        self.names.get(name).copied().flatten().ok_or_else(|| EvalError::NoSolution {
            line: self.line,
            message: format!("'{name}' was not produced by its fold"),
        })
    }

    fn exact<T>(&self, r: Result<T, ExactError>) -> EResult<T> {
        r.map_err(|e| exact_error(self.line, e))
    }

    fn geom<T>(&self, r: Result<T, GeomError>) -> EResult<T> {
        r.map_err(|e| geom_error(self.line, e))
    }

    fn statement(&mut self, stmt: &Stmt) -> EResult<()> {
        match stmt {
            Stmt::Level(_) => {}
            Stmt::Point { name, x, y } => {
                let p = Point::new(self.number(x)?, self.number(y)?);
                let id = self.c.add_point(p);
                self.bind(name, Some(id));
            }
            Stmt::Line { name, def } => {
                let id = match def {
                    LineDef::Through(p, q) => {
                        let (p, q) = (self.id(p)?, self.id(q)?);
                        lift(self.line, self.c.o1(p, q))?
                    }
                    LineDef::Bisector(p, q) => {
                        let (p, q) = (self.id(p)?, self.id(q)?);
                        lift(self.line, self.c.o3(p, q))?
                    }
                    LineDef::Coeffs(a, b, c) => {
                        let l = Line::new(self.number(a)?, self.number(b)?, self.number(c)?);
                        let l = self.geom(l)?;
                        self.c.add_line(l)
                    }
                };
                self.bind(name, Some(id));
            }
            Stmt::Meet { name, l, m } => {
                let (l, m) = (self.id(l)?, self.id(m)?);
                let id = lift(self.line, self.c.o2(l, m))?;
                self.bind(name, Some(id));
            }
            Stmt::Fold { axiom, args, binders, optional } => self.fold_statement(*axiom, args, binders, *optional)?,
            Stmt::Macro { kind, args, binder } => {
                let ids = args.iter().map(|a| self.id(a)).collect::<EResult<Vec<_>>>()?;
                let r = match kind {
                    MacroKind::Translate => self.c.translate(ids[0], ids[1], ids[2]),
                    MacroKind::Scale => self.c.scale(ids[0], ids[1], ids[2], ids[3]),
                    MacroKind::MarkLength => self.c.mark_length(ids[0], ids[1], ids[2], ids[3]),
                };
                let id = lift(self.line, r)?;
                self.bind(binder, Some(id));
            }
            Stmt::Assert { lhs, rel, rhs } => self.assertion(stmt, lhs, *rel, rhs)?,
        }
        Ok(())
    }

    fn fold_statement(&mut self, axiom: Axiom, args: &[String], binders: &[String], optional: bool) -> EResult<()> {
        let ids = args.iter().map(|a| self.id(a)).collect::<EResult<Vec<_>>>()?;
        let single = |id| FoldOutcome { result: Default::default(), ids: vec![id] };
        let outcome = match axiom {
            Axiom::O1 => single(lift(self.line, self.c.o1(ids[0], ids[1]))?),
            Axiom::O2 => single(lift(self.line, self.c.o2(ids[0], ids[1]))?),
            Axiom::O3 => single(lift(self.line, self.c.o3(ids[0], ids[1]))?),
            Axiom::O4 => lift(self.line, self.c.o4(ids[0], ids[1]))?,
            Axiom::O5 => {
                let on_line = lift(self.line, self.c.point(ids[0]))?;
                let l = lift(self.line, self.c.line(ids[1]))?;
                if self.geom(l.contains(&on_line))? {
                    lift(self.line, self.c.o5_degenerate(ids[0], ids[1], ids[2]))?
                } else {
                    lift(self.line, self.c.o5(ids[0], ids[1], ids[2]))?
                }
            }
            Axiom::O6 => lift(self.line, self.c.o6(ids[0], ids[1], ids[2], ids[3]))?,
        };
        if outcome.result.continuum {
            return Err(EvalError::NoSolution {
                line: self.line,
                message: format!("{axiom} has infinitely many solutions here"),
            });
        }
        if outcome.ids.len() < binders.len() && !optional {
            return Err(EvalError::NoSolution {
                line: self.line,
                message: format!("{axiom} gave {} fold(s) for {} name(s)", outcome.ids.len(), binders.len()),
            });
        }
        for (i, b) in binders.iter().enumerate() {
            self.bind(b, outcome.ids.get(i).copied());
        }
        Ok(())
    }

    fn object(&self, name: &str) -> EResult<Object> {
        let id = self.id(name)?;
        Ok(lift(self.line, self.c.object(id))?.clone())
    }

    fn number(&self, e: &Expr) -> EResult<ExactReal> {
        let line = self.line;
        let invalid = |message: String| EvalError::Invalid { line, message };
        Ok(match e {
            Expr::Num(s) => parse_literal(s).map_err(|e| invalid(e.to_string()))?,
            Expr::Ref(name) => return Err(invalid(format!("'{name}' is an object, not a number"))),
            Expr::Field(name, field) => match (self.object(name)?, field) {
                (Object::Point(p), Field::X) => p.x,
                (Object::Point(p), Field::Y) => p.y,
                (Object::Line(l), Field::A) => l.a().clone(),
                (Object::Line(l), Field::B) => l.b().clone(),
                (Object::Line(l), Field::C) => l.c().clone(),
                _ => return Err(invalid(format!("'{name}' has no field '{}'", field.name()))),
            },
            Expr::Neg(a) => self.number(a)?.neg(),
            Expr::Bin(op, a, b) => {
                let (a, b) = (self.number(a)?, self.number(b)?);
                match op {
                    BinOp::Add => a.add(&b),
                    BinOp::Sub => a.sub(&b),
                    BinOp::Mul => a.mul(&b),
                    BinOp::Div => self.exact(a.div(&b))?,
                }
            }
            Expr::Pow(a, n) => self.number(a)?.powi(*n),
            Expr::Call(func, args) => match func {
                Func::Sqrt => self.exact(self.number(&args[0])?.sqrt())?,
                Func::Cbrt => self.number(&args[0])?.cbrt(),
                Func::CubicRoot => {
                    let p = self.number(&args[0])?;
                    let q = self.number(&args[1])?;
                    let bound = |e: &Expr| -> EResult<_> {
                        self.number(e)?.as_rational().cloned().ok_or_else(|| invalid("cubicroot bounds must be rational".into()))
                    };
                    self.exact(cubic_root_in(&p, &q, &bound(&args[2])?, &bound(&args[3])?))?
                }
                Func::Slope => {
                    let Expr::Ref(name) = &args[0] else { return Err(invalid("slope takes a line".into())) };
                    let Object::Line(l) = self.object(name)? else { return Err(invalid(format!("'{name}' is not a line"))) };
                    self.geom(l.slope())?.ok_or_else(|| invalid(format!("'{name}' is vertical")))?
                }
            },
        })
    }

    fn value(&self, e: &Expr) -> EResult<Value> {
        match e {
            Expr::Ref(name) => Ok(Value::Obj(self.object(name)?)),
            _ => Ok(Value::Num(self.number(e)?)),
        }
    }

    fn assertion(&mut self, stmt: &Stmt, lhs: &Expr, rel: Relation, rhs: &Expr) -> EResult<()> {
        let (a, b) = (self.value(lhs)?, self.value(rhs)?);
        let passed = match (&a, &b) {
            (Value::Num(x), Value::Num(y)) => {
                let ord = self.exact(x.cmp_exact(y))?;
                match rel {
                    Relation::Eq => ord.is_eq(),
                    Relation::Lt => ord.is_lt(),
                    Relation::Gt => ord.is_gt(),
                }
            }
            (Value::Obj(Object::Point(p)), Value::Obj(Object::Point(q))) => self.geom(p.eq_exact(q))?,
            (Value::Obj(Object::Line(l)), Value::Obj(Object::Line(m))) => self.geom(l.eq_exact(m))?,
            _ => return Err(EvalError::Invalid { line: self.line, message: "cannot compare these values".into() }),
        };
        let text = stmt.to_string();
        if !passed {
            let (lhs, lhs_exact) = self.describe(&a)?;
            let (rhs, rhs_exact) = self.describe(&b)?;
            self.failures.push(EvalError::AssertFailed { line: self.line, assertion: text.clone(), lhs, rhs, lhs_exact, rhs_exact });
        }
        self.assertions.push(AssertionReport { line: self.line, text, passed });
        Ok(())
    }

    /// Decimal and exact renderings of a value.
    fn describe(&self, v: &Value) -> EResult<(String, String)> {
        let nums: Vec<&ExactReal> = match v {
            Value::Num(x) => vec![x],
            Value::Obj(Object::Point(p)) => vec![&p.x, &p.y],
            Value::Obj(Object::Line(l)) => vec![l.a(), l.b(), l.c()],
        };
        let mut dec = Vec::new();
        let mut exact = Vec::new();
        for x in &nums {
            dec.push(self.exact(x.to_decimal(REPORT_DIGITS))?);
            exact.push(tree_text(x));
        }
        Ok(match v {
            Value::Num(_) => (dec.remove(0), exact.remove(0)),
            Value::Obj(Object::Point(_)) => (format!("({})", dec.join(", ")), format!("({})", exact.join(", "))),
            Value::Obj(Object::Line(_)) => (format!("<{}>", dec.join(", ")), format!("<{}>", exact.join(", "))),
        })
    }
}

fn tree_text(x: &ExactReal) -> String {
    if x.tree_size(TREE_LIMIT + 1) > TREE_LIMIT {
        format!("<expression with more than {TREE_LIMIT} nodes>")
    } else {
        x.expr_string()
    }
}
