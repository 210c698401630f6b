use std::fmt;

use crate::folds::{Axiom, Level};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Field {
    X,
    Y,
    A,
    B,
    C,
}

impl Field {
    pub fn name(self) -> &'static str {
        match self {
            Field::X => "x",
            Field::Y => "y",
            Field::A => "a",
            Field::B => "b",
            Field::C => "c",
        }
    }

    pub fn of_point(self) -> bool {
        matches!(self, Field::X | Field::Y)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Func {
    Sqrt,
    Cbrt,
    /// `cubicroot(p, q, lo, hi)`: the root of `t^3 + p t + q` in `[lo, hi]`.
    CubicRoot,
    /// Slope of a non-vertical line.
    Slope,
}

impl Func {
    pub fn name(self) -> &'static str {
        match self {
            Func::Sqrt => "sqrt",
            Func::Cbrt => "cbrt",
            Func::CubicRoot => "cubicroot",
            Func::Slope => "slope",
        }
    }

    pub fn arity(self) -> usize {
        match self {
            Func::CubicRoot => 4,
            _ => 1,
        }
    }

    pub fn from_name(s: &str) -> Option<Func> {
        Some(match s {
            "sqrt" => Func::Sqrt,
            "cbrt" => Func::Cbrt,
            "cubicroot" => Func::CubicRoot,
            "slope" => Func::Slope,
            _ => return None,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    /// Numeric literal as written (`3`, `0.25`).
    Num(String),
    /// A bound object, only as a whole side of an equality assertion or a `slope` argument.
    Ref(String),
    Field(String, Field),
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
    Call(Func, Vec<Expr>),
}

const ADD: u8 = 1;
const MUL: u8 = 2;
const UNARY: u8 = 3;
const ATOM: u8 = 5;

impl Expr {
    fn precedence(&self) -> u8 {
        match self {
            Expr::Bin(BinOp::Add | BinOp::Sub, ..) => ADD,
            Expr::Bin(..) => MUL,
            Expr::Neg(_) => UNARY,
            Expr::Pow(..) => 4,
            _ => ATOM,
        }
    }

    fn write(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        if self.precedence() < min {
            write!(f, "(")?;
            self.write(f, 0)?;
            return write!(f, ")");
        }
        match self {
            Expr::Num(s) | Expr::Ref(s) => f.write_str(s),
            Expr::Field(id, field) => write!(f, "{id}.{}", field.name()),
            Expr::Neg(e) => {
                write!(f, "-")?;
                e.write(f, UNARY)
            }
            Expr::Bin(op, a, b) => {
                let (sym, level) = match op {
                    BinOp::Add => ("+", ADD),
                    BinOp::Sub => ("-", ADD),
                    BinOp::Mul => ("*", MUL),
                    BinOp::Div => ("/", MUL),
                };
                a.write(f, level)?;
                write!(f, " {sym} ")?;
                b.write(f, level + 1)
            }
            Expr::Pow(base, n) => {
                base.write(f, ATOM)?;
                write!(f, "^{n}")
            }
            Expr::Call(func, args) => {
                write!(f, "{}(", func.name())?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    a.write(f, 0)?;
                }
                write!(f, ")")
            }
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write(f, 0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Eq,
    Lt,
    Gt,
}

impl Relation {
    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Eq => "==",
            Relation::Lt => "<",
            Relation::Gt => ">",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LineDef {
    Through(String, String),
    Bisector(String, String),
    Coeffs(Expr, Expr, Expr),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MacroKind {
    /// `translate P A B`: the point `P + (B - A)`.
    Translate,
    /// `scale A B C P`: with `B - A = k (C - A)`, the point `A + k (P - A)`.
    Scale,
    /// `marklen A B O R`: the point on ray `OR` at distance `|AB|` from `O`.
    MarkLength,
}

impl MacroKind {
    pub fn name(self) -> &'static str {
        match self {
            MacroKind::Translate => "translate",
            MacroKind::Scale => "scale",
            MacroKind::MarkLength => "marklen",
        }
    }

    pub fn arity(self) -> usize {
        match self {
            MacroKind::Translate => 3,
            _ => 4,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Stmt {
    Level(Level),
    Point { name: String, x: Expr, y: Expr },
    Line { name: String, def: LineDef },
    Meet { name: String, l: String, m: String },
    /// Arguments in source order: O1/O3 `P Q`, O2/O4 `l m`, O5 `P l Q`, O6 `P l Q m`.
    Fold { axiom: Axiom, args: Vec<String>, binders: Vec<String>, optional: bool },
    Macro { kind: MacroKind, args: Vec<String>, binder: String },
    Assert { lhs: Expr, rel: Relation, rhs: Expr },
}

impl fmt::Display for Stmt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Stmt::Level(l) => write!(f, "level {l}"),
            Stmt::Point { name, x, y } => write!(f, "point {name} = ({x}, {y})"),
            Stmt::Line { name, def } => match def {
                LineDef::Through(p, q) => write!(f, "line {name} = through {p} {q}"),
                LineDef::Bisector(p, q) => write!(f, "line {name} = bisector {p} {q}"),
                LineDef::Coeffs(a, b, c) => write!(f, "line {name} = <{a}, {b}, {c}>"),
            },
            Stmt::Meet { name, l, m } => write!(f, "point {name} = meet {l} {m}"),
            Stmt::Fold { axiom, args, binders, optional } => {
                write!(f, "fold {axiom} ")?;
                match (axiom, args.as_slice()) {
                    (Axiom::O5, [p, l, q]) => write!(f, "{p} -> {l} through {q}")?,
                    (Axiom::O6, [p, l, q, m]) => write!(f, "{p} -> {l}, {q} -> {m}")?,
                    _ => write!(f, "{}", args.join(" "))?,
                }
                write!(f, " as {}", binders.join(", "))?;
                if *optional {
                    write!(f, "?")?;
                }
                Ok(())
            }
            Stmt::Macro { kind, args, binder } => {
                write!(f, "macro {} {} as {binder}", kind.name(), args.join(" "))
            }
            Stmt::Assert { lhs, rel, rhs } => write!(f, "assert {lhs} {} {rhs}", rel.symbol()),
        }
    }
}

/// A parsed script. Equality compares statements only, not source lines.
#[derive(Clone, Debug)]
pub struct Program {
    pub statements: Vec<Stmt>,
    /// Source line of each statement.
    pub lines: Vec<usize>,
}

impl Program {
    /// The declared level, if any.
    pub fn level(&self) -> Option<Level> {
        match self.statements.first() {
            Some(Stmt::Level(l)) => Some(*l),
            _ => None,
        }
    }
}

impl PartialEq for Program {
    fn eq(&self, other: &Program) -> bool {
        self.statements == other.statements
    }
}

impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.statements {
            writeln!(f, "{s}")?;
        }
        Ok(())
    }
}
