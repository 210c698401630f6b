//! A line-oriented construction language driving the fold engine.
//!
//! ```text
//! level euclidean
//! point F = (0, 1)
//! line d = <0, 1, 1>
//! point A = (0, -1/2)
//! fold O5 F -> d through A as f1, f2
//! assert f2.b == -1
//! ```

mod ast;
mod eval;
mod parse;

pub use ast::{BinOp, Expr, Field, Func, LineDef, MacroKind, Program, Relation, Stmt};
pub use eval::{eval, eval_at, AssertionReport, EvalError, Evaluation};
pub use parse::{parse, SourceError};

use std::fmt;

/// Either failure of [`run`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ScriptError {
    Source(SourceError),
    Eval(EvalError),
}

impl fmt::Display for ScriptError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScriptError::Source(e) => e.fmt(f),
            ScriptError::Eval(e) => e.fmt(f),
        }
    }
}

impl std::error::Error for ScriptError {}

impl From<SourceError> for ScriptError {
    fn from(e: SourceError) -> Self {
        ScriptError::Source(e)
    }
}

impl From<EvalError> for ScriptError {
    fn from(e: EvalError) -> Self {
        ScriptError::Eval(e)
    }
}

/// Parse and evaluate; assertion failures are reported in the result, not as errors.
pub fn run(text: &str) -> Result<Evaluation, ScriptError> {
    Ok(eval(&parse(text)?)?)
}

/// Canonical source text of a program, one statement per line.
pub fn pretty(p: &Program) -> String {
    p.to_string()
}
