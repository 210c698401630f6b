//! The six fold axioms, derived construction macros, and construction traces.

mod axioms;
mod engine;
mod trace;

use std::fmt;
use std::str::FromStr;

pub use axioms::{o1, o2, o3, o4, o5, o5_degenerate, o6, sort_lines, FoldResult};
pub use engine::{Construction, FoldOutcome};
pub use trace::{Object, ObjId, Step, Trace};

use crate::exactnum::ExactError;
use crate::geom::GeomError;

/// A fold axiom (or its degenerate variant used for axiom-basis reductions).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Axiom {
    O1,
    O2,
    O3,
    O4,
    O5,
    O6,
}

impl Axiom {
    pub const ALL: [Axiom; 6] = [Axiom::O1, Axiom::O2, Axiom::O3, Axiom::O4, Axiom::O5, Axiom::O6];

    pub fn name(self) -> &'static str {
        match self {
            Axiom::O1 => "O1",
            Axiom::O2 => "O2",
            Axiom::O3 => "O3",
            Axiom::O4 => "O4",
            Axiom::O5 => "O5",
            Axiom::O6 => "O6",
        }
    }
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Which axioms an engine may use.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Level {
    /// O1-O3
    Thalian,
    /// O1-O4
    Pythagorean,
    /// O1-O5
    Euclidean,
    /// O1-O6
    Origami,
    /// O2, O3, O5, O6
    Reduced,
}

impl Level {
    pub fn allows(self, axiom: Axiom) -> bool {
        use Axiom::*;
        match self {
            Level::Thalian => matches!(axiom, O1 | O2 | O3),
            Level::Pythagorean => matches!(axiom, O1 | O2 | O3 | O4),
            Level::Euclidean => !matches!(axiom, O6),
            Level::Origami => true,
            Level::Reduced => matches!(axiom, O2 | O3 | O5 | O6),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Level::Thalian => "thalian",
            Level::Pythagorean => "pythagorean",
            Level::Euclidean => "euclidean",
            Level::Origami => "origami",
            Level::Reduced => "reduced",
        }
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Level {
    type Err = String;
    fn from_str(s: &str) -> Result<Level, String> {
        match s.to_ascii_lowercase().as_str() {
            "thalian" => Ok(Level::Thalian),
            "pythagorean" => Ok(Level::Pythagorean),
            "euclidean" => Ok(Level::Euclidean),
            "origami" => Ok(Level::Origami),
            "reduced" => Ok(Level::Reduced),
            _ => Err(format!("unknown level '{s}'")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum FoldError {
    #[error("axiom {axiom} is not available at level {level}")]
    AxiomNotAvailable { axiom: Axiom, level: Level },
    #[error("focus lies on the directrix")]
    DegenerateParabola,
    #[error("the two parabolas are identical")]
    IdenticalParabolas,
    #[error("points are not collinear")]
    NotCollinear,
    #[error("ratio is undefined (A = C)")]
    DegenerateRatio,
    #[error("no constructed point lies off the line")]
    NoAuxiliaryPoint,
    #[error("no solution: {0}")]
    NoSolution(String),
    #[error("object {0} does not exist")]
    UnknownObject(ObjId),
    #[error("object {id} is not a {expected}")]
    WrongKind { id: ObjId, expected: &'static str },
    #[error("cannot replay step {index}: {message}")]
    Replay { index: usize, message: String },
    #[error(transparent)]
    Geom(GeomError),
    #[error(transparent)]
    Exact(ExactError),
}

impl From<GeomError> for FoldError {
    fn from(e: GeomError) -> Self {
        match e {
            GeomError::Exact(x) => FoldError::Exact(x),
            other => FoldError::Geom(other),
        }
    }
}

impl From<ExactError> for FoldError {
    fn from(e: ExactError) -> Self {
        FoldError::Exact(e)
    }
}

