//! Exact origami constructions: lazy exact reals, the six fold axioms,
//! conic pencils, cubic and quartic solvers, field classifiers and a small
//! construction language.

pub mod exactnum;
pub mod geom;
pub mod folds;
pub mod conics;
pub mod solvers;
pub mod fields;
pub mod script;
