//! Exact-arithmetic toolkit for infinite-valued Łukasiewicz logic.
//!
//! Formulas compile to McNaughton functions represented as rational
//! piecewise-linear functions over the unit cube. On top of that sit
//! semantic and stable consequence, differential valuations with their
//! prime ideals, and tangent checks for model sets. All arithmetic is exact.

pub mod consequence;
pub mod diffval;
pub mod error;
pub mod formula;
pub mod geometry;
pub mod io;
pub mod pl;
pub mod rat;
pub mod synth;
pub mod tangent;

pub use consequence::{ConsequenceReport, Theory, Verdict};
pub use diffval::{DifferentialValuation, Validity};
pub use error::{Error, ParseError, Result};
pub use formula::{parse, Formula, VariableSet};
pub use geometry::{AffineFn, Point, Polyhedron};
pub use pl::{compile, eval_formula, PLFunction, RegionUnion};
pub use rat::Rat;
pub use tangent::{ClosedSetDescription, PointSequence};
