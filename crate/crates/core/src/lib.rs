//! Exact engine for p-automatic ordinary and generalized power series in
//! characteristic p: finite automata with output, Frobenius-semilinear
//! composed functions, the Christol correspondence, Hahn-series solvers and
//! zero sets.

pub mod base_p_codec;
pub mod christol;
pub mod cli;
pub mod coeff_fields;
pub mod dfao_engine;
pub mod error;
pub mod hahn_solver;
pub mod semilinear;
pub mod series_core;
pub mod twist_recurrence;
pub mod zero_sets;

pub use error::{Error, Result};
