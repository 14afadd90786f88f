//! Frobenius-semilinear algebra: maps, composed functions, biautomatic data,
//! the automaton bridge, affine reindexing and minimal realizations.

pub mod biauto;
pub mod maps;
pub mod realize;
pub mod relation;

pub use biauto::{dfao_to_series, pad_normalize, BiautomaticData, STATE_CAP};
pub use maps::{reverse_composed, tensor, transpose, AutocomposedFunction, ComposedFunction, PotentiallyComposed, SemilinearMap};
pub use relation::{affine_reindex, affine_reindex_dfao, relation_dfao};
