//! Graded free modules, homogeneous matrices and bounded windows of chain
//! complexes over `S` or a quotient `S/I`, with homology computed degree by
//! degree.

mod base;
mod complex;
mod graded;
mod matrix;
pub mod serial;

use thiserror::Error;

pub use base::{BaseRing, DegreeBasis};
pub use complex::{check_chain_map, dual, mapping_cone, shift, Boundary, ChainComplex, ChainMap};
pub use graded::{
    graded_dense, graded_piece, graded_rank, homology_dims, homology_table, induced_rank, InducedRank,
    PieceLayout,
};
pub use matrix::{GradedFreeModule, PolyMatrix};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ComplexError {
    #[error("map at position {position} has shape {found:?}, expected {expected:?}")]
    ShapeMismatch {
        position: i32,
        expected: (usize, usize),
        found: (usize, usize),
    },
    #[error("entry ({row}, {col}) of the map at position {position} is not homogeneous of degree {expected}")]
    DegreeMismatch {
        position: i32,
        row: usize,
        col: usize,
        expected: i32,
    },
    #[error("d_{} d_{position} is nonzero at ({row}, {col}): {entry}", position - 1)]
    NotAComplex {
        position: i32,
        row: usize,
        col: usize,
        entry: String,
    },
    #[error("chain map square at position {position} fails at ({row}, {col}): {entry}")]
    NotAChainMap {
        position: i32,
        row: usize,
        col: usize,
        entry: String,
    },
    #[error("chain map has no component at position {position}")]
    MissingComponent { position: i32 },
    #[error("position {position} needs terms outside the stored window")]
    WindowEdge { position: i32 },
    #[error("complexes live over different rings")]
    RingMismatch,
    #[error("empty window")]
    EmptyWindow,
    #[error("malformed complex: {0}")]
    Malformed(String),
}

#[cfg(test)]
mod tests;
