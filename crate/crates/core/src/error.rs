use thiserror::Error;

use crate::subset::Subset;

/// Errors raised by the library. Indices carried in variants are 0-based;
/// the `Display` impls print them 1-based.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not square: {rows} rows, row {row} has {cols} entries")]
    NotSquare { rows: usize, row: usize, cols: usize },

    #[error("matrix is empty")]
    EmptyMatrix,

    #[error("matrix is not symmetric at ({}, {}): gap {gap:e}", .i + 1, .j + 1)]
    Asymmetric { i: usize, j: usize, gap: f64 },

    #[error("matrix is not positive definite (Cholesky pivot {} failed)", .pivot + 1)]
    NotPositiveDefinite { pivot: usize },

    #[error("non-finite entry at ({}, {})", .i + 1, .j + 1)]
    NonFinite { i: usize, j: usize },

    #[error("dimension {d} exceeds the supported maximum {max}")]
    DimensionTooLarge { d: usize, max: usize },

    #[error("dimension {d} is below the required minimum {min}")]
    DimensionTooSmall { d: usize, min: usize },

    #[error("sample is empty")]
    EmptySample,

    #[error("observation {row} has {len} components, expected {d}")]
    RaggedSample { row: usize, len: usize, d: usize },

    #[error("index {} is out of range for dimension {d}", .index + 1)]
    IndexOutOfRange { index: usize, d: usize },

    #[error("set {set:?} is not contained in the variable range of dimension {d}")]
    SetOutOfRange { set: Subset, d: usize },

    #[error("node {} is contained in the conditioning set {set:?}", .node + 1)]
    NodeInSet { node: usize, set: Subset },

    #[error("interval minimum {min:?} is not contained in its maximum {max:?}")]
    InvertedInterval { min: Subset, max: Subset },

    #[error("sets are not pairwise disjoint")]
    SetsNotDisjoint,

    #[error("endpoint set of a partial-orthogonality query is empty")]
    EmptyEndpoint,

    #[error("scale entry {} is zero", .index + 1)]
    ZeroScale { index: usize },

    #[error("scale vector has length {len}, expected {d}")]
    ScaleLength { len: usize, d: usize },

    #[error("interval family overlaps: it counts {count} sets of a power set of size {total}")]
    OverlappingIntervals { count: u128, total: u128 },

    #[error("numerical inconsistency while decomposing node {}: {detail}", .node + 1)]
    InconsistentDecomposition { node: usize, detail: String },

    #[error("equivalence class for node {} is not an interval: {detail}", .node + 1)]
    ClassNotInterval { node: usize, detail: String },

    #[error("conditioning set of size {len} exceeds the limit {max}")]
    SetTooLarge { len: usize, max: usize },

    #[error("not a permutation of 1..={d}")]
    NotAPermutation { d: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("parent sets contain a directed cycle")]
    CyclicGraph,

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
