//! Neighborhood lattices and partial orthogonality for positive-definite Gram
//! matrices.
//!
//! For a node `j`, the conditioning sets `T ⊆ [d] \ {j}` that give the same
//! projection coefficients `β_j(T)` form intervals `[m, M]` of the Boolean
//! lattice. [`compute_lattice`] finds the interval through a given set with at
//! most `d` projections, [`decompose`] partitions all `2^(d−1)` sets into such
//! intervals, and [`enumerate_po`] lists every statement `i ⊥ j | T` implied
//! by the partition without touching the matrix again.
//!
//! Graph-based shortcuts ([`pcg`], [`graphical_lattice`],
//! [`component_lattices`]) apply when the matrix is perfect with respect to
//! its partial correlation graph. [`recursive_projection`] builds directed
//! SEM factorizations. The [`oracle`] module holds exhaustive reference
//! implementations.
//!
//! Indices are 0-based in the API; the [`io`] module and the `Display` impls
//! use 1-based indices.

mod error;
mod linalg;
mod subset;

pub mod decomposition;
pub mod directed;
pub mod gram;
pub mod io;
pub mod lattice;
pub mod oracle;
pub mod pcg;
pub mod random;

pub use decomposition::{
    candidate_po_count, count_po, decompose, enumerate_po, find_uncovered, find_uncovered_counted,
    Coverage, CoverageSearch, LatticeDecomposition, PoStatement, PoStream,
};
pub use directed::{
    cholesky_correspondence, recursive_projection, verify_directed_pcg, verify_sem_identity,
    DirectedCheck, SemFactorization,
};
pub use error::{Error, Result};
pub use gram::{GramMatrix, SchurTest, SemCoefficients, Tolerances};
pub use lattice::{
    compute_lattice, compute_lattice_ordered, LatticeComputation, NeighborhoodLattice, ScanOrder,
};
pub use pcg::{
    check_perfect, component_lattices, graphical_lattice, minimal_separator, pcg, separates,
    ComponentLattice, ComponentLattices, Pcg, PerfectnessCheck, PERFECT_MAX_D,
};
pub use subset::{Members, Submasks, Subset, MAX_DIM};
