//! Neighborhood lattices: the interval `[m, M]` of conditioning sets that
//! leave the projection of a node unchanged.

use crate::error::{Error, Result};
use crate::gram::GramMatrix;
use crate::subset::Subset;

/// The interval `[min_set, max_set]` of conditioning sets for `node`.
///
/// Every `T` with `min_set ⊆ T ⊆ max_set` yields the same SEM coefficients,
/// whose support is `min_set`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NeighborhoodLattice {
    pub node: usize,
    pub min_set: Subset,
    pub max_set: Subset,
}

impl NeighborhoodLattice {
    /// Checks `node ∉ max_set` and `min_set ⊆ max_set`.
    pub fn new(node: usize, min_set: Subset, max_set: Subset) -> Result<Self> {
        if max_set.contains(node) {
            return Err(Error::NodeInSet {
                node,
                set: max_set,
            });
        }
        if !min_set.is_subset_of(max_set) {
            return Err(Error::InvertedInterval {
                min: min_set,
                max: max_set,
            });
        }
        Ok(NeighborhoodLattice {
            node,
            min_set,
            max_set,
        })
    }

    /// `M \ m`: the elements that may be freely added to `m`.
    #[inline]
    pub fn free(&self) -> Subset {
        self.max_set - self.min_set
    }

    /// `|M| − |m|`.
    #[inline]
    pub fn width(&self) -> usize {
        self.free().len()
    }

    /// Number of sets in the interval, `2^(|M|−|m|)`.
    #[inline]
    pub fn size(&self) -> u64 {
        1u64 << self.width()
    }

    /// Interval membership `m ⊆ t ⊆ M`.
    pub fn contains(&self, t: Subset) -> Result<bool> {
        if t.contains(self.node) {
            return Err(Error::NodeInSet {
                node: self.node,
                set: t,
            });
        }
        Ok(self.holds(t))
    }

    #[inline]
    pub(crate) fn holds(&self, t: Subset) -> bool {
        self.min_set.is_subset_of(t) && t.is_subset_of(self.max_set)
    }

    /// Two intervals share a set iff `m₁ ∪ m₂ ⊆ M₁ ∩ M₂`.
    pub fn intersects(&self, other: &NeighborhoodLattice) -> bool {
        (self.min_set | other.min_set).is_subset_of(self.max_set & other.max_set)
    }

    /// All member sets, ascending bitmask order.
    pub fn members(&self) -> impl Iterator<Item = Subset> + '_ {
        let m = self.min_set;
        self.free().subsets().map(move |f| f | m)
    }
}

/// Order in which candidates are proposed while growing the maximal set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum ScanOrder {
    #[default]
    Ascending,
    Descending,
}

/// A computed lattice plus the number of SEM solves it took.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LatticeComputation {
    pub lattice: NeighborhoodLattice,
    pub projections: usize,
}

/// Computes the neighborhood lattice of node `j` containing `s`.
///
/// `m` is the support of `β_j(s)`; `M` starts at `s` and absorbs each
/// remaining candidate `k` iff `β_j(M ∪ {k})` keeps support `m`.
pub fn compute_lattice(g: &GramMatrix, j: usize, s: Subset) -> Result<LatticeComputation> {
    compute_lattice_ordered(g, j, s, ScanOrder::Ascending)
}

pub fn compute_lattice_ordered(
    g: &GramMatrix,
    j: usize,
    s: Subset,
    order: ScanOrder,
) -> Result<LatticeComputation> {
    g.check_index(j)?;
    g.check_set(s)?;
    if s.contains(j) {
        return Err(Error::NodeInSet { node: j, set: s });
    }
    let min_set = g.support_of(j, s);
    let mut projections = 1;
    let mut max_set = s;
    let candidates = Subset::ground(g.d(), j) - s;
    let mut propose = |k: usize| {
        let proposal = max_set.with(k);
        projections += 1;
        if g.support_of(j, proposal) == min_set {
            max_set = proposal;
        }
    };
    match order {
        ScanOrder::Ascending => candidates.iter().for_each(&mut propose),
        ScanOrder::Descending => {
            let mut v: Vec<usize> = candidates.iter().collect();
            v.reverse();
            v.into_iter().for_each(&mut propose)
        }
    }
    Ok(LatticeComputation {
        lattice: NeighborhoodLattice {
            node: j,
            min_set,
            max_set,
        },
        projections,
    })
}
