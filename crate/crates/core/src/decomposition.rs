//! Lattice decompositions of a node and the partial-orthogonality statements
//! they encode.
//!
//! The conditioning sets of node `j` (all subsets of `[d] \ {j}`) split into
//! disjoint neighborhood lattices. [`decompose`] discovers them one at a time:
//! each round asks [`find_uncovered`] for a set outside every interval found
//! so far and computes the lattice through it. Once the decomposition is
//! known, every statement `i ⊥ j | T` is read off by [`enumerate_po`] without
//! further numerical work.

use crate::error::{Error, Result};
use crate::gram::GramMatrix;
use crate::lattice::{compute_lattice, NeighborhoodLattice};
use crate::subset::{Members, Subset, Submasks};

/// Disjoint intervals covering `2^([d] \ {node})`, in discovery order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeDecomposition {
    pub node: usize,
    pub d: usize,
    pub intervals: Vec<NeighborhoodLattice>,
    /// Total SEM solves spent computing the intervals.
    pub projections: usize,
}

impl LatticeDecomposition {
    /// Number of lattices, `K_j`.
    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    /// `Σ_k 2^(|M^k|−|m^k|)`.
    pub fn covered_count(&self) -> u128 {
        self.intervals.iter().map(|l| l.size() as u128).sum()
    }

    /// True iff the interval sizes add up to `2^(d−1)` and no two intervals
    /// share a set.
    pub fn is_partition(&self) -> bool {
        let disjoint = self.intervals.iter().enumerate().all(|(a, x)| {
            self.intervals[a + 1..]
                .iter()
                .all(|y| !x.intersects(y))
        });
        disjoint && self.covered_count() == 1u128 << (self.d - 1)
    }

    /// The interval containing conditioning set `t`.
    pub fn lattice_of(&self, t: Subset) -> Option<&NeighborhoodLattice> {
        self.intervals.iter().find(|l| l.holds(t))
    }

    /// Intervals sorted by `(min_set, max_set)`, for order-insensitive comparison.
    pub fn sorted_intervals(&self) -> Vec<(Subset, Subset)> {
        let mut v: Vec<(Subset, Subset)> = self
            .intervals
            .iter()
            .map(|l| (l.min_set, l.max_set))
            .collect();
        v.sort();
        v
    }

    /// Largest active set size over the decomposition, `max_k |m^k|`.
    pub fn max_active_set(&self) -> usize {
        self.intervals.iter().map(|l| l.min_set.len()).max().unwrap_or(0)
    }
}

/// Result of the uncovered-set search.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Coverage {
    Covered,
    Uncovered(Subset),
}

/// [`Coverage`] plus the number of interval evaluations `Q_ℓ(S)` performed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CoverageSearch {
    pub coverage: Coverage,
    pub evaluations: usize,
}

/// Decides whether disjoint intervals cover `2^([d] \ {j})`, producing an
/// uncovered set otherwise.
///
/// `Q(S)` counts the covered sets containing `S`:
/// `Q(S) = Σ_ℓ [S ⊆ M^ℓ] · 2^{|(M^ℓ \ m^ℓ) \ S|}`. A set `S` with
/// `Q(S) < 2^{r−|S|}` (`r = d − 1`) has an uncovered superset; the search grows
/// such an `S` by the lowest index that keeps the inequality, until `Q(S) = 0`
/// or `|S| = r − 1`, where exactly one of `S` and the ground set is covered.
pub fn find_uncovered(d: usize, j: usize, intervals: &[NeighborhoodLattice]) -> Result<Coverage> {
    find_uncovered_counted(d, j, intervals).map(|c| c.coverage)
}

pub fn find_uncovered_counted(
    d: usize,
    j: usize,
    intervals: &[NeighborhoodLattice],
) -> Result<CoverageSearch> {
    if d == 0 || d > crate::subset::MAX_DIM {
        return Err(Error::DimensionTooLarge {
            d,
            max: crate::subset::MAX_DIM,
        });
    }
    if j >= d {
        return Err(Error::IndexOutOfRange { index: j, d });
    }
    let ground = Subset::ground(d, j);
    for l in intervals {
        if l.node != j || !l.max_set.is_subset_of(ground) || !l.min_set.is_subset_of(l.max_set)
        {
            return Err(Error::SetOutOfRange {
                set: l.max_set,
                d,
            });
        }
    }
    let r = d - 1;
    let mut evaluations = 0usize;
    let bound = |s: Subset| -> u128 { 1u128 << (r - s.len()) };
    // Q(S) only involves intervals with S ⊆ M; keep that list as S grows.
    let q = |s: Subset, pool: &[&NeighborhoodLattice], evaluations: &mut usize| -> u128 {
        *evaluations += pool.len();
        pool.iter()
            .filter(|l| s.is_subset_of(l.max_set))
            .map(|l| 1u128 << (l.free() - s).len())
            .sum()
    };
    let mut pool: Vec<&NeighborhoodLattice> = intervals.iter().collect();

    let total = q(Subset::EMPTY, &pool, &mut evaluations);
    if total == bound(Subset::EMPTY) {
        return Ok(CoverageSearch {
            coverage: Coverage::Covered,
            evaluations,
        });
    }
    if total > bound(Subset::EMPTY) {
        return Err(Error::OverlappingIntervals {
            count: total,
            total: bound(Subset::EMPTY),
        });
    }

    let mut s = Subset::EMPTY;
    let mut qs = total;
    let found = loop {
        if qs == 0 {
            break s;
        }
        if r >= 1 && s.len() == r - 1 {
            // Q(S) = 1: either S itself or the ground set is the covered superset.
            let s_covered = pool.iter().any(|l| l.holds(s));
            break if s_covered { ground } else { s };
        }
        let next = (ground - s).iter().find_map(|i| {
            let t = s.with(i);
            let qt = q(t, &pool, &mut evaluations);
            (qt < bound(t)).then_some((t, qt))
        });
        match next {
            Some((t, qt)) => {
                s = t;
                qs = qt;
                pool.retain(|l| s.is_subset_of(l.max_set));
            }
            // every strict superset of S is covered, so S is not
            None => break s,
        }
    };
    Ok(CoverageSearch {
        coverage: Coverage::Uncovered(found),
        evaluations,
    })
}

/// Full lattice decomposition of node `j`.
///
/// Seeds with the lattice of the full conditioning set `[d] \ {j}` and then
/// alternates [`find_uncovered`] and [`compute_lattice`] until covered.
pub fn decompose(g: &GramMatrix, j: usize) -> Result<LatticeDecomposition> {
    g.check_index(j)?;
    let d = g.d();
    let first = compute_lattice(g, j, Subset::ground(d, j))?;
    let mut intervals = vec![first.lattice];
    let mut projections = first.projections;
    loop {
        let s = match find_uncovered(d, j, &intervals)? {
            Coverage::Covered => break,
            Coverage::Uncovered(s) => s,
        };
        let c = compute_lattice(g, j, s)?;
        if !c.lattice.holds(s) {
            return Err(Error::InconsistentDecomposition {
                node: j,
                detail: format!("lattice {:?}..{:?} misses its seed {s:?}", c.lattice.min_set, c.lattice.max_set),
            });
        }
        if let Some(other) = intervals.iter().find(|l| l.intersects(&c.lattice)) {
            return Err(Error::InconsistentDecomposition {
                node: j,
                detail: format!(
                    "lattice [{:?}, {:?}] overlaps [{:?}, {:?}]",
                    c.lattice.min_set, c.lattice.max_set, other.min_set, other.max_set
                ),
            });
        }
        projections += c.projections;
        intervals.push(c.lattice);
    }
    Ok(LatticeDecomposition {
        node: j,
        d,
        intervals,
        projections,
    })
}

/// The statement `j ⊥ i | T` (with `T ∩ {i, j} = ∅`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PoStatement {
    pub j: usize,
    pub i: usize,
    pub t: Subset,
}

/// Lazily lists every statement `j ⊥ i | T` encoded by a decomposition:
/// for each interval `[m, M]`, each `i ∈ M \ m`, and each `T ∈ [m, M \ {i}]`.
///
/// Order: interval order, then ascending `i`, then ascending bitmask of `T`.
pub fn enumerate_po(dec: &LatticeDecomposition) -> PoStream<'_> {
    let pending = dec
        .intervals
        .first()
        .map(|l| l.free().iter())
        .unwrap_or_else(|| Subset::EMPTY.iter());
    PoStream {
        dec,
        k: 0,
        pending,
        current: None,
    }
}

pub struct PoStream<'a> {
    dec: &'a LatticeDecomposition,
    k: usize,
    pending: Members,
    current: Option<(usize, Submasks)>,
}

impl Iterator for PoStream<'_> {
    type Item = PoStatement;

    fn next(&mut self) -> Option<PoStatement> {
        loop {
            if let Some((i, subs)) = &mut self.current {
                if let Some(sub) = subs.next() {
                    return Some(PoStatement {
                        j: self.dec.node,
                        i: *i,
                        t: self.dec.intervals[self.k].min_set | sub,
                    });
                }
                self.current = None;
            }
            if let Some(i) = self.pending.next() {
                let free = self.dec.intervals[self.k].free().without(i);
                self.current = Some((i, free.subsets()));
                continue;
            }
            self.k += 1;
            let lat = self.dec.intervals.get(self.k)?;
            self.pending = lat.free().iter();
        }
    }
}

/// `Σ_k (|M^k|−|m^k|) · 2^(|M^k|−|m^k|−1)`.
pub fn count_po(dec: &LatticeDecomposition) -> u128 {
    dec.intervals
        .iter()
        .map(|l| {
            let w = l.width();
            if w == 0 {
                0
            } else {
                w as u128 * (1u128 << (w - 1))
            }
        })
        .sum()
}

/// Number of candidate statements `j ⊥ i | T` for one node: `(d−1)·2^(d−2)`.
pub fn candidate_po_count(d: usize) -> u128 {
    if d < 2 {
        0
    } else {
        (d as u128 - 1) * (1u128 << (d - 2))
    }
}
