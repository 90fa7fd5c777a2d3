//! Exhaustive reference implementations.
//!
//! These enumerate every conditioning set (or every triple of sets) and are
//! meant for cross-checking the fast algorithms on small instances. They use
//! only the Gram-level primitives and never the lattice machinery.

use std::collections::HashMap;

use crate::decomposition::{LatticeDecomposition, PoStatement};
use crate::error::{Error, Result};
use crate::gram::GramMatrix;
use crate::lattice::NeighborhoodLattice;
use crate::pcg::Pcg;
use crate::subset::Subset;

/// Dimension cap for the per-node sweeps.
pub const ORACLE_MAX_D: usize = 16;
/// Dimension cap for [`brute_check_perfect`], which visits `4^d` triples.
pub const ORACLE_PERFECT_MAX_D: usize = 8;
/// Size cap for the conditioning set in [`brute_minimal_separators`].
pub const ORACLE_MAX_SET: usize = 20;

/// Coefficient vectors in one class must agree to this relative tolerance.
const COEF_TOL: f64 = 1e-8;

struct Class {
    first: Subset,
    values: Vec<f64>,
    meet: Subset,
    join: Subset,
    count: u64,
}

/// Groups every `T ⊆ [d] \ {j}` by the support of `β_j(T)` and checks that
/// each class is an interval `[support, ∪ T]` of identical coefficient
/// vectors. Intervals are listed in the order their smallest member appears.
pub fn brute_decompose(g: &GramMatrix, j: usize) -> Result<LatticeDecomposition> {
    let d = g.d();
    if d > ORACLE_MAX_D {
        return Err(Error::DimensionTooLarge { d, max: ORACLE_MAX_D });
    }
    g.check_index(j)?;
    let mut classes: Vec<Class> = Vec::new();
    let mut by_support: HashMap<Subset, usize> = HashMap::new();
    let mut solves = 0;
    for t in Subset::ground(d, j).subsets() {
        let beta = g.sem_coefficients(j, t)?;
        solves += 1;
        match by_support.get(&beta.support) {
            Some(&c) => {
                let class = &mut classes[c];
                let scale = 1.0 + class.values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
                let gap = class
                    .values
                    .iter()
                    .zip(&beta.values)
                    .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
                if gap > COEF_TOL * scale {
                    return Err(Error::ClassNotInterval {
                        node: j,
                        detail: format!(
                            "sets {:?} and {t:?} share support {:?} but coefficients differ by {gap:e}",
                            class.first, beta.support
                        ),
                    });
                }
                class.meet = class.meet & t;
                class.join = class.join | t;
                class.count += 1;
            }
            None => {
                by_support.insert(beta.support, classes.len());
                classes.push(Class {
                    first: t,
                    values: beta.values,
                    meet: t,
                    join: t,
                    count: 1,
                });
            }
        }
    }
    let mut intervals = Vec::with_capacity(classes.len());
    for (support, &c) in by_support.iter() {
        let class = &classes[c];
        let width = (class.join - class.meet).len();
        if class.meet != *support || class.count != 1u64 << width {
            return Err(Error::ClassNotInterval {
                node: j,
                detail: format!(
                    "support {support:?}: meet {:?}, join {:?}, {} members",
                    class.meet, class.join, class.count
                ),
            });
        }
    }
    classes.sort_by_key(|c| c.first);
    for class in &classes {
        intervals.push(NeighborhoodLattice::new(j, class.meet, class.join)?);
    }
    Ok(LatticeDecomposition {
        node: j,
        d,
        intervals,
        projections: solves,
    })
}

/// Every statement `j ⊥ i | T` found by testing each `(i, T)` directly,
/// sorted by `(i, T)`.
pub fn brute_enumerate_po(g: &GramMatrix, j: usize) -> Result<Vec<PoStatement>> {
    let d = g.d();
    if d > ORACLE_MAX_D {
        return Err(Error::DimensionTooLarge { d, max: ORACLE_MAX_D });
    }
    g.check_index(j)?;
    let mut out = Vec::new();
    for i in (0..d).filter(|&i| i != j) {
        let rest = Subset::ground(d, j).without(i);
        for t in rest.subsets() {
            let test = g.po_schur(Subset::singleton(i), t, Subset::singleton(j))?;
            if test.holds {
                out.push(PoStatement { j, i, t });
            }
        }
    }
    Ok(out)
}

/// Vertices reachable from `start` by simple flood fill, never entering `blocked`.
fn flood(p: &Pcg, start: usize, blocked: Subset) -> Subset {
    let mut seen = Subset::singleton(start);
    let mut stack = vec![start];
    while let Some(v) = stack.pop() {
        for w in 0..p.d() {
            if !seen.contains(w) && !blocked.contains(w) && p.has_edge(v, w) {
                seen = seen.with(w);
                stack.push(w);
            }
        }
    }
    seen
}

/// Intersection of all `T ⊆ s` that separate `j` from `s \ T` in `p`.
pub fn brute_minimal_separators(p: &Pcg, j: usize, s: Subset) -> Result<Subset> {
    let d = p.d();
    if j >= d {
        return Err(Error::IndexOutOfRange { index: j, d });
    }
    if !s.is_subset_of(p.all()) {
        return Err(Error::SetOutOfRange { set: s, d });
    }
    if s.contains(j) {
        return Err(Error::NodeInSet { node: j, set: s });
    }
    if s.len() > ORACLE_MAX_SET {
        return Err(Error::SetTooLarge {
            len: s.len(),
            max: ORACLE_MAX_SET,
        });
    }
    let mut meet = s;
    for t in s.subsets() {
        let reach = flood(p, j, t);
        if reach.is_disjoint(s - t) {
            meet = meet & t;
        }
    }
    Ok(meet)
}

/// Checks `A ⊥ B | S ⇔ S separates A from B in pcg(g)` over every triple of
/// disjoint sets with `A`, `B` nonempty. Returns the first counterexample.
pub fn brute_check_perfect(g: &GramMatrix) -> Result<Option<(Subset, Subset, Subset)>> {
    let d = g.d();
    if d > ORACLE_PERFECT_MAX_D {
        return Err(Error::DimensionTooLarge {
            d,
            max: ORACLE_PERFECT_MAX_D,
        });
    }
    let p = crate::pcg::pcg(g);
    // each variable is in A (1), B (2), S (3) or none (0)
    let total = 4usize.pow(d as u32);
    for code in 0..total {
        let (mut a, mut b, mut s) = (Subset::EMPTY, Subset::EMPTY, Subset::EMPTY);
        let mut c = code;
        for v in 0..d {
            match c % 4 {
                1 => a = a.with(v),
                2 => b = b.with(v),
                3 => s = s.with(v),
                _ => {}
            }
            c /= 4;
        }
        if a.is_empty() || b.is_empty() {
            continue;
        }
        let orthogonal = g.po_schur(a, s, b)?.holds;
        let separated = a.iter().all(|v| flood(&p, v, s).is_disjoint(b));
        if orthogonal != separated {
            return Ok(Some((a, s, b)));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random;

    fn s(ix: &[usize]) -> Subset {
        Subset::from_one_based(ix, 64).unwrap()
    }

    #[test]
    fn star_node_two() {
        let g = GramMatrix::star(4).unwrap();
        let dec = brute_decompose(&g, 1).unwrap();
        assert_eq!(dec.len(), 5);
        assert!(dec.is_partition());
        assert!(dec
            .sorted_intervals()
            .contains(&(s(&[1]), s(&[1, 3, 4]))));
        let po = brute_enumerate_po(&g, 1).unwrap();
        assert_eq!(po.len(), 4);
        assert!(po.iter().all(|st| st.t.contains(0)));
    }

    #[test]
    fn identity_single_interval() {
        let g = GramMatrix::identity(5).unwrap();
        let dec = brute_decompose(&g, 3).unwrap();
        assert_eq!(dec.len(), 1);
        assert_eq!(dec.intervals[0].max_set, Subset::ground(5, 3));
        assert_eq!(brute_enumerate_po(&g, 3).unwrap().len(), 4 * 8);
    }

    #[test]
    fn too_large() {
        let g = GramMatrix::identity(17).unwrap();
        assert!(matches!(
            brute_decompose(&g, 0),
            Err(Error::DimensionTooLarge { max: 16, .. })
        ));
        let p = Pcg::empty(30);
        let big = Subset::full(30).without(0);
        assert!(matches!(
            brute_minimal_separators(&p, 0, big),
            Err(Error::SetTooLarge { .. })
        ));
    }

    #[test]
    fn separators_on_path() {
        // 1 - 2 - 3 - 4
        let p = Pcg::from_edges(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        assert_eq!(brute_minimal_separators(&p, 0, s(&[2, 3, 4])).unwrap(), s(&[2]));
        assert_eq!(brute_minimal_separators(&p, 0, s(&[3, 4])).unwrap(), s(&[3]));
        assert_eq!(brute_minimal_separators(&p, 0, Subset::EMPTY).unwrap(), Subset::EMPTY);
    }

    #[test]
    fn identity_all_statements() {
        let g = GramMatrix::identity(4).unwrap();
        assert_eq!(brute_enumerate_po(&g, 0).unwrap().len(), 12);
    }

    #[test]
    fn separators_on_star() {
        let p = crate::pcg::pcg(&GramMatrix::star(4).unwrap());
        assert_eq!(brute_minimal_separators(&p, 1, s(&[1, 3])).unwrap(), s(&[1]));
        assert_eq!(brute_minimal_separators(&p, 0, s(&[2, 3])).unwrap(), s(&[2, 3]));
    }

    #[test]
    fn dense_seed_42_classes() {
        let g = random::dense(7, 42);
        for j in 0..7 {
            assert!(brute_decompose(&g, j).unwrap().is_partition());
        }
    }

    #[test]
    fn perfectness_examples() {
        assert_eq!(brute_check_perfect(&GramMatrix::star(5).unwrap()).unwrap(), None);
        let g = GramMatrix::new(&[
            vec![1.0, 0.0, 0.5],
            vec![0.0, 1.0, 0.5],
            vec![0.5, 0.5, 1.0],
        ])
        .unwrap();
        assert!(brute_check_perfect(&g).unwrap().is_some());
    }

    #[test]
    fn random_classes_are_intervals() {
        for seed in 0..6 {
            let g = random::sem_dag(7, seed, 0.4);
            for j in 0..7 {
                let dec = brute_decompose(&g, j).unwrap();
                assert!(dec.is_partition());
            }
        }
    }
}
