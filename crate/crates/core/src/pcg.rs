//! Partial correlation graphs and graphical lattice computations.
//!
//! Under perfectness (graph separation coincides with partial orthogonality)
//! neighborhood lattices can be read off the graph: the minimal element is the
//! part of `S` visible from `j`, the maximal element adds everything that part
//! cuts off from `j`.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::gram::GramMatrix;
use crate::lattice::NeighborhoodLattice;
use crate::subset::{Subset, MAX_DIM};

/// Undirected simple graph on `d` vertices, stored as neighbor bitmasks.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Pcg {
    d: usize,
    adj: Vec<Subset>,
}

impl Pcg {
    pub fn empty(d: usize) -> Self {
        assert!(d <= MAX_DIM, "graph dimension {d} exceeds {MAX_DIM}");
        Pcg {
            d,
            adj: vec![Subset::EMPTY; d],
        }
    }

    /// Builds a graph from 0-based edges; self-loops and out-of-range
    /// endpoints are rejected.
    pub fn from_edges(d: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if d > MAX_DIM {
            return Err(Error::DimensionTooLarge { d, max: MAX_DIM });
        }
        let mut p = Pcg::empty(d);
        for &(i, j) in edges {
            for v in [i, j] {
                if v >= d {
                    return Err(Error::IndexOutOfRange { index: v, d });
                }
            }
            if i == j {
                return Err(Error::SetsNotDisjoint);
            }
            p.adj[i] = p.adj[i].with(j);
            p.adj[j] = p.adj[j].with(i);
        }
        Ok(p)
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn all(&self) -> Subset {
        Subset::full(self.d)
    }

    pub fn neighbors(&self, v: usize) -> Subset {
        self.adj[v]
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.adj[i].contains(j)
    }

    /// Edges `(i, j)` with `i < j`, lexicographic.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.d)
            .flat_map(|i| {
                (self.adj[i] - Subset::full(i + 1))
                    .iter()
                    .map(move |j| (i, j))
            })
            .collect()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|a| a.len()).sum::<usize>() / 2
    }

    /// The subgraph induced on `keep`; vertices outside become isolated.
    pub fn induced(&self, keep: Subset) -> Pcg {
        let adj = (0..self.d)
            .map(|v| {
                if keep.contains(v) {
                    self.adj[v] & keep
                } else {
                    Subset::EMPTY
                }
            })
            .collect();
        Pcg { d: self.d, adj }
    }

    /// Vertices reachable from `start` along paths that never enter `blocked`.
    /// Members of `start` are always included.
    pub fn reachable(&self, start: Subset, blocked: Subset) -> Subset {
        let mut visited = start;
        let mut frontier = start;
        while !frontier.is_empty() {
            let mut next = Subset::EMPTY;
            for v in frontier {
                next = next | self.adj[v];
            }
            frontier = next - visited - blocked;
            visited = visited | frontier;
        }
        visited
    }

    /// Connected components of the subgraph induced on `within`, ordered by
    /// smallest member.
    pub fn components(&self, within: Subset) -> Vec<Subset> {
        let outside = self.all() - within;
        let mut left = within;
        let mut out = Vec::new();
        while let Some(v) = left.first() {
            let comp = self.reachable(Subset::singleton(v), outside);
            out.push(comp);
            left = left - comp;
        }
        out
    }

    /// Graphviz text, 1-based labels.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph pcg {\n");
        for v in 0..self.d {
            let _ = writeln!(s, "  {};", v + 1);
        }
        for (i, j) in self.edges() {
            let _ = writeln!(s, "  {} -- {};", i + 1, j + 1);
        }
        s.push_str("}\n");
        s
    }

    fn check_index(&self, v: usize) -> Result<()> {
        if v < self.d {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange { index: v, d: self.d })
        }
    }

    fn check_set(&self, s: Subset) -> Result<()> {
        if s.is_subset_of(self.all()) {
            Ok(())
        } else {
            Err(Error::SetOutOfRange { set: s, d: self.d })
        }
    }
}

/// Edge `(i, j)` iff the partial correlation `−Γ_ij / √(Γ_ii Γ_jj)` of
/// `Γ = Σ⁻¹` exceeds the zero tolerance in magnitude.
pub fn pcg(g: &GramMatrix) -> Pcg {
    let d = g.d();
    let inv = g.inverse();
    let tol = g.tolerances().zero;
    let mut p = Pcg::empty(d);
    for i in 0..d {
        for j in (i + 1)..d {
            let pc = inv[i * d + j] / (inv[i * d + i] * inv[j * d + j]).sqrt();
            if pc.abs() > tol {
                p.adj[i] = p.adj[i].with(j);
                p.adj[j] = p.adj[j].with(i);
            }
        }
    }
    p
}

/// True iff every path from `a` to `b` meets `c`.
pub fn separates(p: &Pcg, a: Subset, c: Subset, b: Subset) -> Result<bool> {
    p.check_set(a | b | c)?;
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptyEndpoint);
    }
    if !a.is_disjoint(b) || !a.is_disjoint(c) || !b.is_disjoint(c) {
        return Err(Error::SetsNotDisjoint);
    }
    Ok(p.reachable(a, c).is_disjoint(b))
}

/// The smallest `S* ⊆ s` separating `j` from `s \ S*`: the members of `s`
/// reachable from `j` through vertices outside `s`.
pub fn minimal_separator(p: &Pcg, j: usize, s: Subset) -> Result<Subset> {
    p.check_index(j)?;
    p.check_set(s)?;
    if s.contains(j) {
        return Err(Error::NodeInSet { node: j, set: s });
    }
    Ok(frontier(p, j, s))
}

fn frontier(p: &Pcg, j: usize, s: Subset) -> Subset {
    let inside = p.reachable(Subset::singleton(j), s);
    let mut touched = Subset::EMPTY;
    for v in inside {
        touched = touched | p.adj[v];
    }
    touched & s
}

/// Lattice `[S*, S* ∪ E_j(S*)]`, where `E_j(S*)` holds the vertices cut off
/// from `j` by `S*`.
///
/// Matches [`crate::lattice::compute_lattice`] only when the generating Gram
/// matrix is perfect with respect to `p`; that is the caller's assertion.
pub fn graphical_lattice(p: &Pcg, j: usize, s: Subset) -> Result<NeighborhoodLattice> {
    let m = minimal_separator(p, j, s)?;
    let reach = p.reachable(Subset::singleton(j), m);
    let cut_off = p.all() - reach - m;
    Ok(NeighborhoodLattice {
        node: j,
        min_set: m,
        max_set: m | cut_off,
    })
}

/// One connected component of the graph with `j` removed and the lattice of
/// `j` restricted to that component.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ComponentLattice {
    pub component: Subset,
    pub lattice: NeighborhoodLattice,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentLattices {
    pub components: Vec<ComponentLattice>,
    /// Disjoint union of the component minima and maxima.
    pub merged: NeighborhoodLattice,
}

/// Splits the graph at `j` and computes the graphical lattice of
/// `s ∩ G_k` inside each component `G_k ∪ {j}`.
pub fn component_lattices(p: &Pcg, j: usize, s: Subset) -> Result<ComponentLattices> {
    p.check_index(j)?;
    p.check_set(s)?;
    if s.contains(j) {
        return Err(Error::NodeInSet { node: j, set: s });
    }
    let mut components = Vec::new();
    let mut min_set = Subset::EMPTY;
    let mut max_set = Subset::EMPTY;
    for comp in p.components(p.all().without(j)) {
        let sub = p.induced(comp.with(j));
        let m = frontier(&sub, j, s & comp);
        let reach = sub.reachable(Subset::singleton(j), m);
        let big = m | (comp - reach - m);
        min_set = min_set | m;
        max_set = max_set | big;
        components.push(ComponentLattice {
            component: comp,
            lattice: NeighborhoodLattice {
                node: j,
                min_set: m,
                max_set: big,
            },
        });
    }
    Ok(ComponentLattices {
        components,
        merged: NeighborhoodLattice {
            node: j,
            min_set,
            max_set,
        },
    })
}

/// Outcome of [`check_perfect`]; the counterexample is `(A, S, B)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PerfectnessCheck {
    pub perfect: bool,
    pub counterexample: Option<(Subset, Subset, Subset)>,
}

/// Default dimension cap for [`check_perfect`].
pub const PERFECT_MAX_D: usize = 10;

/// Tests whether separation in `pcg(g)` and partial orthogonality agree on
/// every triple of disjoint sets `(A, S, B)` with `A`, `B` nonempty.
///
/// Both relations are conjunctions over pairs: `A ⊥ B | S` holds iff the
/// Schur residual block vanishes entrywise, and `S` separates `A` from `B` iff
/// it separates every `a ∈ A` from every `b ∈ B`. So for each `S` the pairwise
/// residuals and the components of the graph minus `S` decide all `(A, B)` at
/// once, and the first disagreeing pair is returned as `({a}, S, {b})`.
/// Conditioning sets are visited in ascending bitmask order.
pub fn check_perfect(g: &GramMatrix, max_d: usize) -> Result<PerfectnessCheck> {
    let d = g.d();
    if d > max_d {
        return Err(Error::DimensionTooLarge { d, max: max_d });
    }
    let p = pcg(g);
    let thr = g.zero_threshold();
    for s in g.all().subsets() {
        let rest = g.all() - s;
        if rest.len() < 2 {
            continue;
        }
        let comp_of = {
            let mut ids = [usize::MAX; MAX_DIM];
            for (c, comp) in p.components(rest).into_iter().enumerate() {
                for v in comp {
                    ids[v] = c;
                }
            }
            ids
        };
        let residual = schur_residuals(g, s, rest);
        let idx: Vec<usize> = rest.iter().collect();
        let n = idx.len();
        for x in 0..n {
            for y in (x + 1)..n {
                let orthogonal = residual[x * n + y].abs() <= thr;
                let separated = comp_of[idx[x]] != comp_of[idx[y]];
                if orthogonal != separated {
                    return Ok(PerfectnessCheck {
                        perfect: false,
                        counterexample: Some((
                            Subset::singleton(idx[x]),
                            s,
                            Subset::singleton(idx[y]),
                        )),
                    });
                }
            }
        }
    }
    Ok(PerfectnessCheck {
        perfect: true,
        counterexample: None,
    })
}

/// `Σ_{R,R} − Σ_{R,S} Σ_S⁻¹ Σ_{S,R}` for `R = rest`, row-major in member order.
fn schur_residuals(g: &GramMatrix, s: Subset, rest: Subset) -> Vec<f64> {
    let idx: Vec<usize> = rest.iter().collect();
    let n = idx.len();
    let mut out: Vec<f64> = g.submatrix(rest, rest);
    if s.is_empty() {
        return out;
    }
    // columns of Σ_S⁻¹ Σ_{S,R} via one solve per member of R
    let cols: Vec<Vec<f64>> = idx.iter().map(|&r| g.solve_on(r, s)).collect();
    for x in 0..n {
        for y in 0..n {
            let corr: f64 = s
                .iter()
                .zip(&cols[y])
                .map(|(k, c)| g.get(idx[x], k) * c)
                .sum();
            out[x * n + y] -= corr;
        }
    }
    out
}
