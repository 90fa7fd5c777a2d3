//! Directed partial correlation graphs by recursive projection.
//!
//! Projecting each variable onto the ones before it in an ordering yields a
//! recursive SEM `x = Bᵀx + e` with orthogonal residuals. The coefficient
//! matrix and residual Gram matrix factor the precision matrix as
//! `Σ⁻¹ = (I − B) D⁻¹ (I − B)ᵀ`, which after permutation is an upper Cholesky
//! factorization.

use crate::error::{Error, Result};
use crate::gram::GramMatrix;
use crate::linalg;
use crate::subset::Subset;

#[derive(Clone, Debug, PartialEq)]
pub struct SemFactorization {
    pub d: usize,
    /// Row-major `d × d`; column `j` holds `β_j(S_j)`, entry `(k, j)` the
    /// coefficient of parent `k`.
    pub b: Vec<f64>,
    /// Residual norms `‖x_j − P_{S_j} x_j‖²`.
    pub diag: Vec<f64>,
    /// `perm[a]` is the variable in position `a` of the ordering.
    pub perm: Vec<usize>,
    /// `Π_j`, the support of column `j`.
    pub parents: Vec<Subset>,
}

impl SemFactorization {
    #[inline]
    pub fn coef(&self, parent: usize, child: usize) -> f64 {
        self.b[parent * self.d + child]
    }

    /// Directed edges `(parent, child)` sorted by child then parent.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.d)
            .flat_map(|c| self.parents[c].iter().map(move |p| (p, c)))
            .collect()
    }
}

fn check_permutation(perm: &[usize], d: usize) -> Result<()> {
    if perm.len() != d {
        return Err(Error::NotAPermutation { d });
    }
    let mut seen = Subset::EMPTY;
    for &v in perm {
        if v >= d || seen.contains(v) {
            return Err(Error::NotAPermutation { d });
        }
        seen = seen.with(v);
    }
    Ok(())
}

/// Regresses each variable on its predecessors in `perm`.
pub fn recursive_projection(g: &GramMatrix, perm: &[usize]) -> Result<SemFactorization> {
    let d = g.d();
    check_permutation(perm, d)?;
    let mut b = vec![0.0; d * d];
    let mut diag = vec![0.0; d];
    let mut parents = vec![Subset::EMPTY; d];
    let mut before = Subset::EMPTY;
    for &j in perm {
        let beta = g.sem_coefficients(j, before)?;
        let explained: f64 = before.iter().map(|k| g.get(j, k) * beta.values[k]).sum();
        diag[j] = g.get(j, j) - explained;
        for k in before {
            b[k * d + j] = beta.values[k];
        }
        parents[j] = beta.support;
        before = before.with(j);
    }
    Ok(SemFactorization {
        d,
        b,
        diag,
        perm: perm.to_vec(),
        parents,
    })
}

fn i_minus_b(f: &SemFactorization) -> Vec<f64> {
    let d = f.d;
    let mut m: Vec<f64> = f.b.iter().map(|v| -v).collect();
    for i in 0..d {
        m[i * d + i] += 1.0;
    }
    m
}

/// Max-abs entry of `Σ⁻¹ − (I − B) D⁻¹ (I − B)ᵀ`.
pub fn verify_sem_identity(g: &GramMatrix, f: &SemFactorization) -> Result<f64> {
    let d = g.d();
    if f.d != d || f.b.len() != d * d || f.diag.len() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: f.d,
        });
    }
    let w = i_minus_b(f);
    let mut scaled = w.clone();
    for r in 0..d {
        for c in 0..d {
            scaled[r * d + c] /= f.diag[c];
        }
    }
    let rhs = linalg::matmul(&scaled, &linalg::transpose(&w, d), d);
    Ok(linalg::max_abs_diff(&g.inverse(), &rhs))
}

/// Compares the upper Cholesky factor `U` of `PΣ⁻¹Pᵀ = UUᵀ` (positive
/// diagonal) with `P(I − B)D^{−1/2}Pᵀ` from [`recursive_projection`] and
/// returns the max-abs entrywise deviation.
pub fn cholesky_correspondence(g: &GramMatrix, perm: &[usize]) -> Result<f64> {
    let d = g.d();
    let f = recursive_projection(g, perm)?;
    let inv = g.inverse();
    // reversed permuted precision: R_ab = Γ_{perm[d-1-a], perm[d-1-b]}
    let mut rev = vec![0.0; d * d];
    for a in 0..d {
        for b in 0..d {
            rev[a * d + b] = inv[perm[d - 1 - a] * d + perm[d - 1 - b]];
        }
    }
    let l = linalg::cholesky(&rev, d, 0.0)
        .map_err(|pivot| Error::NotPositiveDefinite { pivot })?;
    let w = i_minus_b(&f);
    let mut worst = 0.0f64;
    for a in 0..d {
        for b in 0..d {
            let upper = l[(d - 1 - a) * d + (d - 1 - b)];
            let from_sem = w[perm[a] * d + perm[b]] / f.diag[perm[b]].sqrt();
            worst = worst.max((upper - from_sem).abs());
        }
    }
    Ok(worst)
}

/// Outcome of [`verify_directed_pcg`]. Each field holds the first violating
/// pair `(i, j)` of the corresponding condition, if any.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DirectedCheck {
    /// `i ⊥ j | Π_j` for every non-descendant `i ∉ Π_j` of `j`.
    pub local_violation: Option<(usize, usize)>,
    /// `⟨x_i − P_{Π_i}x_i, x_j − P_{Π_j}x_j⟩ = 0` for all `i ≠ j` (`i < j` reported).
    pub residual_violation: Option<(usize, usize)>,
}

impl DirectedCheck {
    pub fn holds(&self) -> bool {
        self.local_violation.is_none()
    }

    /// Whether the local and residual formulations reach the same verdict.
    pub fn agree(&self) -> bool {
        self.local_violation.is_none() == self.residual_violation.is_none()
    }
}

/// Descendant sets of an acyclic parent structure, or `CyclicGraph`.
pub fn descendants(parents: &[Subset]) -> Result<Vec<Subset>> {
    let d = parents.len();
    let mut children = vec![Subset::EMPTY; d];
    for (c, ps) in parents.iter().enumerate() {
        for p in *ps {
            children[p] = children[p].with(c);
        }
    }
    // Kahn's algorithm on parent counts
    let mut indeg: Vec<usize> = parents.iter().map(|p| p.len()).collect();
    let mut order = Vec::with_capacity(d);
    let mut ready: Vec<usize> = (0..d).filter(|&v| indeg[v] == 0).collect();
    while let Some(v) = ready.pop() {
        order.push(v);
        for c in children[v] {
            indeg[c] -= 1;
            if indeg[c] == 0 {
                ready.push(c);
            }
        }
    }
    if order.len() != d {
        return Err(Error::CyclicGraph);
    }
    let mut desc = vec![Subset::EMPTY; d];
    for &v in order.iter().rev() {
        let mut acc = children[v];
        for c in children[v] {
            acc = acc | desc[c];
        }
        desc[v] = acc;
    }
    Ok(desc)
}

/// Checks whether `g` satisfies a directed PCG with the given parent sets,
/// both through the local condition and through orthogonality of residuals.
pub fn verify_directed_pcg(g: &GramMatrix, parents: &[Subset]) -> Result<DirectedCheck> {
    let d = g.d();
    if parents.len() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: parents.len(),
        });
    }
    for (j, p) in parents.iter().enumerate() {
        g.check_set(*p)?;
        if p.contains(j) {
            return Err(Error::CyclicGraph);
        }
    }
    let desc = descendants(parents)?;

    let mut local_violation = None;
    'outer: for i in 0..d {
        for j in 0..d {
            if i == j || desc[j].contains(i) || parents[j].contains(i) {
                continue;
            }
            let t = g.po_schur(Subset::singleton(i), parents[j], Subset::singleton(j))?;
            if !t.holds {
                local_violation = Some((i, j));
                break 'outer;
            }
        }
    }

    // residual vectors e_j = x_j − β_jᵀx in coordinates of x
    let resid: Vec<Vec<f64>> = (0..d)
        .map(|j| {
            let beta = g.sem_coefficients(j, parents[j])?;
            let mut u: Vec<f64> = beta.values.iter().map(|v| -v).collect();
            u[j] = 1.0;
            Ok(u)
        })
        .collect::<Result<_>>()?;
    let thr = g.zero_threshold();
    let mut residual_violation = None;
    'pairs: for i in 0..d {
        for j in (i + 1)..d {
            let mut ip = 0.0;
            for a in (0..d).filter(|&a| resid[i][a] != 0.0) {
                for b in (0..d).filter(|&b| resid[j][b] != 0.0) {
                    ip += resid[i][a] * g.get(a, b) * resid[j][b];
                }
            }
            if ip.abs() > thr {
                residual_violation = Some((i, j));
                break 'pairs;
            }
        }
    }
    Ok(DirectedCheck {
        local_violation,
        residual_violation,
    })
}
