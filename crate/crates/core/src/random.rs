//! Deterministic test-instance generators.
//!
//! All generators are driven by `ChaCha8Rng`, whose stream is stable across
//! platforms and crate versions, so a `(d, seed, ...)` tuple always yields the
//! same matrix bit for bit.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::gram::{GramMatrix, Tolerances};
use crate::linalg;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `Σ = AᵀA + d·I` with `A` uniform on `[-1, 1]^{d×d}`.
pub fn dense(d: usize, seed: u64) -> GramMatrix {
    let mut r = rng(seed);
    let a: Vec<f64> = (0..d * d).map(|_| r.random_range(-1.0..=1.0)).collect();
    let mut s = vec![0.0; d * d];
    for i in 0..d {
        for j in 0..d {
            let mut v: f64 = (0..d).map(|k| a[k * d + i] * a[k * d + j]).sum();
            if i == j {
                v += d as f64;
            }
            s[i * d + j] = v;
        }
    }
    GramMatrix::from_row_major(d, s, Tolerances::default()).expect("AᵀA + dI is positive definite")
}

/// A Gram matrix generated from a sparse precision matrix, together with the
/// precision matrix and its off-diagonal pattern.
#[derive(Clone, Debug)]
pub struct SparsePrecision {
    pub gram: GramMatrix,
    /// Row-major `Γ = Σ⁻¹` as generated.
    pub precision: Vec<f64>,
    /// Nonzero off-diagonal positions `(i, j)`, `i < j`, 0-based.
    pub edges: Vec<(usize, usize)>,
}

/// Random sparse symmetric diagonally dominant `Γ` with each off-diagonal pair
/// present with probability `density`; returns `Σ = Γ⁻¹`.
pub fn sparse_precision(d: usize, seed: u64, density: f64) -> SparsePrecision {
    let mut r = rng(seed);
    let mut gamma = vec![0.0f64; d * d];
    let mut edges = Vec::new();
    for i in 0..d {
        for j in (i + 1)..d {
            if r.random_bool(density.clamp(0.0, 1.0)) {
                let mag = r.random_range(0.2..=1.0);
                let v = if r.random_bool(0.5) { mag } else { -mag };
                gamma[i * d + j] = v;
                gamma[j * d + i] = v;
                edges.push((i, j));
            }
        }
    }
    for i in 0..d {
        let off: f64 = (0..d).filter(|&j| j != i).map(|j| gamma[i * d + j].abs()).sum();
        gamma[i * d + i] = off + r.random_range(0.5..=1.5);
    }
    let l = linalg::cholesky(&gamma, d, 0.0).expect("diagonally dominant Γ is positive definite");
    let sigma = linalg::cholesky_inverse(&l, d);
    let gram = GramMatrix::from_row_major(d, sigma, Tolerances::default())
        .expect("inverse of a positive-definite matrix is positive definite");
    SparsePrecision {
        gram,
        precision: gamma,
        edges,
    }
}

/// Gram matrix of a recursive linear SEM `x = Bᵀx + e` over a random DAG.
///
/// Each edge of the random topological order is present with probability
/// `density`, weights are `±[0.3, 1]`, residual variances `[0.5, 1.5]`; the
/// variable labels are shuffled afterwards. Such matrices are generally not
/// perfect with respect to their partial correlation graph (colliders).
pub fn sem_dag(d: usize, seed: u64, density: f64) -> GramMatrix {
    let mut r = rng(seed);
    let mut b = vec![0.0; d * d];
    for p in 0..d {
        for c in (p + 1)..d {
            if r.random_bool(density.clamp(0.0, 1.0)) {
                let mag = r.random_range(0.3..=1.0);
                b[p * d + c] = if r.random_bool(0.5) { mag } else { -mag };
            }
        }
    }
    let noise: Vec<f64> = (0..d).map(|_| r.random_range(0.5..=1.5)).collect();
    // Cov(x_c, x_k) for k < c follows from x_c = Σ_p B_pc x_p + e_c.
    let mut s = vec![0.0; d * d];
    for c in 0..d {
        for k in 0..c {
            let v: f64 = (0..c).map(|p| b[p * d + c] * s[p * d + k]).sum();
            s[c * d + k] = v;
            s[k * d + c] = v;
        }
        let mut v = noise[c];
        for p in 0..c {
            for q in 0..c {
                v += b[p * d + c] * b[q * d + c] * s[p * d + q];
            }
        }
        s[c * d + c] = v;
    }
    let perm = permutation(d, &mut r);
    let mut shuffled = vec![0.0; d * d];
    for i in 0..d {
        for j in 0..d {
            shuffled[perm[i] * d + perm[j]] = s[i * d + j];
        }
    }
    GramMatrix::from_row_major(d, shuffled, Tolerances::default())
        .expect("SEM covariance with positive noise is positive definite")
}

/// Uniformly random permutation of `0..d`.
pub fn permutation<R: Rng + ?Sized>(d: usize, r: &mut R) -> Vec<usize> {
    let mut p: Vec<usize> = (0..d).collect();
    p.shuffle(r);
    p
}

/// `n` rows of `d` independent standard normals.
pub fn standard_normal_rows(n: usize, d: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut r = rng(seed);
    (0..n)
        .map(|_| (0..d).map(|_| r.sample(StandardNormal)).collect())
        .collect()
}
