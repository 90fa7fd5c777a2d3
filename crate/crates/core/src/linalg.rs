//! Small dense kernels on row-major `Vec<f64>` matrices.
//!
//! Matrices here are at most 64×64, so plain loops are the right tool.

/// Lower Cholesky factor `L` with `A = L Lᵀ`.
///
/// Fails with the index of the first pivot whose squared value is not above
/// `min_pivot`.
pub(crate) fn cholesky(a: &[f64], n: usize, min_pivot: f64) -> Result<Vec<f64>, usize> {
    debug_assert_eq!(a.len(), n * n);
    let mut l = vec![0.0; n * n];
    for j in 0..n {
        let mut diag = a[j * n + j];
        for k in 0..j {
            diag -= l[j * n + k] * l[j * n + k];
        }
        if diag.is_nan() || diag <= min_pivot {
            return Err(j);
        }
        let ljj = diag.sqrt();
        l[j * n + j] = ljj;
        for i in (j + 1)..n {
            let mut s = a[i * n + j];
            for k in 0..j {
                s -= l[i * n + k] * l[j * n + k];
            }
            l[i * n + j] = s / ljj;
        }
    }
    Ok(l)
}

/// Solves `L Lᵀ x = b` in place.
pub(crate) fn cholesky_solve(l: &[f64], n: usize, b: &mut [f64]) {
    for i in 0..n {
        let mut s = b[i];
        for k in 0..i {
            s -= l[i * n + k] * b[k];
        }
        b[i] = s / l[i * n + i];
    }
    for i in (0..n).rev() {
        let mut s = b[i];
        for k in (i + 1)..n {
            s -= l[k * n + i] * b[k];
        }
        b[i] = s / l[i * n + i];
    }
}

/// Inverse of an SPD matrix from its Cholesky factor, symmetrized.
pub(crate) fn cholesky_inverse(l: &[f64], n: usize) -> Vec<f64> {
    let mut inv = vec![0.0; n * n];
    let mut col = vec![0.0; n];
    for c in 0..n {
        col.iter_mut().for_each(|v| *v = 0.0);
        col[c] = 1.0;
        cholesky_solve(l, n, &mut col);
        for r in 0..n {
            inv[r * n + c] = col[r];
        }
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let v = 0.5 * (inv[i * n + j] + inv[j * n + i]);
            inv[i * n + j] = v;
            inv[j * n + i] = v;
        }
    }
    inv
}

/// Determinant by LU with partial pivoting. Works for non-symmetric input.
pub(crate) fn determinant(a: &[f64], n: usize) -> f64 {
    let mut m = a.to_vec();
    let mut det = 1.0;
    for c in 0..n {
        let mut piv = c;
        let mut best = m[c * n + c].abs();
        for r in (c + 1)..n {
            let v = m[r * n + c].abs();
            if v > best {
                best = v;
                piv = r;
            }
        }
        if best == 0.0 {
            return 0.0;
        }
        if piv != c {
            for k in 0..n {
                m.swap(c * n + k, piv * n + k);
            }
            det = -det;
        }
        let p = m[c * n + c];
        det *= p;
        for r in (c + 1)..n {
            let f = m[r * n + c] / p;
            if f != 0.0 {
                for k in c..n {
                    m[r * n + k] -= f * m[c * n + k];
                }
            }
        }
    }
    det
}

pub(crate) fn matmul(a: &[f64], b: &[f64], n: usize) -> Vec<f64> {
    let mut c = vec![0.0; n * n];
    for i in 0..n {
        for k in 0..n {
            let aik = a[i * n + k];
            if aik == 0.0 {
                continue;
            }
            for j in 0..n {
                c[i * n + j] += aik * b[k * n + j];
            }
        }
    }
    c
}

pub(crate) fn transpose(a: &[f64], n: usize) -> Vec<f64> {
    let mut t = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            t[j * n + i] = a[i * n + j];
        }
    }
    t
}

pub(crate) fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cholesky_of_known_matrix() {
        // [[4,2],[2,3]] = L Lᵀ with L = [[2,0],[1,√2]]
        let l = cholesky(&[4.0, 2.0, 2.0, 3.0], 2, 0.0).unwrap();
        assert!((l[0] - 2.0).abs() < 1e-15);
        assert!((l[2] - 1.0).abs() < 1e-15);
        assert!((l[3] - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(l[1], 0.0);
    }

    #[test]
    fn cholesky_rejects_indefinite() {
        assert_eq!(cholesky(&[1.0, 2.0, 2.0, 1.0], 2, 0.0), Err(1));
        assert_eq!(cholesky(&[-1.0], 1, 0.0), Err(0));
    }

    #[test]
    fn solve_and_inverse() {
        let a = [4.0, 2.0, 2.0, 2.0, 2.0, 1.0, 2.0, 1.0, 2.0];
        let l = cholesky(&a, 3, 0.0).unwrap();
        let mut b = [2.0, 2.0, 1.0];
        cholesky_solve(&l, 3, &mut b);
        let back: Vec<f64> = (0..3)
            .map(|i| (0..3).map(|k| a[i * 3 + k] * b[k]).sum())
            .collect();
        assert!(max_abs_diff(&back, &[2.0, 2.0, 1.0]) < 1e-12);

        let inv = cholesky_inverse(&l, 3);
        let id = matmul(&a, &inv, 3);
        let mut eye = vec![0.0; 9];
        eye[0] = 1.0;
        eye[4] = 1.0;
        eye[8] = 1.0;
        assert!(max_abs_diff(&id, &eye) < 1e-12);
    }

    #[test]
    fn determinant_with_pivoting() {
        assert!((determinant(&[0.0, 1.0, 1.0, 0.0], 2) + 1.0).abs() < 1e-15);
        assert!((determinant(&[4.0, 2.0, 2.0, 1.0], 2)).abs() < 1e-15);
        let a = [2.0, 0.0, 1.0, 1.0, 3.0, 2.0, 1.0, 1.0, 1.0];
        // 2(3-2) - 0 + 1(1-3) = 0
        assert!(determinant(&a, 3).abs() < 1e-14);
        assert_eq!(determinant(&[], 0), 1.0);
    }
}
