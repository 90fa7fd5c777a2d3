//! Validated Gram matrices and the numerical primitives built on them:
//! SEM coefficients and the three equivalent partial-orthogonality tests.
//!
//! Every conditioning-set solve goes through a Cholesky factorization of the
//! principal submatrix `Σ_S`, which is positive definite whenever `Σ` is.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;
use crate::subset::{Subset, MAX_DIM};

/// Numerical tolerances. All of them are relative.
///
/// * `symmetry`: `|Σ_ij − Σ_ji| ≤ symmetry · max_diag` is accepted and averaged away.
/// * `positive_definite`: every squared Cholesky pivot must exceed
///   `positive_definite · max_diag`.
/// * `zero`: a coefficient or Schur residual `c` counts as zero iff
///   `|c| ≤ zero · (1 + max|Σ|)`; see [`GramMatrix::zero_threshold`].
/// * `det`: a determinant counts as zero iff its magnitude, divided by the
///   matching product of diagonal entries, is at most `det`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub symmetry: f64,
    pub positive_definite: f64,
    pub zero: f64,
    pub det: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            symmetry: 1e-9,
            positive_definite: 1e-12,
            zero: 1e-9,
            det: 1e-9,
        }
    }
}

impl Tolerances {
    /// Default tolerances with `zero` and `det` both set to `tol`.
    pub fn with_zero(tol: f64) -> Self {
        Tolerances {
            zero: tol,
            det: tol,
            ..Tolerances::default()
        }
    }
}

/// A symmetric, strictly positive-definite `d × d` matrix of inner products.
#[derive(Clone, Debug, PartialEq)]
pub struct GramMatrix {
    d: usize,
    entries: Vec<f64>,
    max_abs: f64,
    tol: Tolerances,
}

/// Least-squares coefficients of variable `node` regressed on `conditioning_set`.
#[derive(Clone, Debug, PartialEq)]
pub struct SemCoefficients {
    pub node: usize,
    pub conditioning_set: Subset,
    /// Dense, length `d`; zero outside `conditioning_set`.
    pub values: Vec<f64>,
    pub support: Subset,
}

/// Outcome of the Schur-complement partial-orthogonality test.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SchurTest {
    pub holds: bool,
    /// Max-abs entry of `Σ_{B,A} − Σ_{B,S} Σ_S⁻¹ Σ_{S,A}`.
    pub residual: f64,
}

impl GramMatrix {
    /// Validates a dense square matrix given as rows, with default tolerances.
    pub fn new(rows: &[Vec<f64>]) -> Result<Self> {
        Self::validate(rows, Tolerances::default())
    }

    /// Checks shape, finiteness, symmetry and positive definiteness.
    ///
    /// Entries are replaced by `(M + Mᵀ)/2` once symmetry is confirmed.
    pub fn validate(rows: &[Vec<f64>], tol: Tolerances) -> Result<Self> {
        let d = rows.len();
        if d == 0 {
            return Err(Error::EmptyMatrix);
        }
        for (r, row) in rows.iter().enumerate() {
            if row.len() != d {
                return Err(Error::NotSquare {
                    rows: d,
                    row: r,
                    cols: row.len(),
                });
            }
        }
        if d > MAX_DIM {
            return Err(Error::DimensionTooLarge { d, max: MAX_DIM });
        }
        let entries: Vec<f64> = rows.iter().flatten().copied().collect();
        Self::from_row_major(d, entries, tol)
    }

    /// Same as [`GramMatrix::validate`] for a row-major buffer of length `d²`.
    pub fn from_row_major(d: usize, mut entries: Vec<f64>, tol: Tolerances) -> Result<Self> {
        if d == 0 {
            return Err(Error::EmptyMatrix);
        }
        if d > MAX_DIM {
            return Err(Error::DimensionTooLarge { d, max: MAX_DIM });
        }
        if entries.len() != d * d {
            return Err(Error::NotSquare {
                rows: d,
                row: entries.len() / d,
                cols: entries.len() % d,
            });
        }
        for i in 0..d {
            for j in 0..d {
                if !entries[i * d + j].is_finite() {
                    return Err(Error::NonFinite { i, j });
                }
            }
        }
        let max_diag = (0..d).map(|i| entries[i * d + i]).fold(f64::MIN, f64::max);
        if max_diag <= 0.0 {
            let pivot = (0..d).find(|&i| entries[i * d + i] <= 0.0).unwrap_or(0);
            return Err(Error::NotPositiveDefinite { pivot });
        }
        for i in 0..d {
            for j in (i + 1)..d {
                let gap = (entries[i * d + j] - entries[j * d + i]).abs();
                if gap > tol.symmetry * max_diag {
                    return Err(Error::Asymmetric { i, j, gap });
                }
                let v = 0.5 * (entries[i * d + j] + entries[j * d + i]);
                entries[i * d + j] = v;
                entries[j * d + i] = v;
            }
        }
        linalg::cholesky(&entries, d, tol.positive_definite * max_diag)
            .map_err(|pivot| Error::NotPositiveDefinite { pivot })?;
        let max_abs = entries.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        Ok(GramMatrix {
            d,
            entries,
            max_abs,
            tol,
        })
    }

    pub fn identity(d: usize) -> Result<Self> {
        let mut e = vec![0.0; d * d];
        for i in 0..d {
            e[i * d + i] = 1.0;
        }
        Self::from_row_major(d, e, Tolerances::default())
    }

    /// Gram matrix of `x_j = e_1 + e_j` (rescaled), whose partial correlation
    /// graph is a star centered at the first variable.
    ///
    /// With `γ = d/4`, `u = ½·1_{d−1}` and `c = γ − |u|² = 1/4`:
    /// `Σ = (1/c)·[[1, uᵀ], [u, c·I + u uᵀ]]` and `Σ⁻¹ = [[γ, −uᵀ], [−u, I]]`.
    pub fn star(d: usize) -> Result<Self> {
        if d > MAX_DIM {
            return Err(Error::DimensionTooLarge { d, max: MAX_DIM });
        }
        if d < 2 {
            return Err(Error::DimensionTooSmall { d, min: 2 });
        }
        let gamma = d as f64 / 4.0;
        let u = 0.5;
        let c = gamma - (d - 1) as f64 * u * u;
        let mut e = vec![0.0; d * d];
        e[0] = 1.0 / c;
        for k in 1..d {
            e[k] = u / c;
            e[k * d] = u / c;
            for l in 1..d {
                let block = if k == l { c + u * u } else { u * u };
                e[k * d + l] = block / c;
            }
        }
        Self::from_row_major(d, e, Tolerances::default())
    }

    /// Sample Gram matrix `Σ_ij = (1/n) Σ_k ⟨x_i^(k), x_j^(k)⟩` for
    /// observations whose components live in some base inner-product space.
    pub fn from_observations<T, F>(observations: &[Vec<T>], inner: F, tol: Tolerances) -> Result<Self>
    where
        F: Fn(&T, &T) -> f64,
    {
        let n = observations.len();
        if n == 0 {
            return Err(Error::EmptySample);
        }
        let d = observations[0].len();
        if d == 0 {
            return Err(Error::EmptyMatrix);
        }
        if d > MAX_DIM {
            return Err(Error::DimensionTooLarge { d, max: MAX_DIM });
        }
        let mut acc = vec![0.0; d * d];
        for (row, obs) in observations.iter().enumerate() {
            if obs.len() != d {
                return Err(Error::RaggedSample {
                    row,
                    len: obs.len(),
                    d,
                });
            }
            for i in 0..d {
                for j in i..d {
                    acc[i * d + j] += inner(&obs[i], &obs[j]);
                }
            }
        }
        let scale = 1.0 / n as f64;
        for i in 0..d {
            for j in i..d {
                let v = acc[i * d + j] * scale;
                acc[i * d + j] = v;
                acc[j * d + i] = v;
            }
        }
        Self::from_row_major(d, acc, tol)
    }

    /// Sample Gram matrix of plain numeric rows (ordinary products).
    pub fn from_samples(rows: &[Vec<f64>]) -> Result<Self> {
        Self::from_observations(rows, |a, b| a * b, Tolerances::default())
    }

    #[inline]
    pub fn d(&self) -> usize {
        self.d
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.d + j]
    }

    /// Row-major entries.
    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.entries.chunks(self.d).map(<[f64]>::to_vec).collect()
    }

    pub fn tolerances(&self) -> Tolerances {
        self.tol
    }

    /// The same matrix with different tolerances. Positive definiteness is
    /// not re-checked.
    pub fn with_tolerances(mut self, tol: Tolerances) -> Self {
        self.tol = tol;
        self
    }

    pub fn max_abs(&self) -> f64 {
        self.max_abs
    }

    /// Absolute threshold below which coefficients and Schur residuals count
    /// as zero: `zero · (1 + max|Σ|)`.
    pub fn zero_threshold(&self) -> f64 {
        self.tol.zero * (1.0 + self.max_abs)
    }

    /// The variable set `{0, ..., d-1}`.
    pub fn all(&self) -> Subset {
        Subset::full(self.d)
    }

    pub(crate) fn check_index(&self, i: usize) -> Result<()> {
        if i < self.d {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange { index: i, d: self.d })
        }
    }

    pub(crate) fn check_set(&self, s: Subset) -> Result<()> {
        if s.is_subset_of(self.all()) {
            Ok(())
        } else {
            Err(Error::SetOutOfRange { set: s, d: self.d })
        }
    }

    /// `Σ_{rows, cols}` as a row-major buffer, members in ascending order.
    pub fn submatrix(&self, rows: Subset, cols: Subset) -> Vec<f64> {
        let mut out = Vec::with_capacity(rows.len() * cols.len());
        for r in rows {
            for c in cols {
                out.push(self.get(r, c));
            }
        }
        out
    }

    fn factor(&self, s: Subset) -> Vec<f64> {
        let n = s.len();
        linalg::cholesky(&self.submatrix(s, s), n, 0.0)
            .expect("principal submatrix of a positive-definite matrix is positive definite")
    }

    /// `Σ⁻¹`, row-major.
    pub fn inverse(&self) -> Vec<f64> {
        let l = self.factor(self.all());
        linalg::cholesky_inverse(&l, self.d)
    }

    /// Solves `Σ_S β = Σ_{S,j}`; returns `β` in the ascending member order of `s`.
    pub(crate) fn solve_on(&self, j: usize, s: Subset) -> Vec<f64> {
        if s.is_empty() {
            return Vec::new();
        }
        let l = self.factor(s);
        let mut rhs: Vec<f64> = s.iter().map(|k| self.get(k, j)).collect();
        linalg::cholesky_solve(&l, s.len(), &mut rhs);
        rhs
    }

    /// SEM coefficients `β_j(S)`: the coefficients of the projection of
    /// variable `j` onto the span of the variables in `s`.
    pub fn sem_coefficients(&self, j: usize, s: Subset) -> Result<SemCoefficients> {
        self.check_index(j)?;
        self.check_set(s)?;
        if s.contains(j) {
            return Err(Error::NodeInSet { node: j, set: s });
        }
        let beta = self.solve_on(j, s);
        let thr = self.zero_threshold();
        let mut values = vec![0.0; self.d];
        let mut support = Subset::EMPTY;
        for (k, b) in s.iter().zip(beta) {
            values[k] = b;
            if b.abs() > thr {
                support = support.with(k);
            }
        }
        Ok(SemCoefficients {
            node: j,
            conditioning_set: s,
            values,
            support,
        })
    }

    /// Support of `β_j(S)` without materializing the dense vector.
    pub(crate) fn support_of(&self, j: usize, s: Subset) -> Subset {
        let thr = self.zero_threshold();
        s.iter()
            .zip(self.solve_on(j, s))
            .filter(|(_, b)| b.abs() > thr)
            .map(|(k, _)| k)
            .collect()
    }

    /// Schur-complement test of `A ⊥ B | S`:
    /// `Σ_{B,A} − Σ_{B,S} Σ_S⁻¹ Σ_{S,A} = 0` (just `Σ_{B,A} = 0` when `S = ∅`).
    pub fn po_schur(&self, a: Subset, s: Subset, b: Subset) -> Result<SchurTest> {
        self.check_set(a | s | b)?;
        if a.is_empty() || b.is_empty() {
            return Err(Error::EmptyEndpoint);
        }
        if !a.is_disjoint(s) || !a.is_disjoint(b) || !s.is_disjoint(b) {
            return Err(Error::SetsNotDisjoint);
        }
        let residual = self.schur_residual(a, s, b);
        Ok(SchurTest {
            holds: residual <= self.zero_threshold(),
            residual,
        })
    }

    pub(crate) fn schur_residual(&self, a: Subset, s: Subset, b: Subset) -> f64 {
        let n = s.len();
        // X = Σ_S⁻¹ Σ_{S,A}, one column per member of `a`
        let cols: Vec<Vec<f64>> = if n == 0 {
            Vec::new()
        } else {
            let l = self.factor(s);
            a.iter()
                .map(|ai| {
                    let mut col: Vec<f64> = s.iter().map(|k| self.get(k, ai)).collect();
                    linalg::cholesky_solve(&l, n, &mut col);
                    col
                })
                .collect()
        };
        let mut worst = 0.0f64;
        for bi in b {
            for (c, ai) in a.iter().enumerate() {
                let mut r = self.get(bi, ai);
                if n > 0 {
                    r -= s
                        .iter()
                        .zip(&cols[c])
                        .map(|(k, x)| self.get(bi, k) * x)
                        .sum::<f64>();
                }
                worst = worst.max(r.abs());
            }
        }
        worst
    }

    /// Normalized `|det Σ_{S∪{i}, S∪{j}}|`, scaled by `∏_{k∈S} Σ_kk · √(Σ_ii Σ_jj)`
    /// so that the value is invariant under diagonal rescaling.
    pub fn po_det_value(&self, i: usize, s: Subset, j: usize) -> Result<f64> {
        self.check_pair(i, s, j)?;
        let n = s.len() + 1;
        let rows: Vec<usize> = s.iter().chain(std::iter::once(i)).collect();
        let cols: Vec<usize> = s.iter().chain(std::iter::once(j)).collect();
        let mut m = Vec::with_capacity(n * n);
        for &r in &rows {
            for &c in &cols {
                m.push(self.get(r, c));
            }
        }
        let det = linalg::determinant(&m, n);
        let norm: f64 = s.iter().map(|k| self.get(k, k)).product::<f64>()
            * (self.get(i, i) * self.get(j, j)).sqrt();
        Ok(det.abs() / norm)
    }

    /// Determinant test of `i ⊥ j | S`: `|Σ_{S∪{i}, S∪{j}}| = 0`.
    pub fn po_det(&self, i: usize, s: Subset, j: usize) -> Result<bool> {
        Ok(self.po_det_value(i, s, j)? <= self.tol.det)
    }

    /// `[β_j(S ∪ {i})]_i`, which vanishes iff `i ⊥ j | S`.
    pub fn po_pairwise_coef(&self, i: usize, s: Subset, j: usize) -> Result<f64> {
        self.check_pair(i, s, j)?;
        let beta = self.sem_coefficients(j, s.with(i))?;
        Ok(beta.values[i])
    }

    fn check_pair(&self, i: usize, s: Subset, j: usize) -> Result<()> {
        self.check_index(i)?;
        self.check_index(j)?;
        self.check_set(s)?;
        if i == j || s.contains(i) || s.contains(j) {
            return Err(Error::SetsNotDisjoint);
        }
        Ok(())
    }

    /// `D Σ D` for a diagonal `D` with nonzero entries.
    pub fn rescale(&self, diag: &[f64]) -> Result<Self> {
        if diag.len() != self.d {
            return Err(Error::ScaleLength {
                len: diag.len(),
                d: self.d,
            });
        }
        if let Some(index) = diag.iter().position(|&v| v == 0.0 || !v.is_finite()) {
            return Err(Error::ZeroScale { index });
        }
        let d = self.d;
        let mut entries = self.entries.clone();
        for i in 0..d {
            for j in 0..d {
                entries[i * d + j] *= diag[i] * diag[j];
            }
        }
        let max_abs = entries.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        Ok(GramMatrix {
            d,
            entries,
            max_abs,
            tol: self.tol,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random;

    fn s(ix: &[usize]) -> Subset {
        // 1-based helper to keep tests aligned with the documented examples
        Subset::from_one_based(ix, 64).unwrap()
    }

    fn star4() -> GramMatrix {
        GramMatrix::star(4).unwrap()
    }

    #[test]
    fn identity_is_valid() {
        let g = GramMatrix::new(&[vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        assert_eq!(g.d(), 2);
    }

    #[test]
    fn indefinite_rejected() {
        let err = GramMatrix::new(&[vec![1.0, 2.0], vec![2.0, 1.0]]).unwrap_err();
        assert!(matches!(err, Error::NotPositiveDefinite { .. }));
    }

    #[test]
    fn shape_and_symmetry_errors() {
        assert!(matches!(
            GramMatrix::new(&[vec![1.0, 0.0], vec![0.0]]),
            Err(Error::NotSquare { .. })
        ));
        assert!(matches!(
            GramMatrix::new(&[vec![1.0, 0.5], vec![0.4, 1.0]]),
            Err(Error::Asymmetric { i: 0, j: 1, .. })
        ));
        assert!(matches!(GramMatrix::new(&[]), Err(Error::EmptyMatrix)));
        let big = vec![vec![0.0; 65]; 65];
        assert!(matches!(
            GramMatrix::new(&big),
            Err(Error::DimensionTooLarge { d: 65, .. })
        ));
        assert!(matches!(
            GramMatrix::new(&[vec![f64::NAN]]),
            Err(Error::NonFinite { .. })
        ));
    }

    #[test]
    fn tiny_asymmetry_is_averaged() {
        let g = GramMatrix::new(&[vec![1.0, 0.5 + 1e-12], vec![0.5, 1.0]]).unwrap();
        assert_eq!(g.get(0, 1), g.get(1, 0));
    }

    #[test]
    fn star_d4_entries_and_inverse() {
        let g = star4();
        let expected = [
            [4.0, 2.0, 2.0, 2.0],
            [2.0, 2.0, 1.0, 1.0],
            [2.0, 1.0, 2.0, 1.0],
            [2.0, 1.0, 1.0, 2.0],
        ];
        for (i, row) in expected.iter().enumerate() {
            for (j, want) in row.iter().enumerate() {
                assert!((g.get(i, j) - want).abs() < 1e-14);
            }
        }
        let inv = g.inverse();
        let expected_inv = [
            [1.0, -0.5, -0.5, -0.5],
            [-0.5, 1.0, 0.0, 0.0],
            [-0.5, 0.0, 1.0, 0.0],
            [-0.5, 0.0, 0.0, 1.0],
        ];
        for i in 0..4 {
            for j in 0..4 {
                assert!((inv[i * 4 + j] - expected_inv[i][j]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn star_d2_inverse() {
        let inv = GramMatrix::star(2).unwrap().inverse();
        let expected = [0.5, -0.5, -0.5, 1.0];
        assert!(linalg::max_abs_diff(&inv, &expected) < 1e-12);
    }

    #[test]
    fn star_inverse_closed_form_all_d() {
        for d in 2..=20 {
            let inv = GramMatrix::star(d).unwrap().inverse();
            for i in 0..d {
                for j in 0..d {
                    let want = match (i, j) {
                        (0, 0) => d as f64 / 4.0,
                        (0, _) | (_, 0) => -0.5,
                        _ if i == j => 1.0,
                        _ => 0.0,
                    };
                    assert!((inv[i * d + j] - want).abs() < 1e-10, "d={d} ({i},{j})");
                }
            }
        }
        assert!(matches!(
            GramMatrix::star(1),
            Err(Error::DimensionTooSmall { .. })
        ));
        assert!(matches!(
            GramMatrix::star(65),
            Err(Error::DimensionTooLarge { .. })
        ));
    }

    #[test]
    fn sample_gram_small() {
        let g =
            GramMatrix::from_samples(&[vec![1.0, 0.0], vec![0.0, 1.0], vec![1.0, 1.0]]).unwrap();
        assert!((g.get(0, 0) - 2.0 / 3.0).abs() < 1e-15);
        assert!((g.get(0, 1) - 1.0 / 3.0).abs() < 1e-15);
        assert!((g.get(1, 1) - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn sample_gram_errors() {
        assert!(matches!(
            GramMatrix::from_samples(&[vec![1.0, 1.0]]),
            Err(Error::NotPositiveDefinite { .. })
        ));
        assert!(matches!(
            GramMatrix::from_samples(&[]),
            Err(Error::EmptySample)
        ));
        assert!(matches!(
            GramMatrix::from_samples(&[vec![1.0, 0.0], vec![1.0]]),
            Err(Error::RaggedSample { row: 1, .. })
        ));
    }

    #[test]
    fn sample_gram_of_normal_rows_near_identity() {
        let rows = random::standard_normal_rows(1000, 5, 11);
        let g = GramMatrix::from_samples(&rows).unwrap();
        for i in 0..5 {
            for j in 0..5 {
                if i != j {
                    assert!(g.get(i, j).abs() < 0.2);
                }
            }
        }
    }

    #[test]
    fn sample_gram_with_custom_inner_product() {
        // components are vectors in R²; inner product is the dot product
        let obs = vec![
            vec![[1.0, 0.0], [0.0, 1.0]],
            vec![[0.0, 1.0], [1.0, 1.0]],
        ];
        let g = GramMatrix::from_observations(
            &obs,
            |a: &[f64; 2], b: &[f64; 2]| a[0] * b[0] + a[1] * b[1],
            Tolerances::default(),
        )
        .unwrap();
        assert!((g.get(0, 0) - 1.0).abs() < 1e-15);
        assert!((g.get(0, 1) - 0.5).abs() < 1e-15);
        assert!((g.get(1, 1) - 1.5).abs() < 1e-15);
    }

    #[test]
    fn sem_coefficients_examples() {
        let g = star4();
        let b = g.sem_coefficients(1, s(&[1])).unwrap();
        assert!((b.values[0] - 0.5).abs() < 1e-14);
        assert_eq!(b.support, s(&[1]));

        let b = g.sem_coefficients(1, s(&[1, 3])).unwrap();
        assert!((b.values[0] - 0.5).abs() < 1e-14);
        assert!(b.values[2].abs() < 1e-14);
        assert_eq!(b.support, s(&[1]));

        let b = g.sem_coefficients(2, Subset::EMPTY).unwrap();
        assert!(b.values.iter().all(|&v| v == 0.0));
        assert_eq!(b.support, Subset::EMPTY);

        assert!(matches!(
            g.sem_coefficients(1, s(&[2])),
            Err(Error::NodeInSet { .. })
        ));
        assert!(matches!(
            g.sem_coefficients(4, Subset::EMPTY),
            Err(Error::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn po_schur_examples() {
        let g = star4();
        let t = g.po_schur(s(&[2]), s(&[1]), s(&[3])).unwrap();
        assert!(t.holds);
        assert!(t.residual < 1e-14);
        let t = g.po_schur(s(&[2]), Subset::EMPTY, s(&[3])).unwrap();
        assert!(!t.holds);
        assert!((t.residual - 1.0).abs() < 1e-15);

        let id = GramMatrix::identity(5).unwrap();
        assert!(id.po_schur(s(&[1, 2]), s(&[3]), s(&[4, 5])).unwrap().holds);

        assert_eq!(
            g.po_schur(s(&[2]), s(&[2]), s(&[3])),
            Err(Error::SetsNotDisjoint)
        );
        assert_eq!(
            g.po_schur(Subset::EMPTY, s(&[1]), s(&[3])),
            Err(Error::EmptyEndpoint)
        );
    }

    #[test]
    fn po_det_examples() {
        let g = star4();
        assert!(g.po_det(1, s(&[1]), 2).unwrap());
        assert!(!g.po_det(0, Subset::EMPTY, 1).unwrap());
        let id = GramMatrix::identity(3).unwrap();
        assert!(id.po_det(0, s(&[3]), 1).unwrap());
        assert_eq!(g.po_det(0, s(&[1]), 1), Err(Error::SetsNotDisjoint));
        assert_eq!(g.po_det(1, s(&[1]), 1), Err(Error::SetsNotDisjoint));
    }

    #[test]
    fn po_pairwise_coef_examples() {
        let g = star4();
        assert!(g.po_pairwise_coef(2, s(&[1]), 1).unwrap().abs() < 1e-14);
        assert!((g.po_pairwise_coef(0, Subset::EMPTY, 1).unwrap() - 0.5).abs() < 1e-14);
        let id = GramMatrix::identity(4).unwrap();
        assert_eq!(id.po_pairwise_coef(0, s(&[3, 4]), 1).unwrap(), 0.0);
    }

    #[test]
    fn rescale_examples() {
        let g = star4();
        assert_eq!(g.rescale(&[1.0; 4]).unwrap(), g);
        let r = g.rescale(&[2.0, 1.0, 1.0, 1.0]).unwrap();
        assert_eq!(r.get(0, 0), 16.0);
        assert_eq!(r.get(0, 1), 4.0);
        assert_eq!(
            g.rescale(&[1.0, 0.0, 1.0, 1.0]),
            Err(Error::ZeroScale { index: 1 })
        );
        assert!(matches!(
            g.rescale(&[1.0]),
            Err(Error::ScaleLength { .. })
        ));
    }

    #[test]
    fn sem_residual_orthogonality() {
        for seed in 0..10 {
            let g = random::dense(6, seed);
            let j = (seed as usize) % 6;
            let set = Subset::ground(6, j).without((j + 1) % 6);
            let b = g.sem_coefficients(j, set).unwrap();
            for r in set {
                let lhs: f64 = set.iter().map(|k| g.get(r, k) * b.values[k]).sum();
                assert!((lhs - g.get(r, j)).abs() < 1e-10);
            }
        }
    }
}
