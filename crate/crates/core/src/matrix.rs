//! Dense complex linear algebra on small matrices: SVD, numerical rank,
//! Moore-Penrose pseudoinverse, Penrose-axiom residuals, and orthogonal
//! projectors.
//!
//! Everything here is complex even when inputs happen to be real: symbols
//! are evaluated at `i*xi`, so one complex code path serves both cases.
//! The factorization is a one-sided Jacobi SVD written here: the matrices
//! are small (symbols and test matrices up to ~10x10), Jacobi delivers
//! high relative accuracy on the rank-deficient inputs this crate lives
//! on, and it commutes with conjugation bit-for-bit.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Sweep cap for the one-sided Jacobi iteration; small matrices settle
/// in well under ten sweeps.
const SVD_MAX_SWEEPS: usize = 100;

/// A column pair counts as orthogonal once
/// `|b_p^H b_q| <= tol * |b_p| |b_q|`.
const SVD_ORTHO_TOL: f64 = 1e-15;

/// Dense complex matrix, row-major storage.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawCMatrix")]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Complex64>,
}

#[derive(Deserialize)]
struct RawCMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Complex64>,
}

impl TryFrom<RawCMatrix> for CMatrix {
    type Error = Error;

    fn try_from(raw: RawCMatrix) -> Result<Self> {
        CMatrix::new(raw.rows, raw.cols, raw.entries)
    }
}

impl CMatrix {
    /// Builds a matrix from row-major entries, rejecting empty shapes,
    /// length mismatches, and non-finite entries.
    pub fn new(rows: usize, cols: usize, entries: Vec<Complex64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidArgument(format!(
                "matrix dimensions must be positive, got {rows}x{cols}"
            )));
        }
        if entries.len() != rows * cols {
            return Err(Error::ShapeMismatch(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                entries.len()
            )));
        }
        for (k, z) in entries.iter().enumerate() {
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(Error::NonFinite {
                    row: k / cols,
                    col: k % cols,
                });
            }
        }
        Ok(Self {
            rows,
            cols,
            entries,
        })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::new(rows, cols, vec![Complex64::new(0.0, 0.0); rows * cols])
            .expect("positive dimensions")
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.entries[i * n + i] = Complex64::new(1.0, 0.0);
        }
        m
    }

    /// Builds a matrix from nested rows of complex entries.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(Error::ShapeMismatch("ragged rows".into()));
        }
        Self::new(nrows, ncols, rows.concat())
    }

    /// Builds a matrix from nested rows of real entries.
    pub fn from_real_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let complex: Vec<Vec<Complex64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&complex)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn at(&self, row: usize, col: usize) -> Complex64 {
        assert!(row < self.rows && col < self.cols, "index out of range");
        self.entries[row * self.cols + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: Complex64) {
        assert!(row < self.rows && col < self.cols, "index out of range");
        self.entries[row * self.cols + col] = value;
    }

    pub fn scale(&self, lambda: Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|z| z * lambda).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(
            (self.rows, self.cols),
            (other.rows, other.cols),
            "shape mismatch in add"
        );
        Self {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(
            self.cols, other.rows,
            "shape mismatch in matmul: {}x{} * {}x{}",
            self.rows, self.cols, other.rows, other.cols
        );
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.entries[i * self.cols + k];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..other.cols {
                    out.entries[i * other.cols + j] += a * other.entries[k * other.cols + j];
                }
            }
        }
        out
    }

    /// Matrix-vector product.
    pub fn matvec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.cols, v.len(), "shape mismatch in matvec");
        self.entries
            .chunks_exact(self.cols)
            .map(|row| row.iter().zip(v).map(|(a, x)| a * x).sum())
            .collect()
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.entries[j * self.rows + i] = self.entries[i * self.cols + j];
            }
        }
        out
    }

    pub fn conj(&self) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(Complex64::conj).collect(),
        }
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        self.transpose().conj()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Operator 2-norm, i.e. the largest singular value.
    pub fn operator_norm(&self) -> Result<f64> {
        Ok(svd(self)?.singular_values.first().copied().unwrap_or(0.0))
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest absolute imaginary part over all entries.
    pub fn max_imag(&self) -> f64 {
        self.entries.iter().map(|z| z.im.abs()).fold(0.0, f64::max)
    }

    /// Drops imaginary parts; used after operations that are real by
    /// symmetry (caller checks `max_imag` first where it matters).
    pub fn real_part_rows(&self) -> Vec<Vec<f64>> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.at(i, j).re).collect())
            .collect()
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.rows == self.cols && self.sub(&self.adjoint()).max_abs() <= tol
    }
}

/// Thin singular value decomposition `M = left * diag(sigma) * right^H`
/// with `k = min(rows, cols)` columns in each factor and singular values
/// sorted non-increasing.
#[derive(Debug, Clone)]
pub struct SvdResult {
    pub left: CMatrix,
    pub singular_values: Vec<f64>,
    pub right: CMatrix,
}

impl SvdResult {
    /// Rebuilds `left * diag(sigma) * right^H`.
    pub fn reconstruct(&self) -> CMatrix {
        let k = self.singular_values.len();
        let mut scaled = self.left.clone();
        for i in 0..scaled.rows() {
            for j in 0..k {
                let v = scaled.at(i, j) * self.singular_values[j];
                scaled.set(i, j, v);
            }
        }
        scaled.matmul(&self.right.adjoint())
    }

    /// Ratio between the smallest kept singular value and the largest
    /// discarded one for a candidate rank `r`; `f64::INFINITY` when the
    /// discarded part is exactly zero (or `r == 0` on a zero matrix).
    pub fn rank_gap(&self, rank: usize) -> f64 {
        let k = self.singular_values.len();
        let kept = if rank == 0 {
            return if self.singular_values.first().copied().unwrap_or(0.0) == 0.0 {
                f64::INFINITY
            } else {
                0.0
            };
        } else {
            self.singular_values[rank - 1]
        };
        let dropped = if rank < k {
            self.singular_values[rank]
        } else {
            0.0
        };
        if dropped == 0.0 {
            f64::INFINITY
        } else {
            kept / dropped
        }
    }
}

/// Rank-decision policy for singular values.
#[derive(Debug, Clone, Copy)]
pub enum RankTolerance {
    /// `sigma_k` counts toward the rank iff
    /// `sigma_k > max(rows, cols) * eps * sigma_1`.
    Default,
    /// Fixed absolute threshold.
    Absolute(f64),
}

impl RankTolerance {
    pub fn threshold(&self, rows: usize, cols: usize, sigma_max: f64) -> f64 {
        match self {
            RankTolerance::Default => rows.max(cols) as f64 * f64::EPSILON * sigma_max,
            RankTolerance::Absolute(t) => *t,
        }
    }
}

/// Computes the thin SVD of `m` by one-sided Jacobi: rotate column
/// pairs of a working copy `B = M V` until all columns are mutually
/// orthogonal, then read off `sigma_j = |B_j|` and `U_j = B_j / sigma_j`.
///
/// Fails with `SvdNonConvergence` instead of returning garbage if the
/// sweep cap is hit.
pub fn svd(m: &CMatrix) -> Result<SvdResult> {
    let rows = m.rows();
    let cols = m.cols();
    // column-major working copies of B and V
    let mut b: Vec<Vec<Complex64>> = (0..cols)
        .map(|j| (0..rows).map(|i| m.at(i, j)).collect())
        .collect();
    let mut v: Vec<Vec<Complex64>> = (0..cols)
        .map(|j| {
            (0..cols)
                .map(|i| Complex64::new(if i == j { 1.0 } else { 0.0 }, 0.0))
                .collect()
        })
        .collect();

    // columns whose squared norm sits below this are rounding debris
    // (sigma <= eps * |M|_F, already zero at the default rank
    // tolerance); rotating among them never settles
    let frob_sq: f64 = m.entries.iter().map(|z| z.norm_sqr()).sum();
    let column_floor = f64::EPSILON * f64::EPSILON * frob_sq;

    let mut converged = false;
    for _ in 0..SVD_MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..cols {
            for q in (p + 1)..cols {
                let mut alpha = 0.0;
                let mut beta = 0.0;
                let mut gamma = Complex64::new(0.0, 0.0);
                for (zp, zq) in b[p].iter().zip(&b[q]) {
                    alpha += zp.norm_sqr();
                    beta += zq.norm_sqr();
                    gamma += zp.conj() * zq;
                }
                let r = gamma.norm();
                if alpha <= column_floor || beta <= column_floor {
                    continue;
                }
                if r <= SVD_ORTHO_TOL * (alpha * beta).sqrt() || r == 0.0 {
                    continue;
                }
                rotated = true;
                // phase that turns the Gram off-diagonal real, then a
                // plain symmetric Jacobi rotation
                let phase = gamma / r;
                let tau = (beta - alpha) / (2.0 * r);
                let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                let phase_conj = phase.conj();
                rotate_pair(&mut b, p, q, c, s, phase_conj);
                rotate_pair(&mut v, p, q, c, s, phase_conj);
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::SvdNonConvergence { rows, cols });
    }

    let mut order: Vec<usize> = (0..cols).collect();
    let norms: Vec<f64> = b
        .iter()
        .map(|col| col.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
        .collect();
    order.sort_by(|&a, &bb| norms[bb].partial_cmp(&norms[a]).expect("finite norms"));

    let k = rows.min(cols);
    let mut left = CMatrix::zeros(rows, k);
    let mut right = CMatrix::zeros(cols, k);
    let mut singular_values = Vec::with_capacity(k);
    let zero_floor = f64::EPSILON * frob_sq.sqrt();
    for (dst, &src) in order.iter().take(k).enumerate() {
        let sigma = norms[src];
        singular_values.push(sigma);
        if sigma > zero_floor {
            for (i, z) in b[src].iter().enumerate() {
                left.set(i, dst, z / sigma);
            }
        } else {
            // numerically zero column (sigma at rounding level, skipped
            // by the rotation floor above, so its direction is debris):
            // fill in a unit vector orthogonal to the columns already
            // placed, keeping `left` unitary
            complete_orthonormal_column(&mut left, dst);
        }
        for (i, z) in v[src].iter().enumerate() {
            right.set(i, dst, *z);
        }
    }
    Ok(SvdResult {
        left,
        singular_values,
        right,
    })
}

/// Applies the complex Jacobi rotation to columns `p < q`.
fn rotate_pair(
    columns: &mut [Vec<Complex64>],
    p: usize,
    q: usize,
    c: f64,
    s: f64,
    phase_conj: Complex64,
) {
    let (head, tail) = columns.split_at_mut(q);
    let col_p = &mut head[p];
    let col_q = &mut tail[0];
    for (zp, zq) in col_p.iter_mut().zip(col_q.iter_mut()) {
        let a = *zp;
        let b = *zq * phase_conj;
        *zp = c * a - s * b;
        *zq = s * a + c * b;
    }
}

/// Writes into column `col` a unit vector orthogonal to columns
/// `0..col`: two rounds of Gram-Schmidt on the standard basis vector
/// with the largest residual (that residual norm is at least
/// `sqrt((rows - col) / rows)` for some seed).
fn complete_orthonormal_column(m: &mut CMatrix, col: usize) {
    let rows = m.rows();
    let mut best: Option<(f64, Vec<Complex64>)> = None;
    for seed in 0..rows {
        let mut v = vec![Complex64::new(0.0, 0.0); rows];
        v[seed] = Complex64::new(1.0, 0.0);
        for _ in 0..2 {
            for j in 0..col {
                let mut dot = Complex64::new(0.0, 0.0);
                for (i, vi) in v.iter().enumerate() {
                    dot += m.at(i, j).conj() * vi;
                }
                for (i, vi) in v.iter_mut().enumerate() {
                    *vi -= dot * m.at(i, j);
                }
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if best.as_ref().is_none_or(|(n, _)| norm > *n) {
            best = Some((norm, v));
        }
    }
    let (norm, v) = best.expect("positive row count");
    assert!(norm > 0.0, "no orthogonal direction left");
    for (i, z) in v.into_iter().enumerate() {
        m.set(i, col, z / norm);
    }
}

/// Number of singular values strictly above the rank threshold.
pub fn numeric_rank(m: &CMatrix, tol: RankTolerance) -> Result<usize> {
    let decomposition = svd(m)?;
    Ok(rank_from_svd(&decomposition, m.rows(), m.cols(), tol))
}

pub(crate) fn rank_from_svd(
    decomposition: &SvdResult,
    rows: usize,
    cols: usize,
    tol: RankTolerance,
) -> usize {
    let sigma_max = decomposition
        .singular_values
        .first()
        .copied()
        .unwrap_or(0.0);
    let threshold = tol.threshold(rows, cols, sigma_max);
    decomposition
        .singular_values
        .iter()
        .filter(|&&s| s > threshold)
        .count()
}

/// Moore-Penrose pseudoinverse via the truncated SVD: singular values at
/// or below the rank threshold are treated as exact zeros.
pub fn pseudo_inverse(m: &CMatrix, tol: RankTolerance) -> Result<CMatrix> {
    let decomposition = svd(m)?;
    let rank = rank_from_svd(&decomposition, m.rows(), m.cols(), tol);
    // V_r * diag(1/sigma) * U_r^H, shape cols x rows.
    let mut out = CMatrix::zeros(m.cols(), m.rows());
    for r in 0..rank {
        let inv_sigma = 1.0 / decomposition.singular_values[r];
        for i in 0..m.cols() {
            let vi = decomposition.right.at(i, r) * inv_sigma;
            for j in 0..m.rows() {
                let val = out.at(i, j) + vi * decomposition.left.at(j, r).conj();
                out.set(i, j, val);
            }
        }
    }
    Ok(out)
}

/// Frobenius norms of the four Penrose-axiom residuals for a candidate
/// generalized inverse `mdag`:
/// `(|A X A - A|, |X A X - X|, |(A X)^H - A X|, |(X A)^H - X A|)`.
pub fn penrose_residuals(m: &CMatrix, mdag: &CMatrix) -> Result<[f64; 4]> {
    if mdag.rows() != m.cols() || mdag.cols() != m.rows() {
        return Err(Error::ShapeMismatch(format!(
            "candidate inverse of a {}x{} matrix must be {}x{}, got {}x{}",
            m.rows(),
            m.cols(),
            m.cols(),
            m.rows(),
            mdag.rows(),
            mdag.cols()
        )));
    }
    let ax = m.matmul(mdag);
    let xa = mdag.matmul(m);
    Ok([
        ax.matmul(m).sub(m).frobenius_norm(),
        xa.matmul(mdag).sub(mdag).frobenius_norm(),
        ax.adjoint().sub(&ax).frobenius_norm(),
        xa.adjoint().sub(&xa).frobenius_norm(),
    ])
}

/// Orthogonal projector `M * M^dagger` onto the image of `M`.
pub fn image_projector(m: &CMatrix, tol: RankTolerance) -> Result<CMatrix> {
    Ok(m.matmul(&pseudo_inverse(m, tol)?))
}

/// Orthogonal projector `M^dagger * M` onto the orthogonal complement of
/// the kernel of `M`.
pub fn kernel_complement_projector(m: &CMatrix, tol: RankTolerance) -> Result<CMatrix> {
    Ok(pseudo_inverse(m, tol)?.matmul(m))
}
