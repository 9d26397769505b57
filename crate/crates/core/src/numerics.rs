//! Minimal dense linear algebra for the estimator recursions.
//!
//! The parameter dimension is 2(h+1) for h+1 frequencies, so every matrix
//! here is small (n ≤ 64 at desk scale) and stored row-major in a flat
//! `Vec<f64>`. The estimators only ever solve 2x2 systems, guarded by a
//! relative determinant test; full inversion exists for the oracle side.

use thiserror::Error;

/// A matrix failed the relative determinant/pivot guard.
///
/// For the estimators this signals that the current step must be skipped;
/// for the oracle it means the window is not persistently exciting.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("matrix is numerically singular")]
pub struct SingularError;

/// Two-component real vector.
pub type Vec2 = [f64; 2];

/// Inner product of two equal-length slices.
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Euclidean norm of a slice.
pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Euclidean distance between two equal-length slices.
pub fn l2_distance(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// Dense square matrix, row-major.
///
/// Gain and information matrices are symmetric in exact arithmetic; the
/// operations that maintain them call [`symmetrize`] to strip floating-point
/// drift, so stored instances stay symmetric to machine precision.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix {
    n: usize,
    data: Vec<f64>,
}

impl SymMatrix {
    pub fn zeros(n: usize) -> Self {
        assert!(n >= 1, "matrix dimension must be at least 1");
        Self {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::scaled_identity(n, 1.0)
    }

    /// `scale * I`.
    pub fn scaled_identity(n: usize, scale: f64) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = scale;
        }
        m
    }

    /// Build from explicit rows; all rows must have the same length.
    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        let n = rows.len();
        assert!(n >= 1);
        assert!(rows.iter().all(|r| r.len() == n), "rows must form a square");
        Self {
            n,
            data: rows.iter().flatten().copied().collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        self.data[i * self.n + j] = value;
    }

    /// `self += weight * v v^T`.
    pub fn add_scaled_outer(&mut self, weight: f64, v: &[f64]) {
        assert_eq!(v.len(), self.n);
        for i in 0..self.n {
            let wi = weight * v[i];
            for j in 0..self.n {
                self.data[i * self.n + j] += wi * v[j];
            }
        }
    }

    /// Matrix-vector product.
    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), self.n);
        (0..self.n)
            .map(|i| dot(&self.data[i * self.n..(i + 1) * self.n], v))
            .collect()
    }

    /// Dense matrix product; used by residual checks, not by the recursions.
    pub fn mul_mat(&self, rhs: &SymMatrix) -> SymMatrix {
        assert_eq!(self.n, rhs.n);
        let n = self.n;
        let mut out = SymMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = 0.0;
                for k in 0..n {
                    acc += self.data[i * n + k] * rhs.data[k * n + j];
                }
                out.data[i * n + j] = acc;
            }
        }
        out
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.data[i * self.n + i]).sum()
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.data.iter().fold(0.0, |acc, v| acc.max(v.abs()))
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// `max |self - I|` entrywise; residual metric for inversion checks.
    pub fn max_abs_distance_from_identity(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.n {
            for j in 0..self.n {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((self.data[i * self.n + j] - target).abs());
            }
        }
        worst
    }
}

/// `||a - b||_F / ||b||_F`, with an absolute fallback when `b` is zero.
pub fn rel_frobenius_distance(a: &SymMatrix, b: &SymMatrix) -> f64 {
    assert_eq!(a.dim(), b.dim());
    let mut diff = 0.0;
    for i in 0..a.dim() {
        for j in 0..a.dim() {
            let d = a.get(i, j) - b.get(i, j);
            diff += d * d;
        }
    }
    let scale = b.frobenius_norm();
    if scale > 0.0 {
        diff.sqrt() / scale
    } else {
        diff.sqrt()
    }
}

/// `(m + m^T) / 2`.
pub fn symmetrize(m: &SymMatrix) -> SymMatrix {
    let n = m.dim();
    let mut out = SymMatrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            out.set(i, j, 0.5 * (m.get(i, j) + m.get(j, i)));
        }
    }
    out
}

/// Invert via Gaussian elimination with partial pivoting, then symmetrize.
///
/// Fails with [`SingularError`] when a pivot magnitude falls below
/// `1e-12 * max_abs_entry(m)`.
pub fn invert_sym(m: &SymMatrix) -> Result<SymMatrix, SingularError> {
    let n = m.dim();
    let pivot_floor = 1e-12 * m.max_abs_entry();
    // Augmented [m | I], eliminated in place.
    let width = 2 * n;
    let mut aug = vec![0.0; n * width];
    for i in 0..n {
        for j in 0..n {
            aug[i * width + j] = m.get(i, j);
        }
        aug[i * width + n + i] = 1.0;
    }

    for col in 0..n {
        let mut pivot_row = col;
        let mut pivot_val = aug[col * width + col].abs();
        for row in col + 1..n {
            let v = aug[row * width + col].abs();
            if v > pivot_val {
                pivot_val = v;
                pivot_row = row;
            }
        }
        if pivot_val <= pivot_floor {
            return Err(SingularError);
        }
        if pivot_row != col {
            for j in 0..width {
                aug.swap(col * width + j, pivot_row * width + j);
            }
        }
        let pivot = aug[col * width + col];
        for row in col + 1..n {
            let factor = aug[row * width + col] / pivot;
            if factor == 0.0 {
                continue;
            }
            for j in col..width {
                aug[row * width + j] -= factor * aug[col * width + j];
            }
        }
    }

    // Back substitution over the n identity columns.
    let mut inv = SymMatrix::zeros(n);
    for rhs in 0..n {
        for row in (0..n).rev() {
            let mut acc = aug[row * width + n + rhs];
            for j in row + 1..n {
                acc -= aug[row * width + j] * inv.get(j, rhs);
            }
            inv.set(row, rhs, acc / aug[row * width + row]);
        }
    }
    Ok(symmetrize(&inv))
}

/// `lambda * a + q_new q_new^T - q_old q_old^T`, symmetrized.
///
/// The inner signature matrix is fixed at diag[1, -1]: the first column
/// always enters, the second always leaves.
pub fn rank_two_downdate_apply(
    a: &SymMatrix,
    q_new: &[f64],
    q_old: &[f64],
    lambda: f64,
) -> SymMatrix {
    let n = a.dim();
    assert_eq!(q_new.len(), n);
    assert_eq!(q_old.len(), n);
    assert!(lambda > 0.0 && lambda <= 1.0, "lambda must be in (0, 1]");
    let mut out = SymMatrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            out.set(
                i,
                j,
                lambda * a.get(i, j) + q_new[i] * q_new[j] - q_old[i] * q_old[j],
            );
        }
    }
    symmetrize(&out)
}

/// 2x2 matrix `[[a, b], [c, d]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2 {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl Mat2 {
    pub fn det(self) -> f64 {
        self.a * self.d - self.b * self.c
    }

    pub fn max_abs_entry(self) -> f64 {
        self.a
            .abs()
            .max(self.b.abs())
            .max(self.c.abs())
            .max(self.d.abs())
    }

    /// Adjugate inverse behind the same relative determinant guard as
    /// [`solve2`]: fails unless `|det| > rel_tol * max_abs_entry^2`.
    pub fn inverse(self, rel_tol: f64) -> Result<Mat2, SingularError> {
        assert!(rel_tol > 0.0, "rel_tol must be positive");
        let det = self.det();
        let scale = self.max_abs_entry();
        // Negated comparison so NaN entries also land in the error arm.
        if !(det.abs() > rel_tol * scale * scale) {
            return Err(SingularError);
        }
        Ok(Mat2 {
            a: self.d / det,
            b: -self.b / det,
            c: -self.c / det,
            d: self.a / det,
        })
    }
}

/// Solve `m x = rhs`; [`SingularError`] under the relative determinant guard.
pub fn solve2(m: Mat2, rhs: Vec2, rel_tol: f64) -> Result<Vec2, SingularError> {
    let inv = m.inverse(rel_tol)?;
    Ok([
        inv.a * rhs[0] + inv.b * rhs[1],
        inv.c * rhs[0] + inv.d * rhs[1],
    ])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solve2_diagonal_system() {
        let m = Mat2 {
            a: 2.0,
            b: 0.0,
            c: 0.0,
            d: 4.0,
        };
        let x = solve2(m, [1.0, 1.0], 1e-12).unwrap();
        assert_eq!(x, [0.5, 0.25]);
    }

    #[test]
    fn solve2_identity_passes_rhs_through() {
        let m = Mat2 {
            a: 1.0,
            b: 0.0,
            c: 0.0,
            d: 1.0,
        };
        let x = solve2(m, [3.0, -7.0], 1e-12).unwrap();
        assert_eq!(x, [3.0, -7.0]);
    }

    #[test]
    fn solve2_zero_determinant_is_singular() {
        let m = Mat2 {
            a: 1.0,
            b: 1.0,
            c: 1.0,
            d: 1.0,
        };
        assert_eq!(solve2(m, [1.0, 2.0], 1e-12), Err(SingularError));
        assert_eq!(solve2(m, [0.0, 0.0], 1e-3), Err(SingularError));
    }

    #[test]
    fn solve2_guard_is_relative_to_scale() {
        // det / max^2 = 1e-8 for both scalings.
        for scale in [1.0, 1e6] {
            let m = Mat2 {
                a: scale,
                b: 0.0,
                c: 0.0,
                d: 1e-8 * scale,
            };
            assert!(solve2(m, [1.0, 1.0], 1e-6).is_err());
            assert!(solve2(m, [1.0, 1.0], 1e-10).is_ok());
        }
    }

    #[test]
    fn invert_identity() {
        let m = SymMatrix::identity(4);
        let inv = invert_sym(&m).unwrap();
        assert_eq!(inv, SymMatrix::identity(4));
    }

    #[test]
    fn invert_diagonal() {
        let m = SymMatrix::from_rows(&[vec![2.0, 0.0], vec![0.0, 0.5]]);
        let inv = invert_sym(&m).unwrap();
        assert!((inv.get(0, 0) - 0.5).abs() < 1e-15);
        assert!((inv.get(1, 1) - 2.0).abs() < 1e-15);
        assert_eq!(inv.get(0, 1), 0.0);
    }

    #[test]
    fn invert_zero_matrix_is_singular() {
        assert_eq!(invert_sym(&SymMatrix::zeros(3)), Err(SingularError));
    }

    #[test]
    fn invert_rank_deficient_is_singular() {
        // Outer product of a single vector.
        let mut m = SymMatrix::zeros(3);
        m.add_scaled_outer(1.0, &[1.0, 2.0, -1.0]);
        assert_eq!(invert_sym(&m), Err(SingularError));
    }

    #[test]
    fn symmetrize_averages_off_diagonal() {
        let m = SymMatrix::from_rows(&[vec![1.0, 2.0], vec![4.0, 1.0]]);
        let s = symmetrize(&m);
        assert_eq!(s, SymMatrix::from_rows(&[vec![1.0, 3.0], vec![3.0, 1.0]]));
    }

    #[test]
    fn symmetrize_fixes_symmetric_input() {
        let m = SymMatrix::from_rows(&[vec![1.0, -0.5], vec![-0.5, 2.0]]);
        assert_eq!(symmetrize(&m), m);
        let z = SymMatrix::zeros(3);
        assert_eq!(symmetrize(&z), z);
    }

    #[test]
    fn rank_two_pure_update() {
        let a = SymMatrix::zeros(2);
        let out = rank_two_downdate_apply(&a, &[1.0, 0.0], &[0.0, 0.0], 1.0);
        assert_eq!(out, SymMatrix::from_rows(&[vec![1.0, 0.0], vec![0.0, 0.0]]));
    }

    #[test]
    fn rank_two_pure_downdate_removes_direction() {
        let a = SymMatrix::identity(2);
        let out = rank_two_downdate_apply(&a, &[0.0, 0.0], &[1.0, 0.0], 1.0);
        assert_eq!(out, SymMatrix::from_rows(&[vec![0.0, 0.0], vec![0.0, 1.0]]));
    }

    #[test]
    fn rank_two_output_exactly_symmetric() {
        let a = SymMatrix::from_rows(&[vec![2.0, 0.3], vec![0.3, 1.0]]);
        let out = rank_two_downdate_apply(&a, &[0.6, -1.2], &[0.1, 0.4], 0.7);
        for i in 0..2 {
            for j in 0..2 {
                assert_eq!(out.get(i, j), out.get(j, i));
            }
        }
    }
}
