//! Small dense square matrices and the spectral operator norm.
//!
//! Bodies here live in dimension <= 6, so everything is a plain row-major
//! `Vec<f64>` with partial-pivot elimination; no external linear algebra.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Absolute tolerance on a pivoted determinant below which a matrix is
/// treated as singular.
pub const SINGULAR_DET_TOL: f64 = 1e-12;

/// Dense square matrix, row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SquareMatrix {
    dim: usize,
    entries: Vec<f64>,
}

impl SquareMatrix {
    /// Builds a matrix from row-major entries. All entries must be finite.
    pub fn new(dim: usize, entries: Vec<f64>) -> Result<Self> {
        if dim == 0 || entries.len() != dim * dim {
            return Err(Error::InvalidInput(format!(
                "matrix of dimension {dim} needs {} entries, got {}",
                dim * dim,
                entries.len()
            )));
        }
        if entries.iter().any(|e| !e.is_finite()) {
            return Err(Error::NonFinite {
                context: "matrix entries",
            });
        }
        Ok(Self { dim, entries })
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self {
            dim,
            entries: vec![0.0; dim * dim],
        };
        for i in 0..dim {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn zero(dim: usize) -> Self {
        Self {
            dim,
            entries: vec![0.0; dim * dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zero(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                out[(j, i)] = self[(i, j)];
            }
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "matrix dimensions must agree");
        let d = self.dim;
        let mut out = Self::zero(d);
        for i in 0..d {
            for k in 0..d {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                for j in 0..d {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "matrix dimensions must agree");
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a - b)
            .collect();
        Self {
            dim: self.dim,
            entries,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "matrix dimensions must agree");
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a + b)
            .collect();
        Self {
            dim: self.dim,
            entries,
        }
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            dim: self.dim,
            entries: self.entries.iter().map(|a| a * s).collect(),
        }
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.dim, "vector dimension must agree");
        let mut out = vec![0.0; self.dim];
        self.matvec_into(x, &mut out);
        out
    }

    /// Writes `self * x` into `out` without allocating.
    pub(crate) fn matvec_into(&self, x: &[f64], out: &mut [f64]) {
        let d = self.dim;
        debug_assert_eq!(x.len(), d);
        debug_assert_eq!(out.len(), d);
        for (row, slot) in self.entries.chunks_exact(d).zip(out.iter_mut()) {
            *slot = row.iter().zip(x).map(|(a, b)| a * b).sum();
        }
    }

    /// Determinant by LU with partial pivoting.
    pub fn determinant(&self) -> f64 {
        let d = self.dim;
        let mut a = self.entries.clone();
        let mut det = 1.0;
        for col in 0..d {
            let pivot = (col..d)
                .max_by(|&i, &j| {
                    a[i * d + col]
                        .abs()
                        .partial_cmp(&a[j * d + col].abs())
                        .unwrap()
                })
                .unwrap();
            let pval = a[pivot * d + col];
            if pval == 0.0 {
                return 0.0;
            }
            if pivot != col {
                for j in 0..d {
                    a.swap(pivot * d + j, col * d + j);
                }
                det = -det;
            }
            det *= a[col * d + col];
            for row in col + 1..d {
                let factor = a[row * d + col] / a[col * d + col];
                if factor == 0.0 {
                    continue;
                }
                for j in col..d {
                    a[row * d + j] -= factor * a[col * d + j];
                }
            }
        }
        det
    }

    /// Inverse by Gauss-Jordan with partial pivoting. Fails when the pivoted
    /// determinant falls below [`SINGULAR_DET_TOL`].
    pub fn inverse(&self) -> Result<Self> {
        let det = self.determinant();
        if det.abs() <= SINGULAR_DET_TOL {
            return Err(Error::SingularMatrix {
                det,
                tol: SINGULAR_DET_TOL,
            });
        }
        let d = self.dim;
        let mut a = self.entries.clone();
        let mut inv = Self::identity(d);
        for col in 0..d {
            let pivot = (col..d)
                .max_by(|&i, &j| {
                    a[i * d + col]
                        .abs()
                        .partial_cmp(&a[j * d + col].abs())
                        .unwrap()
                })
                .unwrap();
            if pivot != col {
                for j in 0..d {
                    a.swap(pivot * d + j, col * d + j);
                    inv.entries.swap(pivot * d + j, col * d + j);
                }
            }
            let pval = a[col * d + col];
            for j in 0..d {
                a[col * d + j] /= pval;
                inv.entries[col * d + j] /= pval;
            }
            for row in 0..d {
                if row == col {
                    continue;
                }
                let factor = a[row * d + col];
                if factor == 0.0 {
                    continue;
                }
                for j in 0..d {
                    a[row * d + j] -= factor * a[col * d + j];
                    inv.entries[row * d + j] -= factor * inv.entries[col * d + j];
                }
            }
        }
        Ok(inv)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&e| e == 0.0)
    }
}

impl std::ops::Index<(usize, usize)> for SquareMatrix {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.entries[i * self.dim + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for SquareMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.entries[i * self.dim + j]
    }
}

/// Planar rotation by `theta` (counter-clockwise), d = 2.
pub fn rotation_2d(theta: f64) -> SquareMatrix {
    let (s, c) = theta.sin_cos();
    SquareMatrix::new(2, vec![c, -s, s, c]).expect("finite rotation entries")
}

/// Spectral norm: the largest singular value, via a cyclic Jacobi eigensolve
/// of `M^T M`. Exactly zero for the zero matrix.
pub fn operator_norm(m: &SquareMatrix) -> Result<f64> {
    if m.entries.iter().any(|e| !e.is_finite()) {
        return Err(Error::NonFinite {
            context: "operator norm input",
        });
    }
    if m.is_zero() {
        return Ok(0.0);
    }
    let gram = m.transpose().mul(m);
    let eigs = symmetric_eigenvalues(&gram);
    let max = eigs.into_iter().fold(0.0f64, f64::max);
    Ok(max.max(0.0).sqrt())
}

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations.
fn symmetric_eigenvalues(m: &SquareMatrix) -> Vec<f64> {
    let d = m.dim();
    let mut a = m.clone();
    if d == 1 {
        return vec![a[(0, 0)]];
    }
    // Quadratic convergence: 30 sweeps is far beyond what d <= 6 needs.
    for _ in 0..30 {
        let mut off = 0.0;
        for i in 0..d {
            for j in i + 1..d {
                off += a[(i, j)] * a[(i, j)];
            }
        }
        let scale: f64 = (0..d).map(|i| a[(i, i)] * a[(i, i)]).sum();
        if off <= f64::EPSILON * f64::EPSILON * scale.max(f64::MIN_POSITIVE) {
            break;
        }
        for p in 0..d {
            for q in p + 1..d {
                let apq = a[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let app = a[(p, p)];
                let aqq = a[(q, q)];
                let tau = (aqq - app) / (2.0 * apq);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                for k in 0..d {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = c * akp - s * akq;
                    a[(k, q)] = s * akp + c * akq;
                }
                for k in 0..d {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = c * apk - s * aqk;
                    a[(q, k)] = s * apk + c * aqk;
                }
            }
        }
    }
    (0..d).map(|i| a[(i, i)]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn operator_norm_zero_matrix_is_exactly_zero() {
        let m = SquareMatrix::zero(3);
        assert_eq!(operator_norm(&m).unwrap(), 0.0);
    }

    #[test]
    fn operator_norm_diagonal() {
        let m = SquareMatrix::new(2, vec![3.0, 0.0, 0.0, -5.0]).unwrap();
        assert!((operator_norm(&m).unwrap() - 5.0).abs() < 1e-12);
    }

    #[test]
    fn operator_norm_rotation_minus_identity_closed_form() {
        // ||R(theta) - I|| = 2|sin(theta/2)|.
        for &theta in &[0.01, 0.1, 0.5] {
            let m = rotation_2d(theta).sub(&SquareMatrix::identity(2));
            let expected = 2.0 * (theta / 2.0).sin();
            assert!(
                (operator_norm(&m).unwrap() - expected).abs() < 1e-9,
                "theta = {theta}"
            );
        }
    }

    #[test]
    fn operator_norm_rejects_non_finite() {
        let m = SquareMatrix {
            dim: 2,
            entries: vec![1.0, f64::NAN, 0.0, 1.0],
        };
        assert!(matches!(operator_norm(&m), Err(Error::NonFinite { .. })));
    }

    #[test]
    fn determinant_and_inverse_roundtrip() {
        let m = SquareMatrix::new(3, vec![2.0, 1.0, 0.0, 1.0, 3.0, 1.0, 0.0, 1.0, 2.0]).unwrap();
        let det = m.determinant();
        assert!((det - 8.0).abs() < 1e-12);
        let inv = m.inverse().unwrap();
        let prod = m.mul(&inv);
        let id = SquareMatrix::identity(3);
        for i in 0..3 {
            for j in 0..3 {
                assert!((prod[(i, j)] - id[(i, j)]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn inverse_rejects_singular() {
        let m = SquareMatrix::new(2, vec![1.0, 2.0, 2.0, 4.0]).unwrap();
        assert!(matches!(m.inverse(), Err(Error::SingularMatrix { .. })));
    }

    #[test]
    fn singular_value_of_general_matrix_matches_gram_eigenvalue() {
        // [[1, 2], [0, 1]]: largest singular value solves s^4 - 6 s^2 + 1 = 0.
        let m = SquareMatrix::new(2, vec![1.0, 2.0, 0.0, 1.0]).unwrap();
        let expected = ((6.0 + 32.0f64.sqrt()) / 2.0).sqrt();
        assert!((operator_norm(&m).unwrap() - expected).abs() < 1e-10);
    }
}
