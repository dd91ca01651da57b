//! Symmetric matrices stored by their upper triangle, Gram matrices and
//! definiteness classification.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::error::{Error, Result};
use crate::math;

/// Real symmetric `dim × dim` matrix.
///
/// Only the upper triangle is stored, packed row by row:
/// `(0,0), (0,1), …, (0,dim-1), (1,1), (1,2), …`. This is also the order in
/// which Gram-matrix entries appear in lattice-coordinate unknown vectors and
/// in report columns (`w11, w12, …`).
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix {
    dim: usize,
    upper: Vec<f64>,
}

/// Spectral sign pattern of a symmetric matrix relative to a tolerance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Definiteness {
    PositiveDefinite,
    PositiveSemidefiniteSingular,
    Indefinite,
    NegativeSemidefiniteSingular,
    NegativeDefinite,
    Zero,
}

impl Definiteness {
    /// True for the closed positive semidefinite cone (including zero).
    pub fn is_psd(self) -> bool {
        matches!(self, Definiteness::PositiveDefinite | Definiteness::PositiveSemidefiniteSingular | Definiteness::Zero)
    }

    pub fn is_nsd(self) -> bool {
        matches!(self, Definiteness::NegativeDefinite | Definiteness::NegativeSemidefiniteSingular | Definiteness::Zero)
    }

    /// The classification of the negated matrix.
    pub fn mirror(self) -> Definiteness {
        match self {
            Definiteness::PositiveDefinite => Definiteness::NegativeDefinite,
            Definiteness::PositiveSemidefiniteSingular => Definiteness::NegativeSemidefiniteSingular,
            Definiteness::NegativeSemidefiniteSingular => Definiteness::PositiveSemidefiniteSingular,
            Definiteness::NegativeDefinite => Definiteness::PositiveDefinite,
            other => other,
        }
    }
}

#[inline]
fn packed_index(dim: usize, i: usize, j: usize) -> usize {
    let (i, j) = if i <= j { (i, j) } else { (j, i) };
    i * (2 * dim - i + 1) / 2 + (j - i)
}

/// Number of independent entries of a symmetric `dim × dim` matrix.
pub const fn packed_len(dim: usize) -> usize {
    dim * (dim + 1) / 2
}

impl SymMatrix {
    pub fn zeros(dim: usize) -> Self {
        assert!(dim >= 1, "SymMatrix dimension must be positive");
        SymMatrix { dim, upper: vec![0.0; packed_len(dim)] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.set(i, i, 1.0);
        }
        m
    }

    pub fn diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &x) in diag.iter().enumerate() {
            m.set(i, i, x);
        }
        m
    }

    /// Builds a matrix from its packed upper triangle.
    pub fn from_upper(dim: usize, upper: Vec<f64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidInput("matrix dimension must be positive"));
        }
        if upper.len() != packed_len(dim) {
            return Err(Error::DimensionMismatch { expected: packed_len(dim), found: upper.len() });
        }
        Ok(SymMatrix { dim, upper })
    }

    /// Builds a matrix from full rows, reading only the upper triangle.
    pub fn from_rows(rows: &[&[f64]]) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 {
            return Err(Error::InvalidInput("matrix dimension must be positive"));
        }
        let mut m = Self::zeros(dim);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: row.len() });
            }
            for j in i..dim {
                m.set(i, j, row[j]);
            }
        }
        Ok(m)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.upper[packed_index(self.dim, i, j)]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        let k = packed_index(self.dim, i, j);
        self.upper[k] = value;
    }

    /// Packed upper triangle, row-major.
    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn is_finite(&self) -> bool {
        self.upper.iter().all(|x| x.is_finite())
    }

    pub fn max_abs(&self) -> f64 {
        math::max_abs(&self.upper)
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn scale(&self, factor: f64) -> SymMatrix {
        SymMatrix { dim: self.dim, upper: self.upper.iter().map(|x| x * factor).collect() }
    }

    pub fn add(&self, other: &SymMatrix) -> SymMatrix {
        assert_eq!(self.dim, other.dim);
        SymMatrix { dim: self.dim, upper: self.upper.iter().zip(&other.upper).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, other: &SymMatrix) -> SymMatrix {
        self.add(&other.scale(-1.0))
    }

    /// Frobenius norm of the full matrix.
    pub fn frobenius_norm(&self) -> f64 {
        let mut s = 0.0;
        for i in 0..self.dim {
            for j in 0..self.dim {
                let x = self.get(i, j);
                s += x * x;
            }
        }
        math::sqrt(s)
    }

    /// `M v`.
    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        (0..self.dim).map(|i| (0..self.dim).map(|j| self.get(i, j) * v[j]).sum()).collect()
    }

    /// Bilinear form `uᵗ M v`.
    pub fn form(&self, u: &[f64], v: &[f64]) -> f64 {
        math::dot(u, &self.mul_vec(v))
    }

    pub fn determinant(&self) -> f64 {
        match self.dim {
            1 => self.get(0, 0),
            2 => self.get(0, 0) * self.get(1, 1) - self.get(0, 1) * self.get(0, 1),
            3 => {
                let (a, b, c) = (self.get(0, 0), self.get(0, 1), self.get(0, 2));
                let (d, e, f) = (self.get(1, 1), self.get(1, 2), self.get(2, 2));
                a * (d * f - e * e) - b * (b * f - e * c) + c * (b * e - d * c)
            }
            _ => self.eigenvalues().iter().product(),
        }
    }

    /// Eigenvalues in ascending order.
    ///
    /// Closed forms for `dim ≤ 3`, cyclic Jacobi beyond.
    pub fn eigenvalues(&self) -> Vec<f64> {
        match self.dim {
            1 => vec![self.get(0, 0)],
            2 => {
                let (a, b, c) = (self.get(0, 0), self.get(0, 1), self.get(1, 1));
                let mean = 0.5 * (a + c);
                let radius = math::hypot(0.5 * (a - c), b);
                vec![mean - radius, mean + radius]
            }
            3 => eigenvalues_3x3(self).to_vec(),
            _ => self.eigen().0,
        }
    }

    /// Eigen-decomposition by cyclic Jacobi rotations.
    ///
    /// Returns ascending eigenvalues and the matching unit eigenvectors.
    pub fn eigen(&self) -> (Vec<f64>, Vec<Vec<f64>>) {
        jacobi_eigen(self)
    }
}

fn eigenvalues_3x3(m: &SymMatrix) -> [f64; 3] {
    let (a11, a12, a13) = (m.get(0, 0), m.get(0, 1), m.get(0, 2));
    let (a22, a23, a33) = (m.get(1, 1), m.get(1, 2), m.get(2, 2));
    let off = a12 * a12 + a13 * a13 + a23 * a23;
    let scale = m.max_abs();
    if off <= (f64::EPSILON * scale) * (f64::EPSILON * scale) {
        let mut d = [a11, a22, a33];
        d.sort_by(f64::total_cmp);
        return d;
    }
    let q = (a11 + a22 + a33) / 3.0;
    let (b11, b22, b33) = (a11 - q, a22 - q, a33 - q);
    let p2 = b11 * b11 + b22 * b22 + b33 * b33 + 2.0 * off;
    let p = math::sqrt(p2 / 6.0);
    let det_b = b11 * (b22 * b33 - a23 * a23) - a12 * (a12 * b33 - a23 * a13) + a13 * (a12 * a23 - b22 * a13);
    let r = (det_b / (2.0 * p * p * p)).clamp(-1.0, 1.0);
    let phi = math::acos(r) / 3.0;
    let hi = q + 2.0 * p * math::cos(phi);
    let lo = q + 2.0 * p * math::cos(phi + 2.0 * PI / 3.0);
    let mid = 3.0 * q - hi - lo;
    let mut out = [lo, mid, hi];
    out.sort_by(f64::total_cmp);
    // The smallest root from the trigonometric form loses relative accuracy
    // when it is much smaller than the others; recover it from the determinant.
    let det = m.determinant();
    if out[1] * out[2] != 0.0 && out[0].abs() < 1e-3 * out[2].abs().max(out[1].abs()) {
        let refined = det / (out[1] * out[2]);
        if (refined - out[0]).abs() <= 1e-8 * scale.max(f64::MIN_POSITIVE) {
            out[0] = refined;
        }
    }
    out
}

fn jacobi_eigen(m: &SymMatrix) -> (Vec<f64>, Vec<Vec<f64>>) {
    let n = m.dim();
    let mut a: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| m.get(i, j)).collect()).collect();
    let mut v: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect();
    for _sweep in 0..64 {
        let mut off = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                off += a[i][j] * a[i][j];
            }
        }
        let diag: f64 = (0..n).map(|i| a[i][i] * a[i][i]).sum();
        if off <= 1e-32 * diag || off == 0.0 {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p][q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + math::sqrt(theta * theta + 1.0));
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / math::sqrt(t * t + 1.0);
                let s = t * c;
                for k in 0..n {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                for row in v.iter_mut() {
                    let vkp = row[p];
                    let vkq = row[q];
                    row[p] = c * vkp - s * vkq;
                    row[q] = s * vkp + c * vkq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| a[x][x].total_cmp(&a[y][y]));
    let values = order.iter().map(|&k| a[k][k]).collect();
    let vectors = order.iter().map(|&k| v.iter().map(|row| row[k]).collect()).collect();
    (values, vectors)
}

/// Default relative tolerance `1e-9 · (1 + max |entry|)`.
pub fn default_tol(m: &SymMatrix) -> f64 {
    1e-9 * (1.0 + m.max_abs())
}

/// Classifies `m` by the signs of its eigenvalues, treating values within
/// `[-tol, tol]` as zero.
pub fn psd_status(m: &SymMatrix, tol: f64) -> Result<Definiteness> {
    if !m.is_finite() || !tol.is_finite() {
        return Err(Error::NonFinite);
    }
    if tol < 0.0 {
        return Err(Error::InvalidInput("tolerance must be nonnegative"));
    }
    let eig = m.eigenvalues();
    let lo = eig[0];
    let hi = eig[eig.len() - 1];
    Ok(if lo >= -tol && hi <= tol {
        Definiteness::Zero
    } else if lo > tol {
        Definiteness::PositiveDefinite
    } else if hi < -tol {
        Definiteness::NegativeDefinite
    } else if lo >= -tol {
        Definiteness::PositiveSemidefiniteSingular
    } else if hi <= tol {
        Definiteness::NegativeSemidefiniteSingular
    } else {
        Definiteness::Indefinite
    })
}

/// Gram matrix of a list of equal-length vectors: entry `(i, j) = ⟨vᵢ, vⱼ⟩`.
pub fn gram<V: AsRef<[f64]>>(vectors: &[V]) -> Result<SymMatrix> {
    let first = vectors.first().ok_or(Error::InvalidInput("gram of an empty vector list"))?;
    let d = first.as_ref().len();
    if d == 0 {
        return Err(Error::InvalidInput("vectors must have positive dimension"));
    }
    for v in vectors {
        if v.as_ref().len() != d {
            return Err(Error::DimensionMismatch { expected: d, found: v.as_ref().len() });
        }
        if v.as_ref().iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite);
        }
    }
    let k = vectors.len();
    let mut g = SymMatrix::zeros(k);
    for i in 0..k {
        for j in i..k {
            g.set(i, j, math::dot(vectors[i].as_ref(), vectors[j].as_ref()));
        }
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_is_positive_definite() {
        let m = SymMatrix::identity(2);
        assert_eq!(psd_status(&m, 1e-9).unwrap(), Definiteness::PositiveDefinite);
    }

    #[test]
    fn signature_one_one_is_indefinite() {
        let m = SymMatrix::diagonal(&[1.0, -1.0]);
        assert_eq!(psd_status(&m, 1e-9).unwrap(), Definiteness::Indefinite);
    }

    #[test]
    fn rank_one_is_singular_psd() {
        let m = SymMatrix::from_rows(&[&[1.0, 1.0], &[1.0, 1.0]]).unwrap();
        assert_eq!(psd_status(&m, 1e-9).unwrap(), Definiteness::PositiveSemidefiniteSingular);
        assert_eq!(psd_status(&m.scale(-1.0), 1e-9).unwrap(), Definiteness::NegativeSemidefiniteSingular);
    }

    #[test]
    fn zero_and_negative_cases() {
        assert_eq!(psd_status(&SymMatrix::zeros(3), 1e-9).unwrap(), Definiteness::Zero);
        let m = SymMatrix::diagonal(&[-1.0, -2.0, -3.0]);
        assert_eq!(psd_status(&m, 1e-9).unwrap(), Definiteness::NegativeDefinite);
    }

    #[test]
    fn non_finite_is_rejected() {
        let m = SymMatrix::diagonal(&[f64::NAN, 1.0]);
        assert_eq!(psd_status(&m, 1e-9), Err(Error::NonFinite));
    }

    #[test]
    fn gram_examples() {
        assert_eq!(gram(&[[1.0, 0.0], [0.0, 1.0]]).unwrap(), SymMatrix::identity(2));
        let g = gram(&[[1.0, 0.0], [1.0, 0.0]]).unwrap();
        assert_eq!(g.upper(), &[1.0, 1.0, 1.0]);
        let g = gram(&[[1.0, 1.0], [-1.0, 1.0]]).unwrap();
        assert_eq!(g, SymMatrix::diagonal(&[2.0, 2.0]));
    }

    #[test]
    fn gram_rejects_bad_lists() {
        let empty: [[f64; 2]; 0] = [];
        assert!(gram(&empty).is_err());
        let mixed: [&[f64]; 2] = [&[1.0, 0.0], &[1.0]];
        assert!(matches!(gram(&mixed), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn closed_forms_match_jacobi() {
        let m = SymMatrix::from_rows(&[&[4.0, 1.0, -2.0], &[1.0, 2.0, 0.5], &[-2.0, 0.5, 3.0]]).unwrap();
        let closed = m.eigenvalues();
        let (jac, vecs) = m.eigen();
        for (a, b) in closed.iter().zip(&jac) {
            assert!((a - b).abs() < 1e-12, "{closed:?} vs {jac:?}");
        }
        for (lambda, v) in jac.iter().zip(&vecs) {
            let mv = m.mul_vec(v);
            for k in 0..3 {
                assert!((mv[k] - lambda * v[k]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn jacobi_handles_larger_matrices() {
        let rows: Vec<Vec<f64>> = (0..5).map(|i| (0..5).map(|j| 1.0 / (1.0 + i as f64 + j as f64)).collect()).collect();
        let refs: Vec<&[f64]> = rows.iter().map(|r| r.as_slice()).collect();
        let m = SymMatrix::from_rows(&refs).unwrap();
        let eig = m.eigenvalues();
        // Hilbert matrix of order 5 is positive definite with trace 1 + 1/3 + 1/5 + 1/7 + 1/9.
        assert!(eig[0] > 0.0);
        let trace: f64 = eig.iter().sum();
        assert!((trace - m.trace()).abs() < 1e-12);
        assert_eq!(psd_status(&m, 0.0).unwrap(), Definiteness::PositiveDefinite);
    }
}
