//! Small dense matrices: one-sided Jacobi SVD, null spaces, pseudo-inverse
//! and LU solves. Sizes here never exceed a few thousand rows by ten columns.

use alloc::vec;
use alloc::vec::Vec;

use crate::math;

/// Row-major dense matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

/// Thin singular value decomposition `A = U Σ Vᵗ`.
///
/// Singular values are sorted descending; `v` holds all `cols` right singular
/// vectors (including those spanning the null space), `u` the matching left
/// vectors (zero columns where `σ = 0`).
#[derive(Debug, Clone)]
pub struct Svd {
    pub singular_values: Vec<f64>,
    pub u: Mat,
    pub v: Mat,
}

impl Mat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.as_ref().len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.as_ref().len(), c, "ragged rows");
            data.extend_from_slice(row.as_ref());
        }
        Mat { rows: r, cols: c, data }
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.cols);
        (0..self.rows).map(|i| math::dot(self.row(i), x)).collect()
    }

    pub fn mul(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows);
        let mut out = Mat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn max_abs(&self) -> f64 {
        math::max_abs(&self.data)
    }

    /// One-sided (Hestenes) Jacobi SVD.
    pub fn svd(&self) -> Svd {
        let (m, n) = (self.rows, self.cols);
        // Column-major working copies keep the rotations cache friendly.
        let mut w: Vec<Vec<f64>> = (0..n).map(|j| self.column(j)).collect();
        let mut v: Vec<Vec<f64>> = (0..n).map(|j| (0..n).map(|i| if i == j { 1.0 } else { 0.0 }).collect()).collect();
        // Columns below this squared norm are rounding noise; rotating them
        // against each other never settles.
        let negligible = {
            let f2: f64 = w.iter().map(|c| math::dot(c, c)).sum();
            (f64::EPSILON * f64::EPSILON) * f2
        };
        for _sweep in 0..80 {
            let mut rotated = false;
            for p in 0..n {
                for q in (p + 1)..n {
                    let alpha = math::dot(&w[p], &w[p]);
                    let beta = math::dot(&w[q], &w[q]);
                    let gamma = math::dot(&w[p], &w[q]);
                    if gamma == 0.0 || gamma.abs() <= 1e-15 * math::sqrt(alpha * beta) || alpha.min(beta) <= negligible
                    {
                        continue;
                    }
                    rotated = true;
                    let zeta = (beta - alpha) / (2.0 * gamma);
                    let t = zeta.signum() / (zeta.abs() + math::sqrt(1.0 + zeta * zeta));
                    let t = if zeta == 0.0 { 1.0 } else { t };
                    let c = 1.0 / math::sqrt(1.0 + t * t);
                    let s = c * t;
                    let (wp, wq) = pair_mut(&mut w, p, q);
                    rotate(wp, wq, c, s);
                    let (vp, vq) = pair_mut(&mut v, p, q);
                    rotate(vp, vq, c, s);
                }
            }
            if !rotated {
                break;
            }
        }
        let sigma: Vec<f64> = w.iter().map(|col| math::norm(col)).collect();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| sigma[b].total_cmp(&sigma[a]));
        let mut u = Mat::zeros(m, n);
        let mut vm = Mat::zeros(n, n);
        let mut singular_values = Vec::with_capacity(n);
        for (k, &j) in order.iter().enumerate() {
            singular_values.push(sigma[j]);
            if sigma[j] > 0.0 {
                for i in 0..m {
                    u[(i, k)] = w[j][i] / sigma[j];
                }
            }
            for i in 0..n {
                vm[(i, k)] = v[j][i];
            }
        }
        Svd { singular_values, u, v: vm }
    }

    /// Minimum-norm least-squares solution of `A x = b`, discarding singular
    /// values below `rcond · σ_max`.
    pub fn pinv_solve(&self, b: &[f64], rcond: f64) -> Vec<f64> {
        self.svd().pinv_solve(b, rcond)
    }

    /// Solves a square system by LU with partial pivoting.
    pub fn solve(&self, b: &[f64]) -> Option<Vec<f64>> {
        assert_eq!(self.rows, self.cols);
        assert_eq!(b.len(), self.rows);
        let n = self.rows;
        let mut a = self.clone();
        let mut x = b.to_vec();
        let scale = a.max_abs();
        if scale == 0.0 {
            return None;
        }
        for k in 0..n {
            let pivot = (k..n).max_by(|&i, &j| a[(i, k)].abs().total_cmp(&a[(j, k)].abs()))?;
            if a[(pivot, k)].abs() <= 1e-14 * scale {
                return None;
            }
            if pivot != k {
                for j in 0..n {
                    a.data.swap(k * n + j, pivot * n + j);
                }
                x.swap(k, pivot);
            }
            for i in (k + 1)..n {
                let f = a[(i, k)] / a[(k, k)];
                if f == 0.0 {
                    continue;
                }
                for j in k..n {
                    let akj = a[(k, j)];
                    a[(i, j)] -= f * akj;
                }
                x[i] -= f * x[k];
            }
        }
        for k in (0..n).rev() {
            let mut s = x[k];
            for j in (k + 1)..n {
                s -= a[(k, j)] * x[j];
            }
            x[k] = s / a[(k, k)];
        }
        Some(x)
    }
}

impl Svd {
    pub fn max_singular(&self) -> f64 {
        self.singular_values.first().copied().unwrap_or(0.0)
    }

    /// Right singular vectors whose singular value is at most `rtol · σ_max`.
    pub fn null_space(&self, rtol: f64) -> Vec<Vec<f64>> {
        let cutoff = rtol * self.max_singular();
        self.singular_values.iter().enumerate().filter(|(_, &s)| s <= cutoff).map(|(k, _)| self.v.column(k)).collect()
    }

    pub fn rank(&self, rtol: f64) -> usize {
        let cutoff = rtol * self.max_singular();
        self.singular_values.iter().filter(|&&s| s > cutoff).count()
    }

    pub fn pinv_solve(&self, b: &[f64], rcond: f64) -> Vec<f64> {
        let n = self.v.rows();
        let cutoff = rcond * self.max_singular();
        let mut x = vec![0.0; n];
        for (k, &s) in self.singular_values.iter().enumerate() {
            if s <= cutoff || s == 0.0 {
                continue;
            }
            let coef = (0..self.u.rows()).map(|i| self.u[(i, k)] * b[i]).sum::<f64>() / s;
            for (i, xi) in x.iter_mut().enumerate() {
                *xi += coef * self.v[(i, k)];
            }
        }
        x
    }
}

fn pair_mut<T>(v: &mut [T], p: usize, q: usize) -> (&mut T, &mut T) {
    debug_assert!(p < q);
    let (left, right) = v.split_at_mut(q);
    (&mut left[p], &mut right[0])
}

fn rotate(a: &mut [f64], b: &mut [f64], c: f64, s: f64) {
    for (x, y) in a.iter_mut().zip(b.iter_mut()) {
        let (xa, yb) = (*x, *y);
        *x = c * xa - s * yb;
        *y = s * xa + c * yb;
    }
}

impl core::ops::Index<(usize, usize)> for Mat {
    type Output = f64;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

impl core::ops::IndexMut<(usize, usize)> for Mat {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.cols + j]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reconstruct(svd: &Svd) -> Mat {
        let n = svd.singular_values.len();
        let mut s = Mat::zeros(n, n);
        for k in 0..n {
            s[(k, k)] = svd.singular_values[k];
        }
        svd.u.mul(&s).mul(&svd.v.transpose())
    }

    #[test]
    fn svd_reconstructs_tall_and_wide() {
        let tall = Mat::from_rows(&[[1.0, 2.0], [3.0, 4.0], [5.0, 6.5]]);
        let wide = tall.transpose();
        for a in [tall, wide] {
            let svd = a.svd();
            let r = reconstruct(&svd);
            for i in 0..a.rows() {
                for j in 0..a.cols() {
                    assert!((r[(i, j)] - a[(i, j)]).abs() < 1e-12);
                }
            }
            assert!(svd.singular_values.windows(2).all(|w| w[0] >= w[1]));
        }
    }

    #[test]
    fn null_space_of_wide_matrix() {
        let a = Mat::from_rows(&[[1.0, 1.0, 0.0], [0.0, 1.0, 1.0]]);
        let ns = a.svd().null_space(1e-12);
        assert_eq!(ns.len(), 1);
        let r = a.mul_vec(&ns[0]);
        assert!(r.iter().all(|x| x.abs() < 1e-14));
        assert!((math::norm(&ns[0]) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn lu_and_pinv_agree_on_square_systems() {
        let a = Mat::from_rows(&[[0.0, 2.0, 1.0], [1.0, -1.0, 0.0], [3.0, 0.5, 2.0]]);
        let b = [1.0, 2.0, 3.0];
        let x = a.solve(&b).unwrap();
        let y = a.pinv_solve(&b, 1e-14);
        for k in 0..3 {
            assert!((x[k] - y[k]).abs() < 1e-12);
        }
        assert!(Mat::from_rows(&[[1.0, 2.0], [2.0, 4.0]]).solve(&[1.0, 1.0]).is_none());
    }
}
