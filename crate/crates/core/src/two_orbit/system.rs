//! Edge-length equations in lattice coordinates and their first-order data.

use alloc::vec::Vec;

use super::dependence::dependence_coeffs;
use super::spec::FrameworkSpec;
use crate::error::{Error, Result};
use crate::geom::dense::Mat;
use crate::geom::sym::{packed_len, SymMatrix};
use crate::math;

/// A point `(q, ω)`: fractional position of the second orbit and Gram matrix
/// of the period generators.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeConfig {
    pub q: Vec<f64>,
    pub omega: SymMatrix,
}

impl LatticeConfig {
    pub fn new(q: Vec<f64>, omega: SymMatrix) -> Result<Self> {
        if q.len() != omega.dim() {
            return Err(Error::DimensionMismatch { expected: omega.dim(), found: q.len() });
        }
        if q.iter().any(|x| !x.is_finite()) || !omega.is_finite() {
            return Err(Error::NonFinite);
        }
        Ok(LatticeConfig { q, omega })
    }

    pub fn dim(&self) -> usize {
        self.q.len()
    }

    /// Flattens to `(q, packed upper triangle of ω)`.
    pub fn to_vector(&self) -> Vec<f64> {
        let mut x = self.q.clone();
        x.extend_from_slice(self.omega.upper());
        x
    }

    pub fn from_vector(dim: usize, x: &[f64]) -> Result<Self> {
        if x.len() != dim + packed_len(dim) {
            return Err(Error::DimensionMismatch { expected: dim + packed_len(dim), found: x.len() });
        }
        LatticeConfig::new(x[..dim].to_vec(), SymMatrix::from_upper(dim, x[dim..].to_vec())?)
    }
}

fn check_dims(spec: &FrameworkSpec, config: &LatticeConfig) -> Result<()> {
    if config.dim() != spec.dim() {
        return Err(Error::DimensionMismatch { expected: spec.dim(), found: config.dim() });
    }
    Ok(())
}

fn edge_vector(spec: &FrameworkSpec, q: &[f64], i: usize) -> Vec<f64> {
    spec.offset(i).iter().zip(q).map(|(&n, &qc)| n as f64 - qc).collect()
}

/// `⟨ω(nᵢ − q), nᵢ − q⟩ − sᵢ` for every edge.
pub fn residuals(spec: &FrameworkSpec, config: &LatticeConfig) -> Result<Vec<f64>> {
    check_dims(spec, config)?;
    Ok((0..spec.edge_count())
        .map(|i| {
            let u = edge_vector(spec, &config.q, i);
            config.omega.form(&u, &u) - spec.squared_lengths()[i]
        })
        .collect())
}

/// Convergence threshold `1e-10 · (1 + max sᵢ)` on the residual ∞-norm.
pub fn residual_tol(spec: &FrameworkSpec) -> f64 {
    1e-10 * (1.0 + spec.max_squared_length())
}

fn basis_matrix(spec: &FrameworkSpec) -> Mat {
    let d = spec.dim();
    Mat::from_rows(&(1..=d).map(|i| spec.offset(i).iter().map(|&x| x as f64).collect::<Vec<_>>()).collect::<Vec<_>>())
}

/// Right-hand sides `(s₀ − sᵢ + ⟨ωnᵢ, nᵢ⟩)/2` of the linear equations for `ωq`.
fn half_rhs(spec: &FrameworkSpec, omega: &SymMatrix, i: usize) -> f64 {
    let s = spec.squared_lengths();
    let n: Vec<f64> = spec.offset(i).iter().map(|&x| x as f64).collect();
    0.5 * (s[0] - s[i] + omega.form(&n, &n))
}

/// Solves `2⟨ωq, nᵢ⟩ = s₀ − sᵢ + ⟨ωnᵢ, nᵢ⟩`, `i = 1..d`, for the vector `ωq`.
pub fn solve_omega_q(spec: &FrameworkSpec, omega: &SymMatrix) -> Result<Vec<f64>> {
    if omega.dim() != spec.dim() {
        return Err(Error::DimensionMismatch { expected: spec.dim(), found: omega.dim() });
    }
    if !omega.is_finite() {
        return Err(Error::NonFinite);
    }
    let rhs: Vec<f64> = (1..=spec.dim()).map(|i| half_rhs(spec, omega, i)).collect();
    basis_matrix(spec).solve(&rhs).ok_or(Error::BadBasis)
}

/// An affine function `coeffs · upper(ω) + constant` of the Gram entries.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineFunctional {
    pub coeffs: Vec<f64>,
    pub constant: f64,
}

impl AffineFunctional {
    pub fn eval(&self, omega: &SymMatrix) -> f64 {
        math::dot(&self.coeffs, omega.upper()) + self.constant
    }
}

/// Packed coefficients of the quadratic form `u ↦ uᵗωu` as a linear function of ω.
fn form_coeffs(u: &[f64]) -> Vec<f64> {
    let d = u.len();
    let mut out = Vec::with_capacity(packed_len(d));
    for a in 0..d {
        for b in a..d {
            out.push(if a == b { u[a] * u[a] } else { 2.0 * u[a] * u[b] });
        }
    }
    out
}

/// Constraints on ω alone, one per dependent offset `k > d`, obtained by
/// writing `⟨ωq, n_k⟩` through the basis offsets and eliminating `ωq`:
///
/// `⟨ωn_k, n_k⟩ − Σᵢ a_{k,i}⟨ωnᵢ, nᵢ⟩ + (s₀ − s_k) − Σᵢ a_{k,i}(s₀ − sᵢ) = 0`.
pub fn linear_constraints_omega(spec: &FrameworkSpec) -> Vec<AffineFunctional> {
    let d = spec.dim();
    let s = spec.squared_lengths();
    let table = dependence_coeffs(spec).as_f64();
    let as_f = |i: usize| -> Vec<f64> { spec.offset(i).iter().map(|&x| x as f64).collect() };
    table
        .iter()
        .enumerate()
        .map(|(r, a)| {
            let k = d + 1 + r;
            let mut coeffs = form_coeffs(&as_f(k));
            let mut constant = s[0] - s[k];
            for (i, &aki) in a.iter().enumerate() {
                let ci = form_coeffs(&as_f(i + 1));
                coeffs.iter_mut().zip(&ci).for_each(|(c, x)| *c -= aki * x);
                constant -= aki * (s[0] - s[i + 1]);
            }
            AffineFunctional { coeffs, constant }
        })
        .collect()
}

/// Derivatives of the residuals with respect to `(q, upper(ω))`.
///
/// Row `i` is `−2ω(nᵢ − q)` in the `q` block and `uₐu_b` (doubled off the
/// diagonal) in the ω block, with `u = nᵢ − q`.
pub fn jacobian(spec: &FrameworkSpec, config: &LatticeConfig) -> Result<Mat> {
    check_dims(spec, config)?;
    let d = spec.dim();
    let mut j = Mat::zeros(spec.edge_count(), spec.unknowns());
    for i in 0..spec.edge_count() {
        let u = edge_vector(spec, &config.q, i);
        let wu = config.omega.mul_vec(&u);
        for c in 0..d {
            j[(i, c)] = -2.0 * wu[c];
        }
        for (k, v) in form_coeffs(&u).into_iter().enumerate() {
            j[(i, d + k)] = v;
        }
    }
    Ok(j)
}

/// Relative singular-value cutoff separating the tangent space from the
/// row space of the Jacobian.
pub const RANK_RTOL: f64 = 1e-8;

/// Orthonormal basis of the Jacobian null space at a configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct TangentSpace {
    pub dim: usize,
    pub basis: Vec<Vec<f64>>,
    /// Set when the null space is larger than the flexibility count.
    pub singular: bool,
    pub singular_values: Vec<f64>,
}

impl TangentSpace {
    /// The ω block of a tangent vector as a symmetric matrix.
    pub fn omega_part(d: usize, v: &[f64]) -> SymMatrix {
        SymMatrix::from_upper(d, v[d..].to_vec()).expect("tangent vector has the unknown-vector layout")
    }

    pub fn q_part(d: usize, v: &[f64]) -> &[f64] {
        &v[..d]
    }
}

/// Tangent space at a configuration.
///
/// The rank is decided in the variables `(p, ω)` with `p = ωq`. Subtracting
/// the first edge equation from the others leaves `d` linear rows
/// `⟨ωnᵢ, nᵢ⟩ − 2⟨p, nᵢ⟩` plus the single row `⟨p, ω⁻¹p⟩ = s₀`, which is
/// rescaled by `1 + |q|²`. In `(q, ω)` the rows grow like `|q|²`, so near a
/// degenerate lattice the plain Jacobian loses the rank gap. The basis is
/// mapped back through `δq = ω⁻¹(δp − δω·q)` and re-orthonormalised.
pub fn tangent_space(spec: &FrameworkSpec, config: &LatticeConfig) -> Result<TangentSpace> {
    check_dims(spec, config)?;
    let d = spec.dim();
    let q = &config.q;
    let mut j = Mat::zeros(spec.edge_count(), spec.unknowns());
    let scale = 1.0 + math::dot(q, q);
    for c in 0..d {
        j[(0, c)] = 2.0 * q[c] / scale;
    }
    for (k, v) in form_coeffs(q).into_iter().enumerate() {
        j[(0, d + k)] = -v / scale;
    }
    for i in 1..spec.edge_count() {
        let n: Vec<f64> = spec.offset(i).iter().map(|&x| x as f64).collect();
        for c in 0..d {
            j[(i, c)] = -2.0 * n[c];
        }
        for (k, v) in form_coeffs(&n).into_iter().enumerate() {
            j[(i, d + k)] = v;
        }
    }
    let svd = j.svd();
    let omega =
        Mat::from_rows(&(0..d).map(|a| (0..d).map(|b| config.omega.get(a, b)).collect::<Vec<_>>()).collect::<Vec<_>>());
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for v in svd.null_space(RANK_RTOL) {
        let dw = SymMatrix::from_upper(d, v[d..].to_vec())?;
        let dwq = dw.mul_vec(q);
        let rhs: Vec<f64> = (0..d).map(|c| v[c] - dwq[c]).collect();
        let dq = omega.solve(&rhs).ok_or(Error::SingularLattice)?;
        let mut x = dq;
        x.extend_from_slice(&v[d..]);
        for b in &basis {
            let c = math::dot(&x, b);
            x.iter_mut().zip(b).for_each(|(xi, bi)| *xi -= c * bi);
        }
        let nrm = math::norm(&x);
        if nrm > 0.0 {
            x.iter_mut().for_each(|xi| *xi /= nrm);
            basis.push(x);
        }
    }
    let expected = spec.flexibility().max(0) as usize;
    Ok(TangentSpace { dim: basis.len(), singular: basis.len() > expected, basis, singular_values: svd.singular_values })
}

/// Gauss–Newton projection onto the solution set using minimum-norm steps
/// with a backtracking line search. Returns the corrected point if the
/// residual ∞-norm reaches `tol` within `max_iter` iterations.
pub(crate) fn project(spec: &FrameworkSpec, x0: &[f64], tol: f64, max_iter: usize) -> Option<Vec<f64>> {
    let d = spec.dim();
    let mut x = x0.to_vec();
    let eval = |x: &[f64]| -> Option<Vec<f64>> {
        let cfg = LatticeConfig::from_vector(d, x).ok()?;
        residuals(spec, &cfg).ok()
    };
    let mut f = eval(&x)?;
    for _ in 0..max_iter {
        let fnorm = math::max_abs(&f);
        if fnorm <= tol {
            return Some(polish(spec, x, f));
        }
        let cfg = LatticeConfig::from_vector(d, &x).ok()?;
        let j = jacobian(spec, &cfg).ok()?;
        let step = j.pinv_solve(&f, 1e-12);
        let mut lambda = 1.0;
        let mut accepted = false;
        for _ in 0..12 {
            let trial: Vec<f64> = x.iter().zip(&step).map(|(a, b)| a - lambda * b).collect();
            if let Some(ft) = eval(&trial) {
                if math::max_abs(&ft) < fnorm || math::max_abs(&ft) <= tol {
                    x = trial;
                    f = ft;
                    accepted = true;
                    break;
                }
            }
            lambda *= 0.5;
        }
        if !accepted {
            return None;
        }
    }
    (math::max_abs(&f) <= tol).then_some(x)
}

/// Up to two extra Newton steps once converged, kept only while they shrink
/// the residual.
fn polish(spec: &FrameworkSpec, mut x: Vec<f64>, mut f: Vec<f64>) -> Vec<f64> {
    let d = spec.dim();
    for _ in 0..2 {
        let Ok(cfg) = LatticeConfig::from_vector(d, &x) else { break };
        let Ok(j) = jacobian(spec, &cfg) else { break };
        let step = j.pinv_solve(&f, 1e-12);
        let trial: Vec<f64> = x.iter().zip(&step).map(|(a, b)| a - b).collect();
        let Some(ft) = LatticeConfig::from_vector(d, &trial).ok().and_then(|c| residuals(spec, &c).ok()) else {
            break;
        };
        if math::max_abs(&ft) >= math::max_abs(&f) {
            break;
        }
        x = trial;
        f = ft;
    }
    x
}

/// Lattice coordinates of the configuration seen from a Cartesian placement:
/// `Λ` holds the period generators as columns and `p` is the Cartesian
/// position of the orbit-1 vertex relative to the orbit-2 vertex at offset 0.
pub fn config_from_cartesian(lambda_columns: &[Vec<f64>], p: &[f64]) -> Result<LatticeConfig> {
    let d = lambda_columns.len();
    if p.len() != d || lambda_columns.iter().any(|c| c.len() != d) {
        return Err(Error::DimensionMismatch { expected: d, found: p.len() });
    }
    let omega = crate::geom::sym::gram(lambda_columns)?;
    let rows: Vec<Vec<f64>> = (0..d).map(|r| (0..d).map(|c| lambda_columns[c][r]).collect()).collect();
    let q = Mat::from_rows(&rows).solve(p).ok_or(Error::SingularLattice)?;
    LatticeConfig::new(q, omega)
}
