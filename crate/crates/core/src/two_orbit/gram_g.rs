//! Gram matrix of the edge vectors `v₀, …, v_d`.

use alloc::vec::Vec;

use super::spec::FrameworkSpec;
use super::system::LatticeConfig;
use crate::error::{Error, Result};
use crate::geom::sym::SymMatrix;
use crate::math;

/// `G = VᵗV` for the first `d + 1` edge vectors, with its spectral
/// certificate of lying on the boundary of the PSD cone.
#[derive(Debug, Clone, PartialEq)]
pub struct GramG {
    pub g: SymMatrix,
    /// Ascending eigenvalues of `g`.
    pub eigenvalues: Vec<f64>,
}

impl GramG {
    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn second_eigenvalue(&self) -> f64 {
        self.eigenvalues[1]
    }

    /// Vectors `w₀, …, w_d ∈ Rᵈ` with `⟨wᵢ, wⱼ⟩ = gᵢⱼ`, built from the top
    /// `d` eigenpairs.
    pub fn factor(&self) -> Vec<Vec<f64>> {
        let n = self.g.dim();
        let (vals, vecs) = self.g.eigen();
        (0..n).map(|i| (1..n).map(|k| math::sqrt(vals[k].max(0.0)) * vecs[k][i]).collect()).collect()
    }
}

/// Evaluates `gᵢⱼ = ⟨ω(nᵢ − q), nⱼ − q⟩` for `i, j ≤ d` and checks that the
/// diagonal reproduces the squared lengths, the smallest eigenvalue vanishes
/// and the rest are positive.
pub fn to_gram_g(spec: &FrameworkSpec, config: &LatticeConfig) -> Result<GramG> {
    let d = spec.dim();
    if config.dim() != d {
        return Err(Error::DimensionMismatch { expected: d, found: config.dim() });
    }
    let edges: Vec<Vec<f64>> =
        (0..=d).map(|i| spec.offset(i).iter().zip(&config.q).map(|(&n, &q)| n as f64 - q).collect()).collect();
    let mut g = SymMatrix::zeros(d + 1);
    for i in 0..=d {
        let wi = config.omega.mul_vec(&edges[i]);
        for j in i..=d {
            g.set(i, j, math::dot(&wi, &edges[j]));
        }
    }
    let s = spec.squared_lengths();
    let tol = 1e-9 * (1.0 + spec.max_squared_length());
    if (0..=d).any(|i| (g.get(i, i) - s[i]).abs() > tol) {
        return Err(Error::InconsistentConfig("Gram diagonal differs from the squared lengths"));
    }
    let eigenvalues = g.eigenvalues();
    if eigenvalues[0].abs() > tol {
        return Err(Error::InconsistentConfig("edge Gram matrix is not singular"));
    }
    if eigenvalues[1] <= tol {
        return Err(Error::InconsistentConfig("edge Gram matrix has rank below d"));
    }
    Ok(GramG { g, eigenvalues })
}
