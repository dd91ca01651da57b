//! Implicit cubic through the `q`-projection of a planar path.

use alloc::vec::Vec;

use super::continuation::LatticePath;
use super::spec::FrameworkSpec;
use crate::error::{Error, Result};
use crate::geom::dense::Mat;
use crate::math;

/// Relative residual above which a fit is flagged.
pub const CUBIC_FIT_WARNING: f64 = 1e-6;

/// Least-squares cubic `Σ cₖ xⁱyʲ = 0` (`i + j ≤ 3`) in normalized
/// coordinates `(x, y) = (q − center) / scale`.
#[derive(Debug, Clone, PartialEq)]
pub struct CubicFit {
    pub points: Vec<[f64; 2]>,
    /// Unit coefficient vector over `1, x, y, x², xy, y², x³, x²y, xy², y³`.
    pub coeffs: [f64; 10],
    pub center: [f64; 2],
    pub scale: f64,
    /// Largest `|p(x, y)|` over the samples.
    pub max_residual: f64,
    /// `max_residual` divided by the largest monomial-vector norm.
    pub relative_residual: f64,
    pub warning: bool,
}

impl CubicFit {
    /// Evaluates the fitted polynomial at a point given in `q` coordinates.
    pub fn eval(&self, q: [f64; 2]) -> f64 {
        let x = (q[0] - self.center[0]) / self.scale;
        let y = (q[1] - self.center[1]) / self.scale;
        math::dot(&self.coeffs, &monomials(x, y))
    }
}

fn monomials(x: f64, y: f64) -> [f64; 10] {
    [1.0, x, y, x * x, x * y, y * y, x * x * x, x * x * y, x * y * y, y * y * y]
}

/// Collects the `q` samples of a planar four-edge path and fits the cubic.
pub fn cubic_projection_samples(spec: &FrameworkSpec, path: &LatticePath) -> Result<CubicFit> {
    if spec.dim() != 2 || spec.edge_count() != 4 {
        return Err(Error::InvalidInput("cubic projection needs d = 2 and m = 4"));
    }
    let points: Vec<[f64; 2]> = path.configs.iter().map(|c| [c.q[0], c.q[1]]).collect();
    fit_cubic(points)
}

pub fn fit_cubic(points: Vec<[f64; 2]>) -> Result<CubicFit> {
    if points.len() < 10 {
        return Err(Error::InvalidInput("at least 10 samples are needed for a cubic fit"));
    }
    if points.iter().any(|p| !(p[0].is_finite() && p[1].is_finite())) {
        return Err(Error::NonFinite);
    }
    let n = points.len() as f64;
    let center = [points.iter().map(|p| p[0]).sum::<f64>() / n, points.iter().map(|p| p[1]).sum::<f64>() / n];
    let mut scale = points.iter().fold(0.0f64, |m, p| m.max((p[0] - center[0]).abs()).max((p[1] - center[1]).abs()));
    if scale == 0.0 {
        scale = 1.0;
    }
    let rows: Vec<[f64; 10]> =
        points.iter().map(|p| monomials((p[0] - center[0]) / scale, (p[1] - center[1]) / scale)).collect();
    let svd = Mat::from_rows(&rows).svd();
    let mut coeffs = [0.0; 10];
    for (k, c) in coeffs.iter_mut().enumerate() {
        *c = svd.v[(k, 9)];
    }
    let row_scale = rows.iter().fold(0.0f64, |m, r| m.max(math::norm(r)));
    let max_residual = rows.iter().fold(0.0f64, |m, r| m.max(math::dot(r, &coeffs).abs()));
    let relative_residual = max_residual / row_scale;
    Ok(CubicFit {
        points,
        coeffs,
        center,
        scale,
        max_residual,
        relative_residual,
        warning: relative_residual > CUBIC_FIT_WARNING,
    })
}
