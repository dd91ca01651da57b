//! Auxetic behaviour of the periodic framework spanned by a quadrilateral's
//! diagonals.

use alloc::vec;
use alloc::vec::Vec;

use super::linkage::{LinkLengths, Quadrilateral};
use super::path::{gram_velocity, DeformationPath};
use crate::error::{Error, Result};
use crate::geom::conic::{classify_conic, fit_conic, ConicClass, ConicCoeffs};
use crate::geom::polygon::{cross, Point};
use crate::geom::sym::{psd_status, Definiteness};
use crate::math;
use crate::runs::label_runs;
use crate::two_orbit::{
    config_from_cartesian, local_auxetic_test, AuxeticStatus, AuxeticTestOptions, FrameworkSpec, LatticeConfig,
};

/// Parameter tolerance for transition refinement.
pub const TRANSITION_TOL: f64 = 1e-10;

/// A maximal parameter interval on which `sign · dω/dτ` is PSD.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AuxeticInterval {
    /// `lo ∈ [0, 1)`; `hi > lo` and exceeds 1 when the interval wraps.
    pub lo: f64,
    pub hi: f64,
    pub sign: i32,
    pub strict_interior: bool,
    pub endpoints_refined: bool,
}

impl AuxeticInterval {
    pub fn contains(&self, tau: f64) -> bool {
        let t = self.lo + math::frac(tau - self.lo);
        t >= self.lo && t <= self.hi
    }

    pub fn midpoint(&self) -> f64 {
        math::frac(0.5 * (self.lo + self.hi))
    }
}

fn sample_label(dw: &crate::geom::sym::SymMatrix, tol: f64) -> Result<(Option<i8>, bool)> {
    if dw.max_abs() <= tol {
        return Ok((None, false));
    }
    Ok(match psd_status(dw, tol * (1.0 + dw.max_abs()))? {
        Definiteness::PositiveDefinite => (Some(1), true),
        Definiteness::PositiveSemidefiniteSingular => (Some(1), false),
        Definiteness::NegativeDefinite => (Some(-1), true),
        Definiteness::NegativeSemidefiniteSingular => (Some(-1), false),
        Definiteness::Indefinite | Definiteness::Zero => (None, false),
    })
}

/// Smallest eigenvalue of `sign · dω/dτ` at `τ`.
fn oriented_min_eig(path: &DeformationPath, tau: f64, sign: f64) -> Result<f64> {
    Ok(path.velocity_at(tau)?.scale(sign).eigenvalues()[0])
}

/// Bisects between a sample outside the interval and one inside for the
/// zero of `λ_min(sign · dω/dτ)`. `None` when the outer value is not negative.
fn refine(path: &DeformationPath, outside: f64, inside: f64, sign: f64) -> Result<Option<f64>> {
    if oriented_min_eig(path, outside, sign)? >= 0.0 {
        return Ok(None);
    }
    let (mut out, mut inn) = (outside, inside);
    while (inn - out).abs() > TRANSITION_TOL {
        let mid = 0.5 * (out + inn);
        if oriented_min_eig(path, mid, sign)? >= 0.0 {
            inn = mid;
        } else {
            out = mid;
        }
    }
    Ok(Some(0.5 * (out + inn)))
}

/// Scans the samples for PSD Gram velocities of either orientation, merges
/// consecutive hits and refines both ends by bisection on the smallest
/// eigenvalue of the oriented velocity.
pub fn auxetic_intervals(path: &DeformationPath, tol: f64) -> Result<Vec<AuxeticInterval>> {
    let n = path.len();
    let mut labels = Vec::with_capacity(n);
    let mut strict = Vec::with_capacity(n);
    for i in 0..n {
        let (label, s) = match gram_velocity(path, i) {
            Ok(dw) => sample_label(&dw, tol)?,
            Err(Error::NearSingular) => (None, false),
            Err(e) => return Err(e),
        };
        labels.push(label);
        strict.push(s);
    }
    let mut out = Vec::new();
    for run in label_runs(&labels, path.closed) {
        let first = run.start;
        let last = run.last(n);
        if run.len < 2 {
            return Err(Error::Resolution { samples: run.len, tau: path.params[first] });
        }
        let sign = run.label as i32;
        // Parameters unwrapped so that lo ≤ first ≤ last ≤ hi.
        let t_first = path.params[first];
        let t_last = if last < first { path.params[last] + 1.0 } else { path.params[last] };
        let strict_interior = (1..run.len.saturating_sub(1)).all(|k| strict[(first + k) % n]);
        if run.len == n {
            out.push(AuxeticInterval { lo: 0.0, hi: 1.0, sign, strict_interior, endpoints_refined: false });
            continue;
        }
        let before = (first + n - 1) % n;
        let after = (last + 1) % n;
        let t_before = if before > first { path.params[before] - 1.0 } else { path.params[before] };
        let t_after = if after < last || last < first { path.params[after] + 1.0 } else { path.params[after] };
        let t_after = if t_after < t_last { t_after + 1.0 } else { t_after };
        let lo = refine(path, t_before, t_first, sign as f64)?;
        let hi = refine(path, t_after, t_last, sign as f64)?;
        let endpoints_refined = lo.is_some() && hi.is_some();
        let lo = lo.unwrap_or(0.5 * (t_before + t_first));
        let hi = hi.unwrap_or(0.5 * (t_last + t_after));
        let shift = math::floor(lo);
        out.push(AuxeticInterval { lo: lo - shift, hi: hi - shift, sign, strict_interior, endpoints_refined });
    }
    out.sort_by(|a, b| a.lo.total_cmp(&b.lo));
    Ok(out)
}

/// Lattice encoding of the framework spanned by `ABCD`: periods `AC` and
/// `BD`, orbits `{A, C}` and `{B, D}`, and the four bars at `A` reaching `B`,
/// `D`, `B − AC` and `D − AC`.
pub fn quad_framework_spec(l: &LinkLengths) -> FrameworkSpec {
    let [l1, l2, l3, l4] = l.as_array();
    FrameworkSpec::new(
        2,
        vec![vec![0, 0], vec![0, 1], vec![-1, 0], vec![-1, 1]],
        vec![l1 * l1, l4 * l4, l2 * l2, l3 * l3],
    )
    .expect("quadrilateral offsets are valid")
}

/// `(q, ω)` of a placement in the diagonal basis.
pub fn lattice_config_from_quad(quad: &Quadrilateral) -> Result<LatticeConfig> {
    check_diagonals(quad)?;
    let p = [quad.a[0] - quad.b[0], quad.a[1] - quad.b[1]];
    config_from_cartesian(&[quad.ac().to_vec(), quad.bd().to_vec()], &p)
}

/// A placement with the given `(q, ω)`, unique up to congruence: `A` at the
/// origin, `AC` along the x-axis, `BD` from the Cholesky factor of ω and
/// `B = A − Λq`.
pub fn quad_from_lattice_config(config: &LatticeConfig) -> Result<Quadrilateral> {
    if config.dim() != 2 {
        return Err(Error::DimensionMismatch { expected: 2, found: config.dim() });
    }
    let w = &config.omega;
    let (a, b, c) = (w.get(0, 0), w.get(0, 1), w.get(1, 1));
    let positive_definite = a > 0.0 && a * c - b * b > 0.0;
    if !positive_definite {
        return Err(Error::SingularLattice);
    }
    let r = math::sqrt(a);
    let ac = [r, 0.0];
    let bd = [b / r, math::sqrt(c - b * b / a)];
    let q = &config.q;
    let pb = [-(ac[0] * q[0] + bd[0] * q[1]), -(ac[1] * q[0] + bd[1] * q[1])];
    Ok(Quadrilateral::new([0.0, 0.0], pb, ac, [pb[0] + bd[0], pb[1] + bd[1]]))
}

fn check_diagonals(quad: &Quadrilateral) -> Result<f64> {
    let (ac, bd) = (quad.ac(), quad.bd());
    let area = cross(ac, bd).abs();
    if area <= 1e-12 * math::hypot(ac[0], ac[1]) * math::hypot(bd[0], bd[1]) {
        return Err(Error::SingularLattice);
    }
    Ok(area)
}

/// `|det[AC BD]|`, equal to `sqrt(det ω)`.
pub fn unit_cell_area(quad: &Quadrilateral) -> Result<f64> {
    check_diagonals(quad)
}

/// Classifies the infinitesimal motion of the framework at `quad` through
/// the lattice-coordinate tangent space.
pub fn auxetic_status_pointwise(quad: &Quadrilateral, l: &LinkLengths, tol: f64) -> Result<AuxeticStatus> {
    let spec = quad_framework_spec(l);
    let config = lattice_config_from_quad(quad)?;
    let opts = AuxeticTestOptions { tol, ..AuxeticTestOptions::default() };
    Ok(local_auxetic_test(&spec, &config, &opts)?.status)
}

/// Vertex at which the five-point conic is taken.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConicVertex {
    A,
    B,
}

/// The vertex and its four framework neighbours.
pub fn conic_points(quad: &Quadrilateral, at: ConicVertex) -> [Point; 5] {
    let shift = |p: Point, v: Point| [p[0] - v[0], p[1] - v[1]];
    match at {
        ConicVertex::A => {
            let ac = quad.ac();
            [quad.a, quad.b, quad.d, shift(quad.b, ac), shift(quad.d, ac)]
        }
        ConicVertex::B => {
            let bd = quad.bd();
            [quad.b, quad.a, quad.c, shift(quad.a, bd), shift(quad.c, bd)]
        }
    }
}

/// Default band for conic classification.
pub const CONIC_TOL: f64 = 1e-9;

/// Conic through `A` and the far ends of its four bars.
pub fn five_point_conic(quad: &Quadrilateral) -> Result<(ConicCoeffs, ConicClass)> {
    five_point_conic_at(quad, ConicVertex::A, CONIC_TOL)
}

pub fn five_point_conic_at(quad: &Quadrilateral, at: ConicVertex, tol: f64) -> Result<(ConicCoeffs, ConicClass)> {
    let c = fit_conic(&conic_points(quad, at))?;
    let class = classify_conic(&c, tol)?;
    Ok((c, class))
}
