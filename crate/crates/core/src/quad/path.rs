//! One full traversal of a connected component of the four-bar
//! configuration space.

use alloc::vec::Vec;
use core::f64::consts::{PI, TAU};

use super::linkage::{grashof_class, place, GrashofClass, LinkLengths, Quadrilateral};
use crate::error::{Error, Result};
use crate::geom::polygon::cross;
use crate::geom::sym::{gram, SymMatrix};
use crate::math;

/// Samples closer than this to a parallel-diagonal parameter are dropped.
pub const EXCLUSION_RADIUS: f64 = 1e-8;
/// Step of the five-point stencil used by [`velocity_at`].
pub const STENCIL_STEP: f64 = 1e-4;
pub const MIN_SAMPLES: usize = 64;

/// How the crank angle moves as `τ` runs over `[0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Traversal {
    /// `θ = 2πτ` on a fixed assembly branch.
    FullTurn { branch: i32 },
    /// `θ = center − half · cos 2πτ`, with the assembly branch following the
    /// sign of `sin 2πτ` so the path runs smoothly through the dead points
    /// at `τ = 0` and `τ = 1/2`. `half` is negative on the mirrored loop, so
    /// that loop is the reflection of the other under `τ ↦ 1 − τ`.
    Swing { center: f64, half: f64 },
}

impl Traversal {
    /// Crank angle and assembly branch at `τ`. The branch is `0` at dead points.
    pub fn angle_and_branch(&self, tau: f64) -> (f64, i32) {
        match *self {
            Traversal::FullTurn { branch } => (TAU * tau, branch),
            Traversal::Swing { center, half } => {
                let s = math::sin(TAU * tau);
                let b = if s > 0.0 {
                    1
                } else if s < 0.0 {
                    -1
                } else {
                    0
                };
                (center - half * math::cos(TAU * tau), b)
            }
        }
    }
}

/// Chooses the crank sweep for one component.
///
/// With neither cosine bound active the crank turns fully and the two
/// assembly branches are the two loops. With one bound active the crank
/// rocks about `0` or `π` and a single loop visits both branches. With both
/// active the crank rocks inside `[α, β]` or `[−β, −α]`, one loop each.
pub fn traversal(l: &LinkLengths, branch: i32) -> Result<Traversal> {
    if branch != 1 && branch != -1 {
        return Err(Error::InvalidInput("branch must be +1 or -1"));
    }
    let (cmin, cmax) = l.crank_cos_range();
    let low_active = cmin > -1.0;
    let high_active = cmax < 1.0;
    Ok(match (low_active, high_active) {
        (false, false) => Traversal::FullTurn { branch },
        (true, false) => Traversal::Swing { center: 0.0, half: math::acos(cmin) },
        (false, true) => Traversal::Swing { center: PI, half: PI - math::acos(cmax) },
        (true, true) => {
            let alpha = math::acos(cmax);
            let beta = math::acos(cmin);
            let b = branch as f64;
            Traversal::Swing { center: b * 0.5 * (alpha + beta), half: b * 0.5 * (beta - alpha) }
        }
    })
}

/// `cos θ − cos θ_b` given `δ = θ − θ_b` exactly.
fn cos_gap(theta_b: f64, delta: f64) -> f64 {
    -2.0 * math::sin(theta_b + 0.5 * delta) * math::sin(0.5 * delta)
}

/// Placement at parameter `τ` (taken modulo 1).
pub fn quad_at(l: &LinkLengths, tr: &Traversal, tau: f64) -> Result<Quadrilateral> {
    let (theta, b) = tr.angle_and_branch(tau);
    let (cmin, cmax) = l.crank_cos_range();
    match *tr {
        Traversal::FullTurn { branch } => {
            let c = math::cos(theta);
            Ok(place(l, theta, c - cmin, cmax - c, branch as f64)?.quad)
        }
        Traversal::Swing { center, half } => {
            // Distances to the ends of the swing, exact in τ.
            let (sp, cp) = (math::sin(PI * tau), math::cos(PI * tau));
            let ends = [(center - half, 2.0 * half * sp * sp), (center + half, -2.0 * half * cp * cp)];
            let c = math::cos(theta);
            let (mut low, mut high) = (c - cmin, cmax - c);
            let (mut near_low, mut near_high) = (f64::INFINITY, f64::INFINITY);
            // Each active bound is measured from the swing end nearest to θ.
            for (theta_b, delta) in ends {
                let cb = math::cos(theta_b);
                if (cb - cmin).abs() <= (cb - cmax).abs() {
                    if delta.abs() < near_low {
                        near_low = delta.abs();
                        low = cos_gap(theta_b, delta);
                    }
                } else if delta.abs() < near_high {
                    near_high = delta.abs();
                    high = -cos_gap(theta_b, delta);
                }
            }
            Ok(place(l, theta, low, high, b as f64)?.quad)
        }
    }
}

/// `ω = gram([AC, BD])`.
pub fn quad_gram(q: &Quadrilateral) -> SymMatrix {
    gram(&[q.ac(), q.bd()]).expect("two planar vectors")
}

pub fn gram_at(l: &LinkLengths, tr: &Traversal, tau: f64) -> Result<SymMatrix> {
    Ok(quad_gram(&quad_at(l, tr, tau)?))
}

/// `dω/dτ` by a five-point central stencil on the exact placement.
pub fn velocity_at(l: &LinkLengths, tr: &Traversal, tau: f64) -> Result<SymMatrix> {
    let h = STENCIL_STEP;
    let f = |k: f64| gram_at(l, tr, tau + k * h);
    let v = f(-2.0)?.sub(&f(2.0)?).add(&f(1.0)?.sub(&f(-1.0)?).scale(8.0));
    Ok(v.scale(1.0 / (12.0 * h)))
}

fn diagonal_cross(l: &LinkLengths, tr: &Traversal, tau: f64) -> Result<f64> {
    let q = quad_at(l, tr, tau)?;
    Ok(cross(q.ac(), q.bd()))
}

/// Parameters in `[0, 1)` at which `AC ∥ BD`, located by sign changes of
/// `AC × BD` on a grid and bisection.
pub fn parallel_diagonal_params(l: &LinkLengths, tr: &Traversal, grid: usize) -> Result<Vec<f64>> {
    let grid = grid.max(2048);
    let mut out = Vec::new();
    let mut prev = diagonal_cross(l, tr, 0.0)?;
    for i in 1..=grid {
        let t1 = i as f64 / grid as f64;
        let cur = diagonal_cross(l, tr, t1)?;
        if prev == 0.0 {
            out.push((i - 1) as f64 / grid as f64);
        } else if prev * cur < 0.0 {
            let (mut lo, mut hi) = ((i - 1) as f64 / grid as f64, t1);
            let sign_lo = prev.signum();
            while hi - lo > 1e-15 {
                let mid = 0.5 * (lo + hi);
                if diagonal_cross(l, tr, mid)?.signum() == sign_lo {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            out.push(0.5 * (lo + hi) % 1.0);
        }
        prev = cur;
    }
    out.sort_by(f64::total_cmp);
    out.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
    Ok(out)
}

/// Circular distance on `[0, 1)`.
pub fn circle_distance(a: f64, b: f64) -> f64 {
    let d = math::frac(a - b);
    d.min(1.0 - d)
}

/// Uniform samples of one traversal with parallel-diagonal points removed.
#[derive(Debug, Clone, PartialEq)]
pub struct DeformationPath {
    pub lengths: LinkLengths,
    pub class: GrashofClass,
    pub branch: i32,
    pub traversal: Traversal,
    /// Strictly increasing parameters in `[0, 1)`.
    pub params: Vec<f64>,
    pub quads: Vec<Quadrilateral>,
    pub grams: Vec<SymMatrix>,
    pub closed: bool,
    pub excluded_params: Vec<f64>,
    /// Number of uniform grid points before exclusion.
    pub samples: usize,
}

impl DeformationPath {
    pub fn len(&self) -> usize {
        self.params.len()
    }

    pub fn is_empty(&self) -> bool {
        self.params.is_empty()
    }

    pub fn step(&self) -> f64 {
        1.0 / self.samples as f64
    }

    pub fn quad_at(&self, tau: f64) -> Result<Quadrilateral> {
        quad_at(&self.lengths, &self.traversal, tau)
    }

    pub fn gram_at(&self, tau: f64) -> Result<SymMatrix> {
        gram_at(&self.lengths, &self.traversal, tau)
    }

    pub fn velocity_at(&self, tau: f64) -> Result<SymMatrix> {
        velocity_at(&self.lengths, &self.traversal, tau)
    }

    /// Distance from `τ` to the nearest excluded parameter.
    pub fn distance_to_excluded(&self, tau: f64) -> f64 {
        self.excluded_params.iter().map(|&e| circle_distance(tau, e)).fold(f64::INFINITY, f64::min)
    }
}

/// Samples one connected component of the configuration space at `n`
/// uniform parameters.
///
/// For two-loop linkages `branch` selects the loop; the single loop of a
/// one-loop linkage is returned for either branch.
pub fn trace_deformation(l: &LinkLengths, branch: i32, n: usize) -> Result<DeformationPath> {
    let class = grashof_class(l, 1e-9)?;
    if class == GrashofClass::NonGeneric {
        return Err(Error::NonGeneric);
    }
    if n < MIN_SAMPLES {
        return Err(Error::InvalidInput("at least 64 samples are required"));
    }
    let tr = traversal(l, branch)?;
    let excluded = parallel_diagonal_params(l, &tr, 4 * n)?;
    let mut params = Vec::with_capacity(n);
    let mut quads = Vec::with_capacity(n);
    let mut grams = Vec::with_capacity(n);
    let scale = l.total() * l.total();
    for i in 0..n {
        let tau = i as f64 / n as f64;
        if excluded.iter().any(|&e| circle_distance(tau, e) < EXCLUSION_RADIUS) {
            continue;
        }
        let q = quad_at(l, &tr, tau)?;
        let g = quad_gram(&q);
        if g.determinant() <= 1e-14 * scale * scale {
            continue;
        }
        params.push(tau);
        quads.push(q);
        grams.push(g);
    }
    let start = quad_at(l, &tr, 0.0)?;
    let end = quad_at(l, &tr, 1.0)?;
    if start.max_distance(&end) > 1e-9 * l.total() {
        return Err(Error::LoopNotClosed);
    }
    Ok(DeformationPath {
        lengths: *l,
        class,
        branch,
        traversal: tr,
        params,
        quads,
        grams,
        closed: true,
        excluded_params: excluded,
        samples: n,
    })
}

/// Central difference `(ω_{i+1} − ω_{i−1}) / (τ_{i+1} − τ_{i−1})` over the
/// stored samples, wrapping around on closed paths.
pub fn gram_velocity(path: &DeformationPath, i: usize) -> Result<SymMatrix> {
    let n = path.len();
    if n < 3 {
        return Err(Error::InvalidInput("path needs at least 3 samples"));
    }
    if i >= n || (!path.closed && (i == 0 || i + 1 == n)) {
        return Err(Error::InvalidInput("sample index has no neighbours on both sides"));
    }
    let (prev, next) = ((i + n - 1) % n, (i + 1) % n);
    let mut t0 = path.params[prev];
    let mut t1 = path.params[next];
    if prev > i {
        t0 -= 1.0;
    }
    if next < i {
        t1 += 1.0;
    }
    if path.excluded_params.iter().any(|&e| [e - 1.0, e, e + 1.0].iter().any(|&x| x > t0 && x < t1)) {
        return Err(Error::NearSingular);
    }
    Ok(path.grams[next].sub(&path.grams[prev]).scale(1.0 / (t1 - t0)))
}
