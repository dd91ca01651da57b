//! Predictor–corrector tracing of one-parameter deformations in `(q, ω)`.

use alloc::vec::Vec;

use super::auxetic::{classify_velocity, AuxeticStatus};
use super::spec::FrameworkSpec;
use super::system::{project, residual_tol, tangent_space, LatticeConfig, TangentSpace};
use crate::error::{Error, Result};
use crate::geom::sym::SymMatrix;
use crate::math;
use crate::runs::label_runs;

const CORRECTOR_ITERATIONS: usize = 25;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContinuationOptions {
    /// Nominal arclength step in `(q, ω)` space, scaled by `|q|` once `|q| > 1`.
    pub step: f64,
    /// Maximum accepted steps per direction.
    pub max_steps: usize,
    /// Relative threshold on `λ_min(ω)` below which the lattice counts as degenerate.
    pub boundary_tol: f64,
    /// Give up once step halving drops below `step · min_step_ratio`.
    pub min_step_ratio: f64,
    /// Start along the negated canonical tangent.
    pub reverse: bool,
}

impl Default for ContinuationOptions {
    fn default() -> Self {
        ContinuationOptions {
            step: 1e-2,
            max_steps: 100_000,
            boundary_tol: 1e-9,
            min_step_ratio: 1.0 / 1024.0,
            reverse: false,
        }
    }
}

/// How one end of a traced path terminated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PathEnd {
    Closed,
    /// The Gram matrix reached the boundary of the PSD cone, or came so
    /// close that the edge equations are no longer resolvable in `(q, ω)`.
    Boundary,
    MaxSteps,
}

/// Samples along a connected component of the solution set.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticePath {
    pub configs: Vec<LatticeConfig>,
    /// Unit tangents oriented along the traversal.
    pub tangents: Vec<Vec<f64>>,
    /// Cumulative chord length from the first sample.
    pub params: Vec<f64>,
    pub closed: bool,
    pub start: PathEnd,
    pub end: PathEnd,
    /// Total length, including the closing chord for loops.
    pub length: f64,
    /// Indices where the Jacobian dropped rank.
    pub singular_samples: Vec<usize>,
}

impl LatticePath {
    pub fn len(&self) -> usize {
        self.configs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.configs.is_empty()
    }

    /// `dω/ds` at a sample, `s` the traversal arclength.
    pub fn omega_velocity(&self, i: usize) -> SymMatrix {
        TangentSpace::omega_part(self.configs[i].dim(), &self.tangents[i])
    }

    fn from_parts(
        xs: Vec<Vec<f64>>,
        ts: Vec<Vec<f64>>,
        singular: Vec<usize>,
        d: usize,
        start: PathEnd,
        end: PathEnd,
    ) -> Self {
        let closed = end == PathEnd::Closed;
        let mut params = Vec::with_capacity(xs.len());
        let mut acc = 0.0;
        for (k, x) in xs.iter().enumerate() {
            if k > 0 {
                acc += distance(&xs[k - 1], x);
            }
            params.push(acc);
        }
        let length = if closed && xs.len() > 1 { acc + distance(&xs[xs.len() - 1], &xs[0]) } else { acc };
        LatticePath {
            configs: xs.iter().map(|x| LatticeConfig::from_vector(d, x).expect("layout")).collect(),
            tangents: ts,
            params,
            closed,
            start,
            end,
            length,
            singular_samples: singular,
        }
    }
}

/// Raised when the corrector cannot return to the solution set; carries the
/// samples traced up to that point.
#[derive(Debug, Clone, PartialEq)]
pub struct ContinuationFailure {
    pub reason: &'static str,
    pub partial: LatticePath,
}

fn distance(a: &[f64], b: &[f64]) -> f64 {
    math::sqrt(a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum())
}

fn min_eig_relative(spec: &FrameworkSpec, x: &[f64]) -> f64 {
    let omega = TangentSpace::omega_part(spec.dim(), x);
    omega.eigenvalues()[0] / (1.0 + omega.max_abs())
}

/// Rounding in `⟨ω(n − q), n − q⟩` is of order `ε·|ω|·|q|²`. Once that
/// exceeds the residual tolerance the lattice is degenerate to working
/// precision and the corrector cannot converge.
fn resolution_limited(spec: &FrameworkSpec, x: &[f64], tol: f64) -> bool {
    let d = spec.dim();
    let q2 = math::dot(&x[..d], &x[..d]);
    let omega = TangentSpace::omega_part(d, x);
    64.0 * f64::EPSILON * (1.0 + omega.max_abs()) * (1.0 + q2) > tol
}

/// Unit tangent at `x` aligned with `reference`. Null spaces larger than one
/// dimension are reduced to the projection of the reference direction.
fn oriented_tangent(spec: &FrameworkSpec, x: &[f64], reference: Option<&[f64]>) -> Option<(Vec<f64>, bool)> {
    let cfg = LatticeConfig::from_vector(spec.dim(), x).ok()?;
    let ts = tangent_space(spec, &cfg).ok()?;
    let t = match (ts.dim, reference) {
        (0, _) => return None,
        (1, _) => ts.basis[0].clone(),
        (_, Some(r)) => {
            let mut t = alloc::vec![0.0; x.len()];
            for b in &ts.basis {
                let c = math::dot(b, r);
                t.iter_mut().zip(b).for_each(|(ti, bi)| *ti += c * bi);
            }
            let n = math::norm(&t);
            if n < 1e-12 {
                return None;
            }
            t.iter().map(|v| v / n).collect()
        }
        (_, None) => ts.basis[0].clone(),
    };
    let t = match reference {
        Some(r) if math::dot(&t, r) < 0.0 => t.iter().map(|v| -v).collect(),
        None => canonical_orientation(t),
        _ => t,
    };
    Some((t, ts.singular))
}

/// Orients a vector so that its largest-magnitude component is positive.
fn canonical_orientation(t: Vec<f64>) -> Vec<f64> {
    let k = (0..t.len()).max_by(|&a, &b| t[a].abs().total_cmp(&t[b].abs())).unwrap_or(0);
    if t[k] < 0.0 {
        t.iter().map(|v| -v).collect()
    } else {
        t
    }
}

struct OneWay {
    xs: Vec<Vec<f64>>,
    ts: Vec<Vec<f64>>,
    singular: Vec<usize>,
    end: PathEnd,
    failure: Option<&'static str>,
}

fn trace_one_way(spec: &FrameworkSpec, x0: &[f64], t0: &[f64], opts: &ContinuationOptions) -> OneWay {
    let tol = residual_tol(spec);
    let mut out = OneWay {
        xs: alloc::vec![x0.to_vec()],
        ts: alloc::vec![t0.to_vec()],
        singular: Vec::new(),
        end: PathEnd::MaxSteps,
        failure: None,
    };
    let min_step = opts.step * opts.min_step_ratio;
    let mut h = opts.step;
    let mut farthest: f64 = 0.0;
    for _ in 0..opts.max_steps {
        let x = out.xs.last().expect("nonempty").clone();
        let t = out.ts.last().expect("nonempty").clone();
        let (z, tz, singular) = loop {
            let y: Vec<f64> = x.iter().zip(&t).map(|(a, b)| a + h * b).collect();
            let attempt = project(spec, &y, tol, CORRECTOR_ITERATIONS).and_then(|z| {
                let dz = distance(&z, &x);
                if dz > 2.0 * h || dz < 0.25 * h {
                    return None;
                }
                let (tz, singular) = oriented_tangent(spec, &z, Some(&t))?;
                (math::dot(&tz, &t) >= 0.7).then_some((z, tz, singular))
            });
            match attempt {
                Some(ok) => break ok,
                None => {
                    h *= 0.5;
                    if h < min_step {
                        if resolution_limited(spec, &x, tol) {
                            out.end = PathEnd::Boundary;
                        } else {
                            out.failure = Some("corrector did not converge at the minimum step");
                        }
                        return out;
                    }
                }
            }
        };

        if min_eig_relative(spec, &z) <= opts.boundary_tol {
            let bx = refine_boundary(spec, &x, &t, h, opts.boundary_tol, tol);
            let (bt, bs) = oriented_tangent(spec, &bx, Some(&t)).unwrap_or((t.clone(), false));
            if bs {
                out.singular.push(out.xs.len());
            }
            out.xs.push(bx);
            out.ts.push(bt);
            out.end = PathEnd::Boundary;
            return out;
        }

        // Loop closure: the new chord passes by the start point while moving
        // in the same direction as the initial tangent.
        let u: Vec<f64> = z.iter().zip(&x).map(|(a, b)| a - b).collect();
        let uu = math::dot(&u, &u);
        let w: Vec<f64> = x0.iter().zip(&x).map(|(a, b)| a - b).collect();
        let s = math::dot(&w, &u) / uu;
        if farthest > 2.0 * opts.step && (0.0..=1.0).contains(&s) && math::dot(&t, t0) > 0.0 {
            let foot: Vec<f64> = x.iter().zip(&u).map(|(a, b)| a + s * b).collect();
            if distance(&foot, x0) <= 0.5 * opts.step {
                if s * math::sqrt(uu) < 0.25 * h && out.xs.len() > 2 {
                    out.xs.pop();
                    out.ts.pop();
                    out.singular.retain(|&k| k < out.xs.len());
                }
                out.end = PathEnd::Closed;
                return out;
            }
        }

        // Near a degenerate lattice |q| grows like λ_min(ω)^(-1/2); letting
        // the step grow with |q| past 1 lets the path reach the boundary.
        let max_step = opts.step * math::norm(&z[..spec.dim()]).max(1.0);
        if singular {
            out.singular.push(out.xs.len());
            h = (0.5 * h).max(min_step);
        } else {
            h = (2.0 * h).min(max_step);
        }
        farthest = farthest.max(distance(&z, x0));
        out.xs.push(z);
        out.ts.push(tz);
    }
    out
}

/// Bisects along the last step for the point where `λ_min(ω)` reaches zero.
fn refine_boundary(spec: &FrameworkSpec, x: &[f64], t: &[f64], h: f64, btol: f64, tol: f64) -> Vec<f64> {
    let (mut lo, mut hi) = (0.0, 1.0);
    let mut best = x.to_vec();
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        let y: Vec<f64> = x.iter().zip(t).map(|(a, b)| a + mid * h * b).collect();
        match project(spec, &y, tol, CORRECTOR_ITERATIONS) {
            Some(z) if min_eig_relative(spec, &z) > 0.0 => {
                lo = mid;
                best = z;
            }
            Some(_) => hi = mid,
            None => hi = mid,
        }
        if (hi - lo) * h < 1e-13 {
            break;
        }
    }
    let _ = btol;
    best
}

/// Traces the connected component through `config0` for a framework with
/// flexibility one.
///
/// The corrector is a damped minimum-norm Gauss–Newton iteration (at most 25
/// steps, residual ∞-norm ≤ `1e-10 · (1 + max s)`). Tracing stops on loop
/// closure, on reaching a degenerate lattice, or after `max_steps`; an open
/// end triggers a second sweep from `config0` in the opposite direction.
pub fn continue_path(spec: &FrameworkSpec, config0: &LatticeConfig, opts: &ContinuationOptions) -> Result<LatticePath> {
    let f = spec.flexibility();
    if f != 1 {
        return Err(Error::NotOneDof(f));
    }
    if !(opts.step.is_finite() && opts.step > 0.0) {
        return Err(Error::InvalidInput("continuation step must be positive"));
    }
    let d = spec.dim();
    let tol = residual_tol(spec);
    let x0 = project(spec, &config0.to_vector(), tol, CORRECTOR_ITERATIONS)
        .ok_or(Error::InconsistentConfig("initial configuration does not converge to a realization"))?;
    if min_eig_relative(spec, &x0) <= opts.boundary_tol {
        return Err(Error::InconsistentConfig("initial Gram matrix is not positive definite"));
    }
    let (mut t0, _) = oriented_tangent(spec, &x0, None)
        .ok_or(Error::InconsistentConfig("initial configuration has no tangent direction"))?;
    if opts.reverse {
        t0.iter_mut().for_each(|v| *v = -*v);
    }

    let fwd = trace_one_way(spec, &x0, &t0, opts);
    if fwd.end == PathEnd::Closed || fwd.failure.is_some() {
        let start = if fwd.end == PathEnd::Closed { PathEnd::Closed } else { PathEnd::MaxSteps };
        let path = LatticePath::from_parts(fwd.xs, fwd.ts, fwd.singular, d, start, fwd.end);
        return match fwd.failure {
            Some(reason) => {
                Err(Error::Continuation(alloc::boxed::Box::new(ContinuationFailure { reason, partial: path })))
            }
            None => Ok(path),
        };
    }

    let back_t: Vec<f64> = t0.iter().map(|v| -v).collect();
    let back = trace_one_way(spec, &x0, &back_t, opts);
    let nb = back.xs.len();
    let mut xs: Vec<Vec<f64>> = back.xs.into_iter().skip(1).rev().collect();
    let mut ts: Vec<Vec<f64>> = back.ts.into_iter().skip(1).rev().map(|t| t.iter().map(|v| -v).collect()).collect();
    let offset = xs.len();
    let mut singular: Vec<usize> = back.singular.iter().filter(|&&k| k > 0).map(|&k| nb - 1 - k).collect();
    singular.sort_unstable();
    xs.extend(fwd.xs);
    ts.extend(fwd.ts);
    singular.extend(fwd.singular.iter().map(|k| k + offset));
    let path = LatticePath::from_parts(xs, ts, singular, d, back.end, fwd.end);
    match back.failure {
        Some(reason) => Err(Error::Continuation(alloc::boxed::Box::new(ContinuationFailure { reason, partial: path }))),
        None => Ok(path),
    }
}

/// A maximal stretch of a traced path whose oriented Gram velocity is PSD.
#[derive(Debug, Clone, PartialEq)]
pub struct PathInterval {
    /// Arclength parameters; `hi` exceeds the path length when the stretch
    /// wraps around a closed path.
    pub lo: f64,
    pub hi: f64,
    /// `+1` when ω grows in the traversal direction, `-1` when it shrinks.
    pub sign: f64,
    pub strict_interior: bool,
    pub lo_config: LatticeConfig,
    pub hi_config: LatticeConfig,
}

/// Auxetic stretches of a traced path with bisection-refined transitions.
pub fn path_auxetic_intervals(spec: &FrameworkSpec, path: &LatticePath, tol: f64) -> Result<Vec<PathInterval>> {
    let n = path.len();
    let mut labels = Vec::with_capacity(n);
    let mut strict = Vec::with_capacity(n);
    for i in 0..n {
        let dw = path.omega_velocity(i);
        let (status, sign) = classify_velocity(&dw, tol * (1.0 + dw.max_abs()))?;
        let zero = dw.max_abs() <= tol;
        labels.push(match status {
            AuxeticStatus::NonAuxetic => None,
            _ if zero => None,
            _ => Some(if sign > 0.0 { 1i8 } else { -1 }),
        });
        strict.push(status == AuxeticStatus::StrictlyAuxetic);
    }
    let res_tol = residual_tol(spec);
    let mut out = Vec::new();
    for run in label_runs(&labels, path.closed) {
        let sign = run.label as f64;
        let first = run.start;
        let last = run.last(n);
        let strict_interior = (0..run.len).all(|k| strict[(first + k) % n]);
        let before = if first == 0 { path.closed.then_some(n - 1) } else { Some(first - 1) };
        let after = if last + 1 == n { path.closed.then_some(0) } else { Some(last + 1) };
        let whole = run.len == n;
        let (lo, lo_config) = match before {
            Some(b) if !whole => {
                let (frac, cfg) = refine_transition(spec, path, b, first, sign, res_tol);
                let span = chord_param(path, b, first);
                (param_before(path, b, first) + frac * span, cfg)
            }
            _ => (path.params[first], path.configs[first].clone()),
        };
        let (hi, hi_config) = match after {
            Some(a) if !whole => {
                let (frac, cfg) = refine_transition(spec, path, a, last, sign, res_tol);
                let span = chord_param(path, last, a);
                (unwrapped_param(path, first, last) + (1.0 - frac) * span, cfg)
            }
            _ => (unwrapped_param(path, first, last), path.configs[last].clone()),
        };
        out.push(PathInterval { lo, hi, sign, strict_interior, lo_config, hi_config });
    }
    Ok(out)
}

fn chord_param(path: &LatticePath, a: usize, b: usize) -> f64 {
    distance(&path.configs[a].to_vector(), &path.configs[b].to_vector())
}

/// Parameter of sample `b` (just before `first`), shifted negative when the
/// pair straddles the start of a closed path.
fn param_before(path: &LatticePath, b: usize, first: usize) -> f64 {
    if b > first {
        path.params[b] - path.length
    } else {
        path.params[b]
    }
}

fn unwrapped_param(path: &LatticePath, first: usize, last: usize) -> f64 {
    if last < first {
        path.params[last] + path.length
    } else {
        path.params[last]
    }
}

/// Bisects the chord from `outside` to `inside` (projected back onto the
/// solution set) for the sign change of `λ_min(sign · δω)`. Returns the
/// fraction from `outside` and the configuration there.
fn refine_transition(
    spec: &FrameworkSpec,
    path: &LatticePath,
    outside: usize,
    inside: usize,
    sign: f64,
    tol: f64,
) -> (f64, LatticeConfig) {
    let d = spec.dim();
    let xa = path.configs[outside].to_vector();
    let xb = path.configs[inside].to_vector();
    // Orientation reference: the traversal direction at the inside sample.
    let reference = path.tangents[inside].clone();
    let eval = |frac: f64| -> Option<(f64, Vec<f64>)> {
        let y: Vec<f64> = xa.iter().zip(&xb).map(|(a, b)| a + frac * (b - a)).collect();
        let z = project(spec, &y, tol, CORRECTOR_ITERATIONS)?;
        let (t, _) = oriented_tangent(spec, &z, Some(&reference))?;
        let dw = TangentSpace::omega_part(d, &t).scale(sign);
        Some((dw.eigenvalues()[0], z))
    };
    let (mut lo, mut hi) = (0.0, 1.0);
    let mut best = xb.clone();
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        match eval(mid) {
            Some((val, z)) if val >= 0.0 => {
                hi = mid;
                best = z;
            }
            Some(_) => lo = mid,
            None => break,
        }
        if hi - lo < 1e-14 {
            break;
        }
    }
    (hi, LatticeConfig::from_vector(d, &best).expect("layout"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::sym::SymMatrix;
    use alloc::vec;

    fn rhombus() -> (FrameworkSpec, LatticeConfig) {
        let spec = FrameworkSpec::new(2, vec![vec![0, 0], vec![0, 1], vec![-1, 0], vec![-1, 1]], vec![1.0; 4]).unwrap();
        let cfg = LatticeConfig::new(vec![-0.5, 0.5], SymMatrix::diagonal(&[2.0, 2.0])).unwrap();
        (spec, cfg)
    }

    #[test]
    fn rhombus_flattens_onto_the_lattice_boundary() {
        // Equal bars: q stays at (−1/2, 1/2) and ω₁₁ + ω₂₂ = 4 until a diagonal vanishes.
        let (spec, cfg) = rhombus();
        let path = continue_path(&spec, &cfg, &ContinuationOptions { step: 0.05, ..Default::default() }).unwrap();
        assert!(!path.closed);
        assert_eq!((path.start, path.end), (PathEnd::Boundary, PathEnd::Boundary));
        for c in &path.configs {
            assert!((c.q[0] + 0.5).abs() < 1e-9 && (c.q[1] - 0.5).abs() < 1e-9);
            assert!((c.omega.trace() - 4.0).abs() < 1e-9);
        }
        for end in [&path.configs[0], path.configs.last().unwrap()] {
            assert!(end.omega.eigenvalues()[0].abs() < 1e-9);
        }
    }

    #[test]
    fn rejects_non_unit_flexibility() {
        let spec = FrameworkSpec::new(2, vec![vec![0, 0], vec![1, 0], vec![0, 1]], vec![1.0; 3]).unwrap();
        let cfg = LatticeConfig::new(vec![0.3, 0.3], SymMatrix::identity(2)).unwrap();
        assert_eq!(continue_path(&spec, &cfg, &ContinuationOptions::default()), Err(Error::NotOneDof(2)));
    }
}
