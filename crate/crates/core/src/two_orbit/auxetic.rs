//! Local auxetic test on the tangent space of the lattice-coordinate system.

use alloc::vec::Vec;

use super::spec::FrameworkSpec;
use super::system::{tangent_space, LatticeConfig, TangentSpace};
use crate::error::Result;
use crate::geom::sym::{psd_status, Definiteness, SymMatrix};
use crate::math;

/// Pointwise auxetic verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AuxeticStatus {
    /// Some infinitesimal deformation has a positive definite Gram velocity.
    StrictlyAuxetic,
    /// The best achievable Gram velocity is singular positive semidefinite.
    Boundary,
    NonAuxetic,
}

impl AuxeticStatus {
    pub fn name(self) -> &'static str {
        match self {
            AuxeticStatus::StrictlyAuxetic => "StrictlyAuxetic",
            AuxeticStatus::Boundary => "Boundary",
            AuxeticStatus::NonAuxetic => "NonAuxetic",
        }
    }
}

/// Knobs for [`local_auxetic_test`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AuxeticTestOptions {
    /// Relative tolerance; the effective threshold is `tol · (1 + max |δω|)`.
    pub tol: f64,
    /// Number of starting directions for the multi-start search (f ≥ 2).
    pub starts: usize,
    /// Ascent iterations per start.
    pub iterations: usize,
}

impl Default for AuxeticTestOptions {
    fn default() -> Self {
        AuxeticTestOptions { tol: 1e-9, starts: 20, iterations: 300 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LocalAuxeticReport {
    pub status: AuxeticStatus,
    /// Best value found for `λ_min(δω)` over unit tangent directions.
    pub score: f64,
    /// Unit tangent achieving `score` (absent for rigid configurations).
    pub direction: Option<Vec<f64>>,
    pub tangent_dim: usize,
    /// The Jacobian dropped rank (tangent space larger than the flexibility).
    pub singular_point: bool,
}

/// Decides whether some tangent direction moves ω into the PSD cone.
///
/// A one-dimensional tangent space is classified directly from `±δω`. Larger
/// ones maximize `λ_min(δω)` over the unit sphere of the tangent space by
/// supergradient ascent from quasi-random starts. A rigid configuration
/// (no tangent directions) admits no deformation and is reported non-auxetic.
pub fn local_auxetic_test(
    spec: &FrameworkSpec,
    config: &LatticeConfig,
    opts: &AuxeticTestOptions,
) -> Result<LocalAuxeticReport> {
    let tangent = tangent_space(spec, config)?;
    let d = spec.dim();
    let singular_point = tangent.singular;
    let tangent_dim = tangent.dim;
    match tangent.dim {
        0 => Ok(LocalAuxeticReport {
            status: AuxeticStatus::NonAuxetic,
            score: f64::NEG_INFINITY,
            direction: None,
            tangent_dim,
            singular_point,
        }),
        1 => {
            let t = &tangent.basis[0];
            let dw = TangentSpace::omega_part(d, t);
            let tol = opts.tol * (1.0 + dw.max_abs());
            let (status, sign) = classify_velocity(&dw, tol)?;
            let direction: Vec<f64> = t.iter().map(|x| x * sign).collect();
            let score = dw.scale(sign).eigenvalues()[0];
            Ok(LocalAuxeticReport { status, score, direction: Some(direction), tangent_dim, singular_point })
        }
        _ => {
            let blocks: Vec<SymMatrix> = tangent.basis.iter().map(|v| TangentSpace::omega_part(d, v)).collect();
            let (coeffs, score) = maximize_min_eigenvalue(&blocks, opts.starts, opts.iterations);
            let scale = blocks.iter().fold(0.0f64, |m, b| m.max(b.max_abs()));
            let tol = opts.tol * (1.0 + scale);
            let status = if score > tol {
                AuxeticStatus::StrictlyAuxetic
            } else if score >= -tol {
                AuxeticStatus::Boundary
            } else {
                AuxeticStatus::NonAuxetic
            };
            let mut direction = alloc::vec![0.0; spec.unknowns()];
            for (c, v) in coeffs.iter().zip(&tangent.basis) {
                direction.iter_mut().zip(v).for_each(|(x, y)| *x += c * y);
            }
            Ok(LocalAuxeticReport { status, score, direction: Some(direction), tangent_dim, singular_point })
        }
    }
}

/// Classifies a velocity `δω` up to sign. Returns the status and the sign
/// (`±1`) that orients it toward the PSD cone when one exists.
pub fn classify_velocity(dw: &SymMatrix, tol: f64) -> Result<(AuxeticStatus, f64)> {
    Ok(match psd_status(dw, tol)? {
        Definiteness::PositiveDefinite => (AuxeticStatus::StrictlyAuxetic, 1.0),
        Definiteness::NegativeDefinite => (AuxeticStatus::StrictlyAuxetic, -1.0),
        Definiteness::PositiveSemidefiniteSingular | Definiteness::Zero => (AuxeticStatus::Boundary, 1.0),
        Definiteness::NegativeSemidefiniteSingular => (AuxeticStatus::Boundary, -1.0),
        Definiteness::Indefinite => (AuxeticStatus::NonAuxetic, 1.0),
    })
}

fn combine(blocks: &[SymMatrix], c: &[f64]) -> SymMatrix {
    let mut m = SymMatrix::zeros(blocks[0].dim());
    for (b, &x) in blocks.iter().zip(c) {
        m = m.add(&b.scale(x));
    }
    m
}

fn min_eig_and_vector(m: &SymMatrix) -> (f64, Vec<f64>) {
    let (vals, vecs) = m.eigen();
    (vals[0], vecs.into_iter().next().expect("nonempty spectrum"))
}

/// Radical-inverse (van der Corput) sequence in base `b`.
fn radical_inverse(mut i: usize, b: usize) -> f64 {
    let mut f = 1.0;
    let mut r = 0.0;
    while i > 0 {
        f /= b as f64;
        r += f * (i % b) as f64;
        i /= b;
    }
    r
}

const PRIMES: [usize; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Deterministic quasi-random unit vectors: Halton points in `[-1, 1]^k`
/// projected to the sphere, preceded by the `±` coordinate axes.
pub(crate) fn quasi_random_directions(k: usize, count: usize) -> Vec<Vec<f64>> {
    let mut out = Vec::with_capacity(count);
    for axis in 0..k {
        for sign in [1.0, -1.0] {
            if out.len() < count {
                let mut v = alloc::vec![0.0; k];
                v[axis] = sign;
                out.push(v);
            }
        }
    }
    let mut i = 1;
    while out.len() < count {
        let v: Vec<f64> = (0..k).map(|j| 2.0 * radical_inverse(i, PRIMES[j % PRIMES.len()]) - 1.0).collect();
        let n = math::norm(&v);
        if n > 1e-6 {
            out.push(v.iter().map(|x| x / n).collect());
        }
        i += 1;
    }
    out
}

/// Maximizes the concave, positively homogeneous `c ↦ λ_min(Σ cⱼ Bⱼ)` on the
/// unit sphere.
fn maximize_min_eigenvalue(blocks: &[SymMatrix], starts: usize, iterations: usize) -> (Vec<f64>, f64) {
    let k = blocks.len();
    let mut best = (alloc::vec![0.0; k], f64::NEG_INFINITY);
    for start in quasi_random_directions(k, starts.max(1)) {
        let mut c = start;
        let (mut val, mut vec) = min_eig_and_vector(&combine(blocks, &c));
        let mut step = 0.5;
        for _ in 0..iterations {
            let grad: Vec<f64> = blocks.iter().map(|b| b.form(&vec, &vec)).collect();
            let radial = math::dot(&grad, &c);
            let tangential: Vec<f64> = grad.iter().zip(&c).map(|(g, x)| g - radial * x).collect();
            if math::norm(&tangential) < 1e-14 {
                break;
            }
            let trial: Vec<f64> = c.iter().zip(&tangential).map(|(x, g)| x + step * g).collect();
            let n = math::norm(&trial);
            let trial: Vec<f64> = trial.iter().map(|x| x / n).collect();
            let (tv, tvec) = min_eig_and_vector(&combine(blocks, &trial));
            if tv > val {
                c = trial;
                val = tv;
                vec = tvec;
                step *= 1.2;
            } else {
                step *= 0.5;
                if step < 1e-12 {
                    break;
                }
            }
        }
        if val > best.1 {
            best = (c, val);
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn velocity_classes() {
        let pd = SymMatrix::diagonal(&[1.0, 2.0]);
        assert_eq!(classify_velocity(&pd, 1e-9).unwrap(), (AuxeticStatus::StrictlyAuxetic, 1.0));
        assert_eq!(classify_velocity(&pd.scale(-1.0), 1e-9).unwrap(), (AuxeticStatus::StrictlyAuxetic, -1.0));
        let zero = SymMatrix::zeros(2);
        assert_eq!(classify_velocity(&zero, 1e-9).unwrap().0, AuxeticStatus::Boundary);
        let ind = SymMatrix::diagonal(&[1.0, -1.0]);
        assert_eq!(classify_velocity(&ind, 1e-9).unwrap().0, AuxeticStatus::NonAuxetic);
    }

    #[test]
    fn quasi_random_directions_are_unit() {
        let dirs = quasi_random_directions(3, 20);
        assert_eq!(dirs.len(), 20);
        assert!(dirs.iter().all(|v| (math::norm(v) - 1.0).abs() < 1e-14));
    }

    #[test]
    fn ascent_matches_dense_circle_search() {
        let blocks = vec![
            SymMatrix::from_rows(&[&[1.0, 0.3], &[0.3, -0.5]]).unwrap(),
            SymMatrix::from_rows(&[&[-0.2, 0.1], &[0.1, 0.8]]).unwrap(),
        ];
        let (_, found) = maximize_min_eigenvalue(&blocks, 20, 300);
        let brute = (0..20000)
            .map(|i| {
                let t = 2.0 * core::f64::consts::PI * i as f64 / 20000.0;
                combine(&blocks, &[math::cos(t), math::sin(t)]).eigenvalues()[0]
            })
            .fold(f64::NEG_INFINITY, f64::max);
        assert!((found - brute).abs() < 1e-6, "{found} vs {brute}");
    }
}
