//! Finding a first realization when none is supplied.

use alloc::vec::Vec;

use super::auxetic::quasi_random_directions;
use super::spec::FrameworkSpec;
use super::system::{linear_constraints_omega, project, residual_tol, LatticeConfig};
use crate::error::{Error, Result};
use crate::geom::dense::Mat;
use crate::geom::sym::SymMatrix;

pub const SEED_RESTARTS: usize = 50;

/// Searches for a configuration with positive definite ω.
///
/// Each attempt starts from a multiple of the identity moved onto the affine
/// constraint set for ω, paired with a quasi-random `q ∈ [−1, 1]ᵈ`, and is
/// then corrected by Gauss–Newton on the full system.
pub fn seed_config(spec: &FrameworkSpec) -> Result<LatticeConfig> {
    let d = spec.dim();
    let tol = residual_tol(spec);
    let mean_s = spec.squared_lengths().iter().sum::<f64>() / spec.edge_count() as f64;
    let constraints = linear_constraints_omega(spec);
    let qs = quasi_random_directions(d, SEED_RESTARTS + 2 * d);
    for k in 0..SEED_RESTARTS {
        let scale = mean_s * (1.0 + 0.5 * (k % 5) as f64);
        let mut omega = SymMatrix::identity(d).scale(scale).upper().to_vec();
        if !constraints.is_empty() {
            let a = Mat::from_rows(&constraints.iter().map(|c| c.coeffs.clone()).collect::<Vec<_>>());
            let r: Vec<f64> = constraints.iter().map(|c| crate::math::dot(&c.coeffs, &omega) + c.constant).collect();
            let fix = a.pinv_solve(&r, 1e-12);
            omega.iter_mut().zip(&fix).for_each(|(w, f)| *w -= f);
        }
        let radius = 0.25 + 0.75 * (k as f64 / SEED_RESTARTS as f64);
        let mut x: Vec<f64> = qs[k + 2 * d].iter().map(|v| v * radius).collect();
        x.extend(omega);
        let Some(z) = project(spec, &x, tol, 200) else { continue };
        let Ok(cfg) = LatticeConfig::from_vector(d, &z) else { continue };
        if cfg.omega.eigenvalues()[0] > 1e-6 * (1.0 + cfg.omega.max_abs()) {
            return Ok(cfg);
        }
    }
    Err(Error::SeedingFailed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::two_orbit::system::residuals;
    use alloc::vec;

    #[test]
    fn seeds_a_generic_quadrilateral() {
        let spec =
            FrameworkSpec::new(2, vec![vec![0, 0], vec![0, 1], vec![-1, 0], vec![-1, 1]], vec![1.0, 12.25, 4.0, 9.0])
                .unwrap();
        let cfg = seed_config(&spec).unwrap();
        let r = residuals(&spec, &cfg).unwrap();
        assert!(r.iter().all(|x| x.abs() <= residual_tol(&spec)));
        assert!(cfg.omega.eigenvalues()[0] > 0.0);
    }
}
