//! Periodic frameworks with two vertex orbits in lattice coordinates.

mod auxetic;
mod continuation;
mod cubic;
mod dependence;
mod gram_g;
mod seed;
mod spec;
mod system;

pub use auxetic::{classify_velocity, local_auxetic_test, AuxeticStatus, AuxeticTestOptions, LocalAuxeticReport};
pub use continuation::{
    continue_path, path_auxetic_intervals, ContinuationFailure, ContinuationOptions, LatticePath, PathEnd, PathInterval,
};
pub use cubic::{cubic_projection_samples, fit_cubic, CubicFit, CUBIC_FIT_WARNING};
pub use dependence::{dependence_coeffs, DependenceTable};
pub use gram_g::{to_gram_g, GramG};
pub use seed::{seed_config, SEED_RESTARTS};
pub use spec::{validate_spec, FrameworkSpec};
pub use system::{
    config_from_cartesian, jacobian, linear_constraints_omega, residual_tol, residuals, solve_omega_q, tangent_space,
    AffineFunctional, LatticeConfig, TangentSpace, RANK_RTOL,
};
