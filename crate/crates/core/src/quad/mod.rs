//! Four-bar linkages and the periodic frameworks generated by their diagonals.

mod auxetic;
mod linkage;
mod path;

pub use auxetic::{
    auxetic_intervals, auxetic_status_pointwise, conic_points, five_point_conic, five_point_conic_at,
    lattice_config_from_quad, quad_framework_spec, quad_from_lattice_config, unit_cell_area, AuxeticInterval,
    ConicVertex, CONIC_TOL, TRANSITION_TOL,
};
pub use linkage::{
    grashof_class, solve_coupler, CouplerSolution, GrashofClass, LinkLengths, Quadrilateral, DEAD_POINT_TOL,
};
pub use path::{
    circle_distance, gram_at, gram_velocity, parallel_diagonal_params, quad_at, quad_gram, trace_deformation,
    traversal, velocity_at, DeformationPath, Traversal, EXCLUSION_RADIUS, MIN_SAMPLES, STENCIL_STEP,
};
