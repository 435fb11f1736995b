//! Input-output equations and the coefficient, cycle and sum-of-paths
//! maps, evaluated exactly at parameter points.
//!
//! Sign convention for minors: with `A_ji` the matrix `λI - A` without row
//! `j` and column `i`, `det(A_ji) = (-1)^(i+j+1) ∂ det(λI - A) / ∂A[j][i]`.

mod charpoly;
mod ioeq;
mod maps;

pub use charpoly::{char_poly, char_poly_cycle_oracle, minor_det_poly, ORACLE_MAX_N};
pub use ioeq::{
    attempt_seed, gcd_free_expected, io_equation, io_equation_at, io_equation_seeded,
    regular_point, IoEquation, IoWarning, POINT_ATTEMPTS,
};
pub use maps::{
    coefficient_map, coefficient_map_at, cycle_map, cycle_map_at, cycle_monomial,
    shortest_path_sum, sum_of_paths_map, sum_of_paths_map_at, CoefficientVector, Side, Slot,
};
