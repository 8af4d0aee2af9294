//! Uniform expansion constants, the derivative cocycle, lines of expansion,
//! the convergence experiment and the expansion graph.

mod cocycle;
mod constants;
mod convergence;
mod graph;
mod line;

pub use cocycle::{derivative_cocycle, equivariance_residual};
pub use constants::{expanding_radius, uniform_constants, ExpansionConstants, MARGIN_SAFETY, MAX_ENRICH};
pub use convergence::{convergence_experiment, quotient_distance, ConvergenceRecord, Gammas};
pub use graph::{build_expansion_graph, quasi_isometry_audit, ExpansionGraph, QuasiIsometryAudit};
pub use line::{
    build_expansion_line, line_distances, line_quasi_geodesic_audit, univalent_radius_along_line,
    verify_line, ExpansionLine, QuasiGeodesicAudit, UnivalentRadius, LINE_TOL,
};
