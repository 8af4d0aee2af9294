//! Word combinatorics and metric geometry of Cayley graphs: balls,
//! distances, geodesics, Gromov products, thin triangles and
//! quasi-geodesic checks.

mod ball;
mod generators;
mod metric;
mod walker;

pub use ball::{CayleyBall, Key, DEFAULT_BALL_CAP};
pub use generators::{inverse_name, Generator, GeneratorSet, ELEMENT_TOL};
pub use metric::{quasi_geodesic_check, DeltaEstimate, Dist, GEODESIC_CAP, TRIPLE_CAP};
pub use walker::Walker;
