//! Exact Tukey halfspace depth, depth regions, and the Tukey median.
//!
//! Coordinates are exact rationals throughout; every count, region vertex,
//! and median is computed without floating point. The crate offers:
//!
//! - [`depth`]: the depth of an arbitrary query point with a witness
//!   direction, depths of all sample points, and the halfspace-symmetry
//!   test;
//! - [`region`]: level regions as certified halfspace intersections with
//!   exact vertex lists, affine dimension, and centroids;
//! - [`median`]: the maximum-depth search (with two upper-bound strategies),
//!   the Tukey median, and executable verifiers for its structural
//!   guarantees;
//! - [`oracles`]: independent brute-force implementations used to
//!   cross-check the engines;
//! - [`datasets`]: canned configurations, seeded Gaussian clouds, and CSV
//!   ingestion.

pub mod datasets;
pub mod depth;
pub mod error;
pub mod exact;
pub mod geometry;
pub mod linalg;
pub mod median;
pub mod oracles;
mod polytope;
pub mod region;
pub mod schema;

pub use depth::{
    depth_all_samples, halfspace_symmetric, perturb_direction, tukey_depth, tukey_depth_forced,
    DepthOutcome, DepthValue, Direction, SampleDepths,
};
pub use error::Error;
pub use exact::Rat;
pub use geometry::{
    affine_transform, check_general_position, hyperplane_through, orientation, side_counts,
    GeneralPosition, Hyperplane, PointCloud, SideCounts,
};
pub use median::{
    depth_bounds, max_depth, tukey_median, tukey_median_forced, DepthBounds, MedianResult,
    Strategy,
};
pub use region::{
    depth_region, region_centroid, region_dim, region_halfspaces, region_vertices, DepthRegion,
    RegionConstraint, Side,
};
