//! Curves and mapping classes of the once-punctured torus.
//!
//! Curves are slopes `p/q`, mapping classes are determinant-1 integer
//! matrices, and the curve complex is the Farey graph.

mod classify;
mod distance;
mod mapping_class;
mod quadratic;
mod slope;

pub use classify::{
    classify, hyperbolic_fixed_points, is_pure, twist_matrix, ClassificationResult,
};
pub use distance::{
    farey_distance, farey_distance_bfs, translation_estimate, BoundedFareyGraph, FareyDistance,
};
pub use mapping_class::{apply, parse_matrix_list, MappingClass};
pub use quadratic::QuadraticIrrational;
pub use slope::{canonical_slope, intersection, Slope};
