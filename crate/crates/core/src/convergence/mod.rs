//! Numerical tools for the convergence domain of the BCH series of matrix pairs.

pub mod eigen;
pub mod matrix;
pub mod scan;

pub use matrix::{CMatrix, C64};
pub use scan::{
    classify, collision_scan, radius, CollisionClass, CollisionPoint, ConvergenceReport, ScanParams,
};
