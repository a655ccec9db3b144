//! Baker–Campbell–Hausdorff and related series in Hall–Viennot bases,
//! computed exactly through bicoloured rooted trees.

pub mod analysis;
pub mod basis;
pub mod bch;
pub mod context;
pub mod convergence;
pub mod error;
pub mod golden;
pub mod linalg;
pub mod rational;
pub mod report;
pub mod resources;
pub mod series;
pub mod suites;
pub mod thompson;
pub mod trees;
pub mod words;

pub use error::{Error, Result};
