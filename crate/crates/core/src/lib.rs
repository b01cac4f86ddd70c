pub mod complexity;
pub mod distribution;
pub mod error;
pub mod experiments;
pub mod hypercube;
pub mod learners;
pub mod model;
pub mod oracle;
pub mod real_geometry;
pub mod risk;
pub mod sample_size;

pub use error::{Error, Result};
