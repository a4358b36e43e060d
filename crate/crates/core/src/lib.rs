pub mod bounds;
pub mod bregman;
pub mod cli;
pub mod comparators;
pub mod error;
pub mod games;
pub mod geometry;
pub mod learners;
mod linalg;
pub mod regret;
pub mod trace;

pub use error::{Error, Result};
pub use linalg::{Matrix, Vector};
