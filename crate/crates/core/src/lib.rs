//! Cluster aggregation as a maximum-weight independent set problem.

pub mod clustering;
pub mod data;
pub mod error;
pub mod graph;
pub mod rng;
pub mod rydberg;
pub mod solvers;
pub mod tuner;

pub use error::{Error, Result};
