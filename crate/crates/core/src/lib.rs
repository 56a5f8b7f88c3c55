//! Exact-arithmetic laboratory for point–curve incidences in the plane.

pub mod algebra;
pub mod config;
pub mod error;
pub mod generators;
pub mod harness;
pub mod incidence;
pub mod partition;
pub mod veronese;

pub use error::{LabError, Result};
