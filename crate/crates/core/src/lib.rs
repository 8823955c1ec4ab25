#![allow(clippy::neg_cmp_op_on_partial_ord)]
pub mod error;
pub mod exec;
pub mod geometry;
pub mod liftline3d;
pub mod panel2d;
pub mod postproc;
pub mod sweep;
pub mod validation;

pub use error::{Error, Result};
pub use exec::Execution;
