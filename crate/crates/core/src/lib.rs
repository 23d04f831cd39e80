//! Exact verification toolkit for Gauss sums and the Stickelberger element
//! over the p-th cyclotomic field.

pub mod arith;
pub mod cli;
pub mod cyclotomic;
pub mod error;
pub mod gauss;
pub mod group_ring;
pub mod principality;
pub mod regularity;

pub use error::{Error, Result};
