#![cfg_attr(not(feature = "std"), no_std)]
extern crate alloc;

pub mod chains;
pub mod error;
pub mod gaussinfo;
mod linalg;
pub mod matrices;
pub mod pathsum;
#[cfg(test)]
mod proptests;
pub mod sampling;
pub mod transforms;

pub use error::{Error, Result};
