#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod analysis;
pub mod cli;
pub mod darboux;
pub mod ermakov;
pub mod error;
pub mod numerics;
pub mod seeds;
pub mod spectral;

pub use error::{Error, Result};
