//! Auxetic deformations of periodic bar frameworks.
//!
//! The crate is `no_std` and needs only `alloc`.

#![no_std]
#![allow(clippy::needless_range_loop)]

extern crate alloc;

pub mod error;
pub mod geom;
mod math;
pub mod quad;
mod runs;
pub mod two_orbit;

pub use error::{Error, Result};
