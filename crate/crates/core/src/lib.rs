//! Exact arithmetic for Hilbert modular eigendata over totally real fields.
//!
//! The crate is `no_std` and only needs an allocator. Everything that touches
//! files, the environment or a terminal lives in the `hmf-cli` companion.
#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod arith;
pub mod dictionary;
pub mod error;
pub mod field;
pub mod hecke;
pub mod local;
pub mod lseries;
pub mod numfield;

pub use error::{Error, Result};
