//! Exact-integer toolkit for Graver bases, toric Gröbner bases, higher
//! Lawrence liftings and Graver/Gröbner complexity.

#![allow(clippy::needless_range_loop)]

pub mod ab;
pub mod complexity;
pub mod data;
pub mod error;
pub mod fiber;
pub mod graver;
pub mod groebner;
pub mod io;
pub mod lawrence;
pub mod limits;
pub mod linalg;
pub mod lp;
pub mod verify;

pub use error::{Error, Result};
pub use limits::Limits;
pub use linalg::{IntMatrix, LatticeVector};
