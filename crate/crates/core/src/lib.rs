//! Bowen-Franks modules over ℤ[C_m] for directed graphs, and decision
//! procedures for unit-preserving homomorphisms between them.

pub mod bfmod;
pub mod cli;
pub mod error;
pub mod graphs;
pub mod homdec;
pub mod json;
pub mod order;
pub mod paperverify;
pub mod polyring;
pub mod zmatrix;

#[cfg(test)]
mod testutil;

pub use error::{Error, Result};
pub use graphs::{cuntz_splice, rose, spliced_rose, DirectedGraph};
pub use order::Order;
pub use zmatrix::IntMatrix;
