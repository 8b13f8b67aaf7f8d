#![allow(clippy::needless_range_loop)]

//! Exact computations for left-invariant pseudo-Riemannian metrics on Lie
//! algebras given by structure constants: Levi-Civita connection, the
//! canonical homogeneous structure and its three-part decomposition, the
//! cyclic condition, curvature, and a catalog of Lorentzian families with
//! their claimed cyclicity conditions.

pub mod catalog;
pub mod classes;
pub mod error;
pub mod exactalg;
pub mod geometry;
pub mod harness;
pub mod liealg;

pub use error::{Error, Result};
