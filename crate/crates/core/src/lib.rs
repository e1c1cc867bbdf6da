//! Chip-firing on the infinite k-ary tree with a self-loop at the root.
//!
//! Start with `N` chips on the root. A vertex fires once it holds at least
//! `k + 1` chips, sending one chip along each edge; the root's loop edge
//! hands one chip straight back to itself. The game always stabilizes, and
//! this crate provides:
//!
//! - [`numerics`]: exact base-k arithmetic and the stable configuration map,
//! - [`engine`]: brute-force simulators used as ground truth,
//! - [`formulas`]: closed-form and recursive fire counts, each with a
//!   second independent route,
//! - [`sequences`]: named integer sequences, reference fixtures and b-file output,
//! - [`schizo`]: exact decimal digits of square roots and their repeated-digit blocks,
//! - [`verify`]: the formula-versus-simulation equivalence checks.
//!
//! All arithmetic on chip and fire counts is arbitrary precision.

pub mod engine;
pub mod error;
pub mod formulas;
pub mod numerics;
pub mod schizo;
pub mod sequences;
pub mod verify;

pub use error::{Error, Result};
pub use numerics::{Nat, TreeParams};
