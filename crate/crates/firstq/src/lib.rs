//! Logical resource estimation and verification toolkit for first-quantized,
//! real-space quantum simulation of molecular dynamics.
//!
//! The crate has three layers:
//!
//! - physical model: grids, thermal widths, saturation constants, and the
//!   Hamiltonian 1-norms ([`system`]);
//! - cost model: closed-form Toffoli and qubit counts for every arithmetic
//!   primitive and block-encoding composite ([`cost`]), plus error-budget
//!   allocation and query counts for time evolution ([`evolution`]);
//! - verification: bit-exact simulation of the reversible arithmetic circuits
//!   ([`revsim`]) and brute-force numeric checks of the diagonal
//!   linear-combination-of-unitaries decompositions ([`lcu`]).
//!
//! [`interface`] ties the layers into an end-to-end estimate for a reaction
//! specified by composition, box width, temperature, evolution time, and
//! error target.

pub mod cost;
pub mod elements;
pub mod error;
pub mod evolution;
pub mod interface;
pub mod lcu;
pub mod revsim;
pub mod system;
pub mod units;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
