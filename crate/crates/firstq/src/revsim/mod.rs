//! Gate-level construction and bit-exact simulation of the reversible
//! arithmetic circuits, with Toffoli counts certified against the cost model.
//!
//! Circuits are permutations of computational basis states up to phases, so a
//! classical bit-vector simulator with a tracked ±1 phase is exact. Gates
//! tagged as measurement-based uncomputation contribute nothing to the
//! Toffoli tally, matching the temporary-AND adder convention the cost
//! formulas assume.

mod build;
mod circuit;

pub use build::{
    build_abs, build_abs_diff, build_csub, build_is_eq, build_mult, build_sub_pow2,
    build_uv_arithmetic,
};
pub use circuit::{Circuit, Ctl, Encoding, Gate, GateKind, Register, RunOutput, SimState};
