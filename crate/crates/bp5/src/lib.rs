//! Boolean circuits, width-5 permutation branching programs, and the
//! conversions between them.
//!
//! The crate implements both directions of the classic correspondence:
//!
//! * [`barrington`] compiles a fan-in-2 circuit of depth `d` into a width-5
//!   permutation branching program of length at most `4^d`, via the
//!   commutator construction.
//! * [`parallelize`] converts any bounded-width branching program of length
//!   `L` back into a circuit of depth `O(log L)`, by divide-and-conquer over
//!   products of per-level transition matrices.
//!
//! Around that core sit three more pieces:
//!
//! * [`advice`] serializes a permutation program onto a sequential advice
//!   tape and re-executes it with a constant-space two-tape machine, whose
//!   register usage is instrumented and bounded.
//! * [`sort`] trades a precomputed table of sorted blocks for comparisons in
//!   a bottom-up merge sort.
//! * [`equiv`] provides the brute-force equivalence oracles and corpus
//!   generators that everything above is tested against.
//!
//! Every major capability has a runnable demonstration under `examples/`:
//!
//! ```text
//! cargo run --example perm_algebra       # the S5 toolbox and the commutator pair
//! cargo run --example compile_circuit    # circuit -> width-5 program, length vs 4^depth
//! cargo run --example parallelize_bp     # branching program -> shallow circuit
//! cargo run --example roundtrip          # BP -> circuit -> width-5 program, end to end
//! cargo run --example advice_machine     # tape encoding and the two-tape interpreter
//! cargo run --example advice_sort        # table-driven merge sort vs plain merge sort
//! ```
//!
//! The same functionality is scriptable through the thin `bp5` binary; see
//! `bp5 --help`.

pub mod advice;
pub mod barrington;
pub mod bp;
pub mod circuit;
pub mod equiv;
pub mod parallelize;
pub mod perm5;
pub mod sort;
