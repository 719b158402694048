//! Weakly secure symmetric multilevel diversity coding.
//!
//! `L` prioritized messages are spread over `L` encoders so that any
//! `alpha` encoders recover the first `alpha` messages, while each message
//! individually stays perfectly hidden from any `N_alpha` encoder outputs.
//! This crate builds the relevant code families, machine-verifies their
//! reconstruction and security guarantees by exhaustive enumeration, and
//! computes the associated rate regions in exact rational arithmetic.
//!
//! The main pieces:
//!
//! * [`field`] — exact GF(p) arithmetic, rank, and solving.
//! * [`mds`] — the two systematic-key MDS generator families (one exposes
//!   its keys as coded symbols, one hides them) built from Cauchy columns.
//! * [`ramp`] — `(c, k, n)` ramp secret sharing on top of those
//!   generators.
//! * [`codec`] — the four multilevel schemes: superposition, the two
//!   pairwise joint strategies, and group-pairwise coding for
//!   differential security profiles; plus a universal decoder.
//! * [`fixtures`] — literal published example codes, reproduced
//!   coefficient-for-coefficient.
//! * [`verify`] — the exhaustive information-theoretic oracle: exact count
//!   tables for reconstruction/security and rank-based exact entropies.
//! * [`region`] — resolution values, supporting hyperplanes, the
//!   superposition optimality test, and exact region membership via a
//!   rational simplex ([`simplex`]).
//! * [`wire`] / [`descriptor`] — bit-exact share containers and JSON code
//!   descriptors.
//! * [`cli`] — the `smdc` command-line tool
//!   (`gen | encode | decode | verify | region`).
//!
//! See the `examples/` directory for one runnable walkthrough per
//! capability.

pub mod cli;
pub mod codec;
pub mod descriptor;
pub mod field;
pub mod fixtures;
pub mod mds;
pub mod ramp;
pub mod rat;
pub mod region;
pub mod simplex;
pub mod verify;
pub mod wire;
