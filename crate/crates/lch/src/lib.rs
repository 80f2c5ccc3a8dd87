//! IO, generators, Monte Carlo oracles and sweeps around `lch-core`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod fmt;
pub mod gen;
pub mod io;
pub mod mc;
pub mod sweep;

pub use lch_core as core;
