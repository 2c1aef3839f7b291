//! Partial difference distribution tables (PDDTs) for the SIMON block cipher
//! family, a differential knowledge graph built over sampled table entries,
//! and deterministic path search benchmarked against a seeded Monte Carlo
//! search baseline.
//!
//! The pipeline is: [`pddt::build_pddt`] → [`pddt::sample_pddt`] →
//! [`graph::build_graph`] → [`graph::find_optimal_paths`] /
//! [`graph::export_graph`], with [`search`] providing the randomized
//! baseline.
//!
//! Data-parallel inner loops (table construction, the brute-force oracle,
//! Monte Carlo playouts) run on rayon when the `parallel` feature is enabled
//! (the default) and fall back to plain iterators otherwise. Results are
//! identical either way.

pub mod diff;
pub mod dyadic;
pub mod error;
pub mod exec;
pub mod graph;
pub mod pddt;
pub mod search;
pub mod simon;

pub use diff::{Differential, ShiftMode};
pub use error::{Error, Result};
pub use exec::Exec;
pub use graph::{DiffGraph, DiffNode, EdgeRule, PathResult};
pub use pddt::{Pddt, PddtConfig, SampleSpec};
pub use simon::{CipherParams, WordState};
