//! Interdisciplinarity impact analysis over a classified publication corpus.
//!
//! The pipeline: load a corpus of publications whose academic authors each
//! belong to exactly one field ([`corpus`]); identify field pairs with a high
//! specific degree of interdisciplinarity ([`pairing`]); split each first
//! field's publications into specific-collaboration / generic-collaboration /
//! single-field sets ([`partition`]); normalize citations and journal impact
//! factors into per-publication indicators ([`indicators`]); test whether the
//! sets' indicator distributions differ ([`stats`], [`analysis`]); and render
//! the result tables ([`report`]). [`synthgen`] produces seeded synthetic
//! corpora for calibration and power checks.
//!
//! With the default `parallel` feature the per-publication and per-pair work
//! runs on rayon; every function is deterministic under any worker count.
//! `*_seq` variants stay sequential regardless of the feature.

pub mod analysis;
pub mod corpus;
pub mod error;
mod exec;
pub mod indicators;
pub mod pairing;
pub mod partition;
pub mod report;
pub mod stats;
pub mod synthgen;

pub use error::{Error, Result};
