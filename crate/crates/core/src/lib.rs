//! Word-adjacency networks built from text, the growth of their average
//! shortest path length L(N), and models of that growth.
//!
//! The pipeline reads documents ([`corpus`]), splits them into word and
//! punctuation tokens ([`tokenizer`]), grows binary adjacency networks
//! ([`netbuild`]), measures them exactly ([`metrics`]), averages L(N) over
//! cyclically shifted starts ([`growthcurve`]), fits the chain/random-graph
//! interpolation ([`model`]) and compares against an accelerated-growth
//! generator ([`synth`]).

pub mod corpus;
pub mod error;
pub mod formats;
pub mod growthcurve;
pub mod metrics;
pub mod model;
pub mod netbuild;
pub mod synth;
pub mod tokenizer;

pub use error::{Error, Result};
