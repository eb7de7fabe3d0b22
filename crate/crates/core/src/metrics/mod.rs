//! Exact graph and lexical statistics.

mod aspl;
mod degree;
mod heaps;
mod zipf;

pub use aspl::{aspl, aspl_per_source, distance_sum, Csr};
pub use degree::{
    degree_histogram, fit_degree_exponent, DegreeExponent, DegreeHistogram, DEFAULT_KMIN,
    MIN_TAIL_DEGREES,
};
pub use heaps::{heaps_curve, heaps_curve_from, heaps_fit, log_positions, HeapsFit};
pub use zipf::{rank_frequencies, zipf_fit, zipf_fit_frequencies, ZipfFit, MIN_ZIPF_TYPES, ZIPF_FLAG_RMS};


