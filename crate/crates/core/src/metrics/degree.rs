use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::netbuild::AdjacencyNetwork;

/// Distinct tail degrees required before an exponent is estimated.
pub const MIN_TAIL_DEGREES: usize = 10;

/// Default lower cutoff: degree-1 nodes flanked by a single neighbor token
/// sit off the power law.
pub const DEFAULT_KMIN: usize = 4;

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct DegreeHistogram {
    counts: BTreeMap<usize, usize>,
}

impl DegreeHistogram {
    pub fn from_degrees<I: IntoIterator<Item = usize>>(degrees: I) -> Self {
        let mut counts = BTreeMap::new();
        for k in degrees {
            *counts.entry(k).or_insert(0) += 1;
        }
        Self { counts }
    }

    pub fn counts(&self) -> &BTreeMap<usize, usize> {
        &self.counts
    }

    pub fn count(&self, k: usize) -> usize {
        self.counts.get(&k).copied().unwrap_or(0)
    }

    /// Number of nodes.
    pub fn total(&self) -> usize {
        self.counts.values().sum()
    }

    /// Σ k·count(k), which is twice the edge count.
    pub fn degree_sum(&self) -> usize {
        self.counts.iter().map(|(k, c)| k * c).sum()
    }

    pub fn max_degree(&self) -> usize {
        self.counts.keys().next_back().copied().unwrap_or(0)
    }

    pub fn degree_one_count(&self) -> usize {
        self.count(1)
    }
}

pub fn degree_histogram(net: &AdjacencyNetwork) -> DegreeHistogram {
    DegreeHistogram::from_degrees((0..net.n_nodes() as u32).map(|u| net.degree(u)))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DegreeExponent {
    pub gamma: f64,
    pub stderr: f64,
    /// Nodes with degree ≥ kmin.
    pub n_tail: usize,
    pub kmin: usize,
}

/// Maximum-likelihood tail exponent of P(k) ~ k^-γ for k ≥ kmin, using the
/// continuous approximation for discrete data:
/// γ = 1 + n / Σ ln(k / (kmin − ½)), stderr = (γ − 1)/√n.
pub fn fit_degree_exponent(hist: &DegreeHistogram, kmin: usize) -> Result<DegreeExponent> {
    let kmin = kmin.max(1);
    let tail: Vec<(usize, usize)> = hist
        .counts
        .range(kmin..)
        .map(|(&k, &c)| (k, c))
        .filter(|&(_, c)| c > 0)
        .collect();
    if tail.len() < MIN_TAIL_DEGREES {
        return Err(Error::InsufficientTail {
            kmin,
            distinct: tail.len(),
            required: MIN_TAIL_DEGREES,
        });
    }
    let shift = kmin as f64 - 0.5;
    let n: usize = tail.iter().map(|&(_, c)| c).sum();
    let log_sum: f64 = tail
        .iter()
        .map(|&(k, c)| c as f64 * (k as f64 / shift).ln())
        .sum();
    let gamma = 1.0 + n as f64 / log_sum;
    Ok(DegreeExponent {
        gamma,
        stderr: (gamma - 1.0) / (n as f64).sqrt(),
        n_tail: n,
        kmin,
    })
}
