//! L(N) growth curves averaged over cyclically shifted starting points.
//!
//! A text is treated as a closed cycle. For a checkpoint N whose shift
//! band has step Δτ, one realization starts at every offset that is a
//! multiple of Δτ; each grows until it holds N nodes and its ASPL is
//! recorded. Larger N get larger steps and therefore fewer realizations.
//! Every offset is grown once and measured at all checkpoints it serves.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metrics::aspl;
use crate::netbuild::{Grower, SymbolStream};
use crate::tokenizer::{strip_punctuation, TokenStream};

const DENSE_UP_TO: usize = 100;
const POINTS_PER_DECADE: f64 = 25.0;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CheckpointSchedule {
    points: Vec<usize>,
}

impl CheckpointSchedule {
    pub fn new(points: Vec<usize>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidConfig("checkpoint schedule is empty".into()));
        }
        if points[0] < 2 {
            return Err(Error::InvalidConfig("first checkpoint must be at least 2".into()));
        }
        if points.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidConfig("checkpoints must be strictly increasing".into()));
        }
        Ok(Self { points })
    }

    /// Every N in 2..=100, then 25 log-spaced points per decade, ending
    /// exactly at `n_total`.
    pub fn default_for(n_total: usize) -> Self {
        let n_total = n_total.max(2);
        let mut points: Vec<usize> = (2..=n_total.min(DENSE_UP_TO)).collect();
        let mut i = 1.0;
        loop {
            let n = (DENSE_UP_TO as f64 * 10f64.powf(i / POINTS_PER_DECADE)).round() as usize;
            if n >= n_total {
                break;
            }
            if points.last().is_some_and(|&last| n > last) {
                points.push(n);
            }
            i += 1.0;
        }
        if points.last() != Some(&n_total) {
            points.push(n_total);
        }
        Self { points }
    }

    pub fn points(&self) -> &[usize] {
        &self.points
    }

    pub fn max(&self) -> usize {
        *self.points.last().expect("schedule is never empty")
    }

    /// Drops points above `max_n`; `None` when nothing is left.
    pub fn capped(&self, max_n: usize) -> Option<Self> {
        let points: Vec<usize> = self.points.iter().copied().filter(|&n| n <= max_n).collect();
        (!points.is_empty()).then_some(Self { points })
    }
}

impl FromStr for CheckpointSchedule {
    type Err = Error;

    /// Comma-separated node counts, e.g. `2,3,5,10,100`.
    fn from_str(s: &str) -> Result<Self> {
        let points = s
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<usize>()
                    .map_err(|e| Error::InvalidConfig(format!("bad checkpoint {p:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(points)
    }
}

/// Shift step Δτ per node-count band. Past the last band the step grows
/// tenfold per decade of N.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ShiftSchedule {
    bands: Vec<(usize, usize)>,
}

impl Default for ShiftSchedule {
    fn default() -> Self {
        Self {
            bands: vec![(10_000, 100), (100_000, 1000)],
        }
    }
}

impl ShiftSchedule {
    pub fn new(bands: Vec<(usize, usize)>) -> Result<Self> {
        Self::check(&bands).map_err(Error::InvalidConfig)?;
        Ok(Self { bands })
    }

    /// Problems with a band list, if any.
    pub fn check(bands: &[(usize, usize)]) -> std::result::Result<(), String> {
        if bands.is_empty() {
            return Err("shift schedule has no bands".into());
        }
        if bands.iter().any(|&(_, dt)| dt == 0) {
            return Err("shift step must be at least 1".into());
        }
        if bands[0].0 == 0 {
            return Err("band limits must be at least 1".into());
        }
        if bands.windows(2).any(|w| w[0].0 >= w[1].0) {
            return Err("band limits must be strictly ascending".into());
        }
        if bands.windows(2).any(|w| w[0].1 > w[1].1) {
            return Err("shift steps must be ascending".into());
        }
        Ok(())
    }

    pub fn bands(&self) -> &[(usize, usize)] {
        &self.bands
    }

    pub fn delta_tau(&self, n: usize) -> usize {
        if let Some(&(_, dt)) = self.bands.iter().find(|&&(n_max, _)| n <= n_max) {
            return dt;
        }
        let &(mut n_max, mut dt) = self.bands.last().expect("schedule is never empty");
        while n > n_max {
            n_max = n_max.saturating_mul(10);
            dt = dt.saturating_mul(10);
        }
        dt
    }
}

impl FromStr for ShiftSchedule {
    type Err = Error;

    /// `n_max:delta_tau` pairs separated by commas, e.g. `10000:100,100000:1000`.
    fn from_str(s: &str) -> Result<Self> {
        let bands = s
            .split(',')
            .map(|band| {
                let (n, dt) = band
                    .split_once(':')
                    .ok_or_else(|| Error::InvalidConfig(format!("bad band {band:?}")))?;
                let parse = |v: &str| {
                    v.trim()
                        .parse::<usize>()
                        .map_err(|e| Error::InvalidConfig(format!("bad band {band:?}: {e}")))
                };
                Ok((parse(n)?, parse(dt)?))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(bands)
    }
}

impl fmt::Display for ShiftSchedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.bands.iter().map(|(n, dt)| format!("{n}:{dt}")).collect();
        f.write_str(&parts.join(","))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CurveMode {
    /// Words and punctuation marks.
    Tokens,
    /// Punctuation removed before building the network.
    #[serde(rename = "words")]
    WordsOnly,
    /// Generated by the accelerated-growth model.
    Synthetic,
}

impl CurveMode {
    pub fn as_str(self) -> &'static str {
        match self {
            CurveMode::Tokens => "tokens",
            CurveMode::WordsOnly => "words",
            CurveMode::Synthetic => "synthetic",
        }
    }

    /// The stream a text contributes in this mode.
    pub fn select(self, stream: &TokenStream) -> Result<TokenStream> {
        match self {
            CurveMode::WordsOnly => strip_punctuation(stream),
            CurveMode::Tokens | CurveMode::Synthetic => Ok(stream.clone()),
        }
    }
}

impl fmt::Display for CurveMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CurveMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "tokens" => Ok(CurveMode::Tokens),
            "words" | "words-only" | "wordsonly" => Ok(CurveMode::WordsOnly),
            "synthetic" => Ok(CurveMode::Synthetic),
            _ => Err(Error::InvalidConfig(format!("unknown mode {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurveSample {
    pub n: usize,
    pub mean_l: f64,
    /// Realizations averaged; for group averages, the contributing curves.
    pub realizations: usize,
    /// Sample standard deviation across realizations (0 for a single one).
    pub std_l: f64,
}

impl CurveSample {
    pub fn stderr(&self) -> f64 {
        self.std_l / (self.realizations as f64).sqrt()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GrowthCurve {
    pub text_id: String,
    pub mode: CurveMode,
    pub samples: Vec<CurveSample>,
}

impl GrowthCurve {
    /// Sample with the largest mean L (earliest on ties).
    pub fn max(&self) -> Option<&CurveSample> {
        self.samples
            .iter()
            .fold(None, |best: Option<&CurveSample>, s| match best {
                Some(b) if b.mean_l >= s.mean_l => Some(b),
                _ => Some(s),
            })
    }

    pub fn last(&self) -> Option<&CurveSample> {
        self.samples.last()
    }

    pub fn sample_at(&self, n: usize) -> Option<&CurveSample> {
        self.samples
            .binary_search_by_key(&n, |s| s.n)
            .ok()
            .map(|i| &self.samples[i])
    }
}

pub(crate) fn mean_and_std(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

/// ASPL at each requested node count for one growth from `offset`.
/// `checkpoints` must be ascending and within the vocabulary.
pub fn realization(symbols: &SymbolStream, offset: usize, checkpoints: &[usize]) -> Result<Vec<f64>> {
    let mut grower = Grower::new(symbols, offset, None);
    let mut out = Vec::with_capacity(checkpoints.len());
    for &n in checkpoints {
        if !grower.advance_to_nodes(n) {
            return Err(Error::VocabularyExhausted {
                requested: n,
                available: grower.network().n_nodes(),
            });
        }
        out.push(aspl(grower.network())?);
    }
    Ok(out)
}

/// Start offsets used at each checkpoint: multiples of that checkpoint's
/// Δτ below the stream length.
pub fn offsets_for(total_len: usize, checkpoints: &CheckpointSchedule, shifts: &ShiftSchedule) -> Vec<usize> {
    let steps: BTreeSet<usize> = checkpoints.points().iter().map(|&n| shifts.delta_tau(n)).collect();
    let mut offsets = BTreeSet::new();
    for dt in steps {
        offsets.extend((0..total_len).step_by(dt));
    }
    offsets.into_iter().collect()
}

/// Growth curve of an interned stream.
pub fn curve_for_symbols(
    symbols: &SymbolStream,
    text_id: &str,
    mode: CurveMode,
    checkpoints: &CheckpointSchedule,
    shifts: &ShiftSchedule,
) -> Result<GrowthCurve> {
    let available = symbols.vocabulary_size();
    if checkpoints.max() > available {
        return Err(Error::VocabularyExhausted {
            requested: checkpoints.max(),
            available,
        });
    }
    let points = checkpoints.points();
    let steps: Vec<usize> = points.iter().map(|&n| shifts.delta_tau(n)).collect();
    let offsets = offsets_for(symbols.total_len(), checkpoints, shifts);

    let per_offset: Vec<(Vec<usize>, Vec<f64>)> = offsets
        .par_iter()
        .map(|&offset| {
            let served: Vec<usize> = (0..points.len()).filter(|&i| offset % steps[i] == 0).collect();
            let ns: Vec<usize> = served.iter().map(|&i| points[i]).collect();
            realization(symbols, offset, &ns).map(|ls| (served, ls))
        })
        .collect::<Result<_>>()?;

    let mut values: Vec<Vec<f64>> = vec![Vec::new(); points.len()];
    for (served, ls) in &per_offset {
        for (&i, &l) in served.iter().zip(ls) {
            values[i].push(l);
        }
    }
    let samples = points
        .iter()
        .zip(&values)
        .map(|(&n, vs)| {
            let (mean_l, std_l) = mean_and_std(vs);
            CurveSample {
                n,
                mean_l,
                realizations: vs.len(),
                std_l,
            }
        })
        .collect();
    Ok(GrowthCurve {
        text_id: text_id.to_string(),
        mode,
        samples,
    })
}

/// Growth curve of a text in the given mode.
pub fn curve_for_text(
    stream: &TokenStream,
    text_id: &str,
    mode: CurveMode,
    checkpoints: &CheckpointSchedule,
    shifts: &ShiftSchedule,
) -> Result<GrowthCurve> {
    let selected = mode.select(stream)?;
    curve_for_symbols(&SymbolStream::new(&selected), text_id, mode, checkpoints, shifts)
}

/// Pointwise mean over the curves that reach each N. The `realizations`
/// field of the result counts contributing curves.
pub fn group_average(group_id: &str, curves: &[GrowthCurve]) -> Result<GrowthCurve> {
    let first = curves.first().ok_or(Error::EmptyGroup)?;
    if curves.iter().any(|c| c.mode != first.mode) {
        return Err(Error::MixedModes);
    }
    let ns: BTreeSet<usize> = curves.iter().flat_map(|c| c.samples.iter().map(|s| s.n)).collect();
    let samples = ns
        .into_iter()
        .map(|n| {
            let vs: Vec<f64> = curves
                .iter()
                .filter_map(|c| c.sample_at(n).map(|s| s.mean_l))
                .collect();
            let (mean_l, std_l) = mean_and_std(&vs);
            CurveSample {
                n,
                mean_l,
                realizations: vs.len(),
                std_l,
            }
        })
        .collect();
    Ok(GrowthCurve {
        text_id: group_id.to_string(),
        mode: first.mode,
        samples,
    })
}
