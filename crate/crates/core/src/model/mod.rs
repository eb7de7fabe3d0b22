//! Analytic model of L(N): a chain law for small networks, a random-graph
//! form with accelerated growth for large ones, and a sigmoid blend.
//!
//! ```text
//! L_chain(N) = (N + 1) / 3
//! L_rand(N)  = ln N / (ln(c0 / (α + 1)) + α ln N)        → 1/α as N → ∞
//! S(N)       = 1 / (1 + (N0 / N)^θ)
//! L_fit(N)   = (1 − S) L_chain + S L_rand
//! ```

pub mod simplex;

use std::cmp::Ordering;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::growthcurve::GrowthCurve;
use simplex::{minimize, SimplexOptions};

/// The random-regime denominator must exceed this at every fitted N.
pub const POLE_EPSILON: f64 = 1e-9;

pub const MIN_FIT_SAMPLES: usize = 20;
/// Required ratio between the largest and smallest fitted N.
pub const MIN_FIT_SPAN: f64 = 100.0;

pub fn l_chain(n: f64) -> f64 {
    (n + 1.0) / 3.0
}

fn rand_denominator(n: f64, c0: f64, growth_alpha: f64) -> f64 {
    (c0 / (growth_alpha + 1.0)).ln() + growth_alpha * n.ln()
}

pub fn l_rand(n: f64, c0: f64, growth_alpha: f64) -> Result<f64> {
    let denominator = rand_denominator(n, c0, growth_alpha);
    if !(denominator > POLE_EPSILON) {
        return Err(Error::Pole { n, denominator });
    }
    Ok(n.ln() / denominator)
}

pub fn sigmoid(n: f64, n0: f64, theta: f64) -> f64 {
    1.0 / (1.0 + (n0 / n).powf(theta))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub c0: f64,
    pub growth_alpha: f64,
    #[serde(rename = "N0")]
    pub n0: f64,
    pub theta: f64,
}

impl ModelParams {
    pub fn new(c0: f64, growth_alpha: f64, n0: f64, theta: f64) -> Self {
        Self {
            c0,
            growth_alpha,
            n0,
            theta,
        }
    }

    pub fn l_fit(&self, n: f64) -> Result<f64> {
        l_fit(n, self)
    }

    /// Thermodynamic limit of the random regime, 1/α.
    pub fn asymptote(&self) -> f64 {
        1.0 / self.growth_alpha
    }

    fn to_log(self) -> [f64; 4] {
        [self.c0.ln(), self.growth_alpha.ln(), self.n0.ln(), self.theta.ln()]
    }

    fn from_log(u: &[f64; 4]) -> Self {
        Self::new(u[0].exp(), u[1].exp(), u[2].exp(), u[3].exp())
    }

    fn lexicographic(&self, other: &Self) -> Ordering {
        self.c0
            .total_cmp(&other.c0)
            .then(self.growth_alpha.total_cmp(&other.growth_alpha))
            .then(self.n0.total_cmp(&other.n0))
            .then(self.theta.total_cmp(&other.theta))
    }
}

pub fn l_fit(n: f64, params: &ModelParams) -> Result<f64> {
    let rand = l_rand(n, params.c0, params.growth_alpha)?;
    let s = sigmoid(n, params.n0, params.theta);
    Ok((1.0 - s) * l_chain(n) + s * rand)
}

pub fn asymptote(params: &ModelParams) -> f64 {
    params.asymptote()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitParams {
    #[serde(flatten)]
    pub params: ModelParams,
    /// Root-mean-square deviation over the fitted samples.
    pub residual: f64,
    /// L_fit(N_tot) − ⟨L(N_tot)⟩ at the last sample.
    #[serde(rename = "delta_L_end")]
    pub delta_l_end: f64,
    pub asymptote: f64,
    /// False when no start reached the simplex tolerance; the parameters
    /// are then the best found.
    pub converged: bool,
}

/// Multi-start grid over (α, N0, θ, c0).
pub fn start_grid() -> Vec<ModelParams> {
    let mut out = Vec::new();
    for &growth_alpha in &[0.2, 0.3, 0.4, 0.5, 0.6] {
        for &n0 in &[10.0, 30.0, 100.0] {
            for &theta in &[1.0, 2.0, 4.0] {
                for &c0 in &[1.0, 2.0, 5.0] {
                    out.push(ModelParams::new(c0, growth_alpha, n0, theta));
                }
            }
        }
    }
    out
}

/// Sum of squared deviations; infinite when any sample hits the pole guard.
pub fn sse(points: &[(f64, f64)], params: &ModelParams) -> f64 {
    weighted_sse(points, None, params)
}

fn weighted_sse(points: &[(f64, f64)], weights: Option<&[f64]>, params: &ModelParams) -> f64 {
    let mut total = 0.0;
    for (i, &(n, l)) in points.iter().enumerate() {
        let w = weights.map_or(1.0, |w| w[i]);
        match l_fit(n, params) {
            Ok(v) if v.is_finite() => total += w * (v - l) * (v - l),
            _ => return f64::INFINITY,
        }
    }
    total
}

/// Per-sample weights proportional to the log-N interval each sorted sample
/// covers, scaled to mean 1. Makes the loss uniform in log N even when the
/// checkpoint grid is dense at small N.
pub fn log_spacing_weights(sorted_n: &[f64]) -> Vec<f64> {
    let m = sorted_n.len();
    if m < 2 {
        return vec![1.0; m];
    }
    let ln: Vec<f64> = sorted_n.iter().map(|n| n.ln()).collect();
    let mut w: Vec<f64> = (0..m)
        .map(|i| {
            let lo = if i == 0 { ln[0] } else { 0.5 * (ln[i - 1] + ln[i]) };
            let hi = if i + 1 == m { ln[m - 1] } else { 0.5 * (ln[i] + ln[i + 1]) };
            hi - lo
        })
        .collect();
    // End samples cover only half an interval; give them the full one.
    w[0] = ln[1] - ln[0];
    w[m - 1] = ln[m - 1] - ln[m - 2];
    let total: f64 = w.iter().sum();
    if total > 0.0 {
        w.iter_mut().for_each(|x| *x *= m as f64 / total);
    } else {
        w.iter_mut().for_each(|x| *x = 1.0);
    }
    w
}

/// Least-squares fit of L_fit to (N, L) points. Order of `points` does not
/// matter. Starts run in parallel; the lowest loss wins, ties broken by
/// parameter order.
pub fn fit_points(points: &[(f64, f64)], init: Option<ModelParams>) -> Result<FitParams> {
    if points.len() < MIN_FIT_SAMPLES {
        return Err(Error::CurveTooShort(format!(
            "{} samples, need {MIN_FIT_SAMPLES}",
            points.len()
        )));
    }
    let mut pts = points.to_vec();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    let (n_min, n_max) = (pts[0].0, pts[pts.len() - 1].0);
    if !(n_min > 0.0 && n_max / n_min >= MIN_FIT_SPAN) {
        return Err(Error::CurveTooShort(format!(
            "N spans {n_min}..{n_max}, need a factor of {MIN_FIT_SPAN}"
        )));
    }

    let mut starts = start_grid();
    if let Some(p) = init {
        starts.insert(0, p);
    }
    let ns: Vec<f64> = pts.iter().map(|p| p.0).collect();
    let weights = log_spacing_weights(&ns);
    let loss = |u: &[f64; 4]| weighted_sse(&pts, Some(&weights), &ModelParams::from_log(u));
    let opts = SimplexOptions::default();
    let runs: Vec<(ModelParams, f64, bool)> = starts
        .par_iter()
        .filter(|p| sse(&pts, p).is_finite())
        .map(|p| {
            let r = minimize(loss, p.to_log(), &opts);
            (ModelParams::from_log(&r.x), r.f, r.converged)
        })
        .collect();

    let best = runs
        .iter()
        .filter(|r| r.1.is_finite())
        .min_by(|a, b| a.1.total_cmp(&b.1).then(a.0.lexicographic(&b.0)))
        .ok_or_else(|| Error::FitDiverged("no start produced a finite loss".into()))?;
    let (params, loss_value, _) = *best;
    let converged = runs.iter().any(|r| r.2 && r.1 <= loss_value * (1.0 + 1e-9) + 1e-30);
    let (n_end, l_end) = pts[pts.len() - 1];
    Ok(FitParams {
        params,
        residual: (sse(&pts, &params) / pts.len() as f64).sqrt(),
        delta_l_end: params.l_fit(n_end)? - l_end,
        asymptote: params.asymptote(),
        converged,
    })
}

/// Fits the model to a growth curve's mean L(N).
pub fn fit(curve: &GrowthCurve, init: Option<ModelParams>) -> Result<FitParams> {
    let points: Vec<(f64, f64)> = curve.samples.iter().map(|s| (s.n as f64, s.mean_l)).collect();
    fit_points(&points, init)
}
