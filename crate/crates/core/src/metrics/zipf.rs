use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::tokenizer::TokenStream;

pub const MIN_ZIPF_TYPES: usize = 100;

/// RMS residual (natural-log units) above which a rank-frequency fit is
/// flagged as a poor description of the data.
pub const ZIPF_FLAG_RMS: f64 = 0.3;

const BETA_GRID_STEP: f64 = 0.25;
const BETA_GRID_MAX: f64 = 8.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ZipfFit {
    pub zipf_alpha: f64,
    pub beta: f64,
    /// ln of the fitted frequency scale.
    pub intercept: f64,
    /// RMS residual of ln f(r).
    pub fit_error: f64,
    pub flagged: bool,
}

/// Type frequencies sorted descending, ties by first appearance.
pub fn rank_frequencies(stream: &TokenStream) -> Vec<usize> {
    let mut index: HashMap<&str, usize> = HashMap::new();
    let mut counts: Vec<usize> = Vec::new();
    for s in stream.surfaces() {
        let id = *index.entry(s).or_insert_with(|| {
            counts.push(0);
            counts.len() - 1
        });
        counts[id] += 1;
    }
    // Stable sort keeps first-appearance order among equal counts.
    counts.sort_by(|a, b| b.cmp(a));
    counts
}

struct LineFit {
    slope: f64,
    intercept: f64,
    sse: f64,
}

fn fit_line(xs: impl Iterator<Item = f64> + Clone, ys: &[f64]) -> LineFit {
    let n = ys.len() as f64;
    let mx = xs.clone().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for (x, &y) in xs.clone().zip(ys) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
    }
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let intercept = my - slope * mx;
    let sse = xs
        .zip(ys)
        .map(|(x, &y)| {
            let r = y - (intercept + slope * x);
            r * r
        })
        .sum();
    LineFit {
        slope,
        intercept,
        sse,
    }
}

/// Fits ln f(r) = C − α·ln(r + β) by least squares over all ranks, with β
/// from a grid refined by golden-section search.
pub fn zipf_fit_frequencies(freqs: &[usize]) -> Result<ZipfFit> {
    if freqs.len() < MIN_ZIPF_TYPES {
        return Err(Error::TooSmallVocabulary {
            types: freqs.len(),
            required: MIN_ZIPF_TYPES,
        });
    }
    let ys: Vec<f64> = freqs.iter().map(|&f| (f as f64).ln()).collect();
    let fit_at = |beta: f64| fit_line((1..=ys.len()).map(move |r| (r as f64 + beta).ln()), &ys);

    let steps = (BETA_GRID_MAX / BETA_GRID_STEP) as usize;
    let (mut best_beta, mut best_sse) = (0.0, f64::INFINITY);
    for i in 0..=steps {
        let beta = i as f64 * BETA_GRID_STEP;
        let sse = fit_at(beta).sse;
        if sse < best_sse {
            best_beta = beta;
            best_sse = sse;
        }
    }

    let (lo, hi) = (
        (best_beta - BETA_GRID_STEP).max(0.0),
        (best_beta + BETA_GRID_STEP).min(BETA_GRID_MAX),
    );
    let beta = golden_section(|b| fit_at(b).sse, lo, hi, 1e-6);
    let beta = if fit_at(beta).sse <= best_sse { beta } else { best_beta };
    let line = fit_at(beta);
    let fit_error = (line.sse / ys.len() as f64).sqrt();
    Ok(ZipfFit {
        zipf_alpha: -line.slope,
        beta,
        intercept: line.intercept,
        fit_error,
        flagged: fit_error > ZIPF_FLAG_RMS,
    })
}

pub fn zipf_fit(stream: &TokenStream) -> Result<ZipfFit> {
    zipf_fit_frequencies(&rank_frequencies(stream))
}

pub(crate) fn golden_section(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while (b - a).abs() > tol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    (a + b) / 2.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tokenizer::Token;

    #[test]
    fn ranks_break_ties_by_first_appearance() {
        let s = TokenStream::from_words("b a a c b d");
        assert_eq!(rank_frequencies(&s), vec![2, 2, 1, 1]);
    }

    #[test]
    fn too_small_vocabulary() {
        let s = TokenStream::from_words("a b c");
        assert!(matches!(zipf_fit(&s), Err(Error::TooSmallVocabulary { types: 3, .. })));
    }

    #[test]
    fn exact_law_recovered() {
        let freqs: Vec<usize> = (1..=2000)
            .map(|r| (1e7 / (r as f64 + 2.0)).round() as usize)
            .collect();
        let fit = zipf_fit_frequencies(&freqs).unwrap();
        assert!((fit.zipf_alpha - 1.0).abs() < 1e-3, "{fit:?}");
        assert!((fit.beta - 2.0).abs() < 1e-2, "{fit:?}");
        assert!(!fit.flagged);
    }

    #[test]
    fn degenerate_shape_flagged() {
        let mut tokens: Vec<Token> = (0..200).map(|_| Token::word("the")).collect();
        tokens.extend((0..99).map(|i| Token::word(format!("w{i}"))));
        let fit = zipf_fit(&TokenStream::new(tokens)).unwrap();
        assert!(fit.zipf_alpha.is_finite() && fit.beta.is_finite());
        assert!(fit.flagged, "{fit:?}");
    }

    #[test]
    fn golden_section_finds_minimum() {
        let x = golden_section(|x| (x - 1.3) * (x - 1.3), 0.0, 4.0, 1e-9);
        assert!((x - 1.3).abs() < 1e-6);
    }
}
