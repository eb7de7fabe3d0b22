use std::collections::HashSet;

use serde::Serialize;

use crate::tokenizer::TokenStream;

const POINTS_PER_DECADE: f64 = 20.0;
const FIT_MIN_TAU: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HeapsFit {
    pub delta: f64,
    pub prefactor: f64,
    /// RMS residual of ln N.
    pub fit_error: f64,
    /// Vocabulary stopped growing over the second half of the text.
    pub saturated: bool,
}

/// Log-spaced sample positions 1..=len, always ending at `len`.
pub fn log_positions(len: usize) -> Vec<usize> {
    let mut out = Vec::new();
    if len == 0 {
        return out;
    }
    let mut i = 0.0;
    loop {
        let tau = 10f64.powf(i / POINTS_PER_DECADE).round() as usize;
        if tau >= len {
            break;
        }
        if out.last() != Some(&tau) {
            out.push(tau);
        }
        i += 1.0;
    }
    out.push(len);
    out
}

/// Distinct types after τ tokens, at log-spaced τ.
pub fn heaps_curve(stream: &TokenStream) -> Vec<(usize, usize)> {
    heaps_curve_from(stream.tokens().iter().map(|t| t.surface.as_str()))
}

pub fn heaps_curve_from<T: Eq + std::hash::Hash>(
    items: impl ExactSizeIterator<Item = T>,
) -> Vec<(usize, usize)> {
    let positions = log_positions(items.len());
    let mut seen = HashSet::new();
    let mut out = Vec::with_capacity(positions.len());
    let mut next = positions.iter().peekable();
    for (i, s) in items.enumerate() {
        seen.insert(s);
        if next.peek() == Some(&&(i + 1)) {
            out.push((i + 1, seen.len()));
            next.next();
        }
    }
    out
}

/// Least-squares fit of ln N = ln A + δ·ln τ over points with τ ≥ 100
/// (all points when fewer than two qualify).
pub fn heaps_fit(curve: &[(usize, usize)]) -> HeapsFit {
    let mut pts: Vec<(f64, f64)> = curve
        .iter()
        .filter(|&&(t, n)| t >= FIT_MIN_TAU && n > 0)
        .map(|&(t, n)| ((t as f64).ln(), (n as f64).ln()))
        .collect();
    if pts.len() < 2 {
        pts = curve
            .iter()
            .filter(|&&(t, n)| t > 0 && n > 0)
            .map(|&(t, n)| ((t as f64).ln(), (n as f64).ln()))
            .collect();
    }
    let saturated = match curve.last() {
        Some(&(t_end, n_end)) => curve
            .iter()
            .rev()
            .find(|&&(t, _)| 2 * t <= t_end)
            .is_some_and(|&(_, n_half)| n_half == n_end),
        None => false,
    };
    if pts.len() < 2 {
        let (x, y) = pts.first().copied().unwrap_or((0.0, 0.0));
        return HeapsFit {
            delta: 1.0,
            prefactor: (y - x).exp(),
            fit_error: 0.0,
            saturated,
        };
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let delta = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let intercept = my - delta * mx;
    let sse: f64 = pts
        .iter()
        .map(|p| {
            let r = p.1 - (intercept + delta * p.0);
            r * r
        })
        .sum();
    HeapsFit {
        delta,
        prefactor: intercept.exp(),
        fit_error: (sse / n).sqrt(),
        saturated,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn positions_end_at_len() {
        let p = log_positions(1000);
        assert_eq!(p.first(), Some(&1));
        assert_eq!(p.last(), Some(&1000));
        assert!(p.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(log_positions(1), vec![1]);
    }

    #[test]
    fn all_distinct_gives_unit_exponent() {
        let words: Vec<String> = (0..5000).map(|i| format!("w{i}")).collect();
        let s = TokenStream::from_words(&words.join(" "));
        let curve = heaps_curve(&s);
        assert!(curve.iter().all(|&(t, n)| t == n));
        let fit = heaps_fit(&curve);
        assert_eq!(fit.delta, 1.0);
        assert!(!fit.saturated);
    }

    #[test]
    fn cycling_vocabulary_saturates() {
        let words: Vec<String> = (0..3000).map(|i| format!("w{}", i % 10)).collect();
        let s = TokenStream::from_words(&words.join(" "));
        let curve = heaps_curve(&s);
        assert_eq!(curve.last(), Some(&(3000, 10)));
        assert!(heaps_fit(&curve).saturated);
    }
}
