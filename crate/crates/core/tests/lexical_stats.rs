use std::collections::HashMap;
use std::path::PathBuf;

use lexnet::corpus::{load_document, Language};
use lexnet::metrics::*;
use lexnet::netbuild::{full_network, SymbolStream};
use lexnet::tokenizer::{strip_punctuation, tokenize, PunctuationInventory, TokenStream, WhitespaceSegmenter};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

fn alice() -> TokenStream {
    let doc = load_document(fixture("alice.txt"), Language::English, false).unwrap();
    tokenize(&doc, &PunctuationInventory::western(), &WhitespaceSegmenter).unwrap()
}

/// Continuous power law above kmin − 1/2, rounded to the nearest integer.
fn power_law_degrees(gamma: f64, kmin: usize, n: usize, seed: u64) -> Vec<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let x0 = kmin as f64 - 0.5;
    (0..n)
        .map(|_| {
            let u: f64 = rng.gen();
            (x0 * (1.0 - u).powf(-1.0 / (gamma - 1.0)) + 0.5).floor() as usize
        })
        .collect()
}

#[test]
fn degree_mle_recovers_known_exponents() {
    // The continuous-likelihood formula is biased on discrete data for small
    // cutoffs; kmin = 10 keeps the bias well under one standard error.
    for (i, gamma) in [1.8, 2.0, 2.5, 3.0].into_iter().enumerate() {
        let ks = power_law_degrees(gamma, 10, 100_000, 100 + i as u64);
        let fit = fit_degree_exponent(&DegreeHistogram::from_degrees(ks), 10).unwrap();
        assert!((fit.gamma - gamma).abs() < 3.0 * fit.stderr, "{gamma}: {fit:?}");
    }
}

#[test]
fn degree_mle_gamma_25_kmin_5() {
    let ks = power_law_degrees(2.5, 5, 100_000, 5);
    let fit = fit_degree_exponent(&DegreeHistogram::from_degrees(ks), 5).unwrap();
    assert!((fit.gamma - 2.5).abs() < 0.02, "{fit:?}");
}

#[test]
fn zipf_recovers_shifted_law() {
    // f(r) ∝ 1/(r + 2) over 1000 types, sampled by inverse CDF.
    let types = 1000;
    let mut cdf = Vec::with_capacity(types);
    let mut acc = 0.0;
    for r in 1..=types {
        acc += 1.0 / (r as f64 + 2.0);
        cdf.push(acc);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut counts: HashMap<usize, usize> = HashMap::new();
    for _ in 0..500_000 {
        let u = rng.gen::<f64>() * acc;
        let r = cdf.partition_point(|&c| c < u);
        *counts.entry(r).or_default() += 1;
    }
    let mut freqs: Vec<usize> = counts.into_values().collect();
    freqs.sort_unstable_by(|a, b| b.cmp(a));
    let fit = zipf_fit_frequencies(&freqs).unwrap();
    assert!((fit.zipf_alpha - 1.0).abs() < 0.1, "{fit:?}");
    assert!((fit.beta - 2.0).abs() < 0.2, "{fit:?}");
    assert!(!fit.flagged);
}

#[test]
fn alice_zipf_exponent_in_natural_range() {
    let words = strip_punctuation(&alice()).unwrap();
    let fit = zipf_fit(&words).unwrap();
    assert!((0.7..=1.3).contains(&fit.zipf_alpha), "{fit:?}");
}

#[test]
fn alice_degree_exponent() {
    let net = full_network(&SymbolStream::new(&alice()));
    let hist = degree_histogram(&net);
    assert_eq!(hist.total(), net.n_nodes());
    assert_eq!(hist.degree_sum(), 2 * net.n_edges());
    let fit = fit_degree_exponent(&hist, DEFAULT_KMIN).unwrap();
    assert!((1.7..=2.3).contains(&fit.gamma), "{fit:?}");
}

#[test]
fn alice_degree_one_nodes_are_flanked_by_one_neighbour() {
    let stream = alice();
    let symbols = SymbolStream::new(&stream);
    let net = full_network(&symbols);
    let hist = degree_histogram(&net);
    assert!(hist.degree_one_count() > 0);
    let s = symbols.symbols();
    let len = s.len();
    let mut checked = 0;
    for v in 0..net.n_nodes() as u32 {
        if net.degree(v) != 1 {
            continue;
        }
        let sym = net.symbol(v).unwrap();
        let neighbour = net.symbol(net.neighbors(v)[0]).unwrap();
        for i in (0..len).filter(|&i| s[i] == sym) {
            // The stream ends have a single flank.
            if i > 0 {
                assert_eq!(s[i - 1], neighbour, "{}", symbols.interner().surface(sym));
            }
            if i + 1 < len {
                assert_eq!(s[i + 1], neighbour, "{}", symbols.interner().surface(sym));
            }
        }
        checked += 1;
    }
    assert_eq!(checked, hist.degree_one_count());
}

#[test]
fn heaps_of_natural_text_is_sublinear() {
    let fit = heaps_fit(&heaps_curve(&alice()));
    assert!(fit.delta > 0.3 && fit.delta < 1.0, "{fit:?}");
    assert!(!fit.saturated);
}
