use std::path::PathBuf;

use lexnet::corpus::{load_document, Language};
use lexnet::growthcurve::*;
use lexnet::netbuild::{grow, snapshot_at_nodes, SymbolStream};
use lexnet::tokenizer::{strip_punctuation, tokenize, PunctuationInventory, Token, TokenStream, WhitespaceSegmenter};
use proptest::prelude::*;

fn alice() -> TokenStream {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/alice.txt");
    let doc = load_document(path, Language::English, false).unwrap();
    tokenize(&doc, &PunctuationInventory::western(), &WhitespaceSegmenter).unwrap()
}

fn words(text: &str) -> SymbolStream {
    SymbolStream::new(&TokenStream::from_words(text))
}

#[test]
fn hand_computed_two_realizations() {
    // Offset 0: a b c d, a path (L = 5/3). Offset 3: d a c a b, a star on a
    // (L = 3/2).
    let s = words("a b c d a c");
    let cp = CheckpointSchedule::new(vec![4]).unwrap();
    let shifts = ShiftSchedule::new(vec![(100, 3)]).unwrap();
    let c = curve_for_symbols(&s, "toy", CurveMode::Tokens, &cp, &shifts).unwrap();
    assert_eq!(c.samples[0].realizations, 2);
    assert!((c.samples[0].mean_l - 19.0 / 12.0).abs() < 1e-15);
}

#[test]
fn periodic_stream_has_no_spread() {
    let s = words(&"p q r s t ".repeat(40));
    let cp = CheckpointSchedule::new(vec![2, 3, 4, 5]).unwrap();
    for dt in [1, 3, 7] {
        let shifts = ShiftSchedule::new(vec![(100, dt)]).unwrap();
        let c = curve_for_symbols(&s, "p", CurveMode::Tokens, &cp, &shifts).unwrap();
        for sample in &c.samples {
            assert!(sample.std_l < 1e-12);
            assert!((sample.mean_l - (sample.n as f64 + 1.0) / 3.0).abs() < 1e-12);
        }
    }
}

#[test]
fn alice_chain_regime_exact() {
    let stream = alice();
    for mode in [CurveMode::Tokens, CurveMode::WordsOnly] {
        let symbols = SymbolStream::new(&mode.select(&stream).unwrap());
        let s = symbols.symbols();
        for offset in (0..s.len()).step_by(997) {
            // Length of the repeat-free window from this offset.
            let mut seen = std::collections::HashSet::new();
            let distinct = (0..s.len()).take_while(|&i| seen.insert(s[(offset + i) % s.len()])).count();
            let ns: Vec<usize> = (2..=distinct.min(40)).collect();
            let ls = realization(&symbols, offset, &ns).unwrap();
            for (&n, &l) in ns.iter().zip(&ls) {
                assert_eq!(l, (n as f64 + 1.0) / 3.0, "offset {offset} N {n}");
            }
        }
        let cp = CheckpointSchedule::new(vec![2, 3]).unwrap();
        let c = curve_for_symbols(&symbols, "alice", mode, &cp, &ShiftSchedule::default()).unwrap();
        assert!((c.samples[0].mean_l - 1.0).abs() < 1e-12);
        assert!((c.samples[1].mean_l - 4.0 / 3.0).abs() < 1e-12);
    }
}

#[test]
fn alice_words_curve_peaks_higher() {
    let stream = alice();
    let cp = CheckpointSchedule::default_for(2_000).capped(300).unwrap();
    let shifts = ShiftSchedule::new(vec![(10_000, 400)]).unwrap();
    let tokens = curve_for_text(&stream, "alice", CurveMode::Tokens, &cp, &shifts).unwrap();
    let words = curve_for_text(&stream, "alice", CurveMode::WordsOnly, &cp, &shifts).unwrap();
    let (mt, mw) = (tokens.max().unwrap(), words.max().unwrap());
    assert!(mw.mean_l > mt.mean_l, "{mw:?} vs {mt:?}");
    assert!(mt.n > 10 && mt.n < 100 && mt.mean_l < 10.0, "{mt:?}");
}

#[test]
fn curve_independent_of_thread_count() {
    let stream = alice();
    let symbols = SymbolStream::new(&stream);
    let cp = CheckpointSchedule::default_for(2_000).capped(400).unwrap();
    let shifts = ShiftSchedule::new(vec![(10_000, 1_000)]).unwrap();
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| curve_for_symbols(&symbols, "a", CurveMode::Tokens, &cp, &shifts).unwrap())
    };
    assert_eq!(run(1), run(3));
}

fn token_stream() -> impl Strategy<Value = TokenStream> {
    let token = prop_oneof![
        4 => (0u8..12).prop_map(|i| Token::word(format!("w{i}"))),
        1 => prop::sample::select(vec![",", ";"]).prop_map(Token::punct),
        1 => Just(Token::terminator(".")),
    ];
    prop::collection::vec(token, 1..200).prop_map(TokenStream::new)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn strip_is_idempotent_and_keeps_word_order(stream in token_stream()) {
        let expected: Vec<&Token> = stream.tokens().iter().filter(|t| t.is_word()).collect();
        match strip_punctuation(&stream) {
            Ok(words) => {
                prop_assert_eq!(words.tokens().iter().collect::<Vec<_>>(), expected);
                prop_assert_eq!(strip_punctuation(&words).unwrap(), words);
            }
            Err(_) => prop_assert!(expected.is_empty()),
        }
    }

    #[test]
    fn snapshots_connected_and_consistent(stream in token_stream(), start in 0usize..500) {
        let symbols = SymbolStream::new(&stream);
        let vocab = symbols.vocabulary_size();
        let start = start % symbols.total_len();
        let mut grower = grow(&symbols, start, None);
        let mut ns = Vec::new();
        let mut ls = Vec::new();
        for n in 1..=vocab {
            prop_assert!(grower.advance_to_nodes(n));
            let net = grower.network();
            prop_assert_eq!(net.n_nodes(), n);
            prop_assert!(net.is_connected());
            let snap = snapshot_at_nodes(&symbols, start, n).unwrap();
            prop_assert_eq!(snap.edges().collect::<Vec<_>>(), net.edges().collect::<Vec<_>>());
            if n >= 2 {
                ns.push(n);
                ls.push(lexnet::metrics::aspl(net).unwrap());
            }
        }
        prop_assert!(snapshot_at_nodes(&symbols, start, vocab + 1).is_err());
        // Measuring a subset of checkpoints reproduces the same values.
        if !ns.is_empty() {
            let every_other: Vec<usize> = ns.iter().copied().step_by(2).collect();
            let sub = realization(&symbols, start, &every_other).unwrap();
            for (l, &n) in sub.iter().zip(&every_other) {
                prop_assert_eq!(*l, ls[ns.iter().position(|&m| m == n).unwrap()]);
            }
        }
    }
}
