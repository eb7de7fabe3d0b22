#![no_main]

use lexnet::corpus::{normalize_text, Language};
use lexnet::netbuild::{full_network, SymbolStream};
use lexnet::tokenizer::{
    strip_punctuation, tokenize_text, DictionarySegmenter, PunctuationInventory, WhitespaceSegmenter,
};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let text = normalize_text(text);
    let dict = DictionarySegmenter::new(["我们", "读书", "快乐"]);
    let runs = [
        tokenize_text(&text, Language::English, &PunctuationInventory::western(), &WhitespaceSegmenter),
        tokenize_text(&text, Language::Chinese, &PunctuationInventory::chinese(), &dict),
    ];
    for stream in runs.into_iter().flatten() {
        assert!(stream.tokens().iter().all(|t| !t.surface.is_empty()));
        if let Ok(words) = strip_punctuation(&stream) {
            assert!(words.tokens().iter().all(|t| t.is_word()));
            assert_eq!(strip_punctuation(&words).unwrap(), words);
        }
        let symbols = SymbolStream::new(&stream);
        if !symbols.is_empty() {
            assert!(full_network(&symbols).is_connected());
        }
    }
});
