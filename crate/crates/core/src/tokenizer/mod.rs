//! Text to token streams.
//!
//! Every kept punctuation mark becomes its own token; excluded marks and
//! stray symbols vanish. A symbol sitting between two letters or digits
//! (the apostrophe in "don't", the hyphen in "daisy-chain") stays inside
//! the word.

mod inventory;
mod segment;

use std::collections::BTreeMap;

pub use inventory::{parse_inventory, parse_mark, parse_mark_list, MarkClass, PunctuationInventory};
pub use segment::{check_reconstruction, DictionarySegmenter, Segmenter, WhitespaceSegmenter};

use serde::Serialize;
use unicode_normalization::char::is_combining_mark;

use crate::corpus::{Language, TextDocument};
use crate::error::{Error, Result};

/// Surface of the token emitted when a line break ends an unterminated
/// sentence. It cannot arise from text: `<` and `>` never survive inside
/// a word.
pub const NEWLINE_TERMINATOR: &str = "<eol>";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum TokenKind {
    Word,
    Punctuation,
    SentenceTerminator,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Token {
    pub surface: String,
    pub kind: TokenKind,
}

impl Token {
    pub fn word(surface: impl Into<String>) -> Self {
        Self {
            surface: surface.into(),
            kind: TokenKind::Word,
        }
    }

    pub fn punct(surface: impl Into<String>) -> Self {
        Self {
            surface: surface.into(),
            kind: TokenKind::Punctuation,
        }
    }

    pub fn terminator(surface: impl Into<String>) -> Self {
        Self {
            surface: surface.into(),
            kind: TokenKind::SentenceTerminator,
        }
    }

    pub fn is_word(&self) -> bool {
        self.kind == TokenKind::Word
    }
}

/// The text as read: tokens in order, addressable cyclically.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TokenStream {
    tokens: Vec<Token>,
}

impl TokenStream {
    pub fn new(tokens: Vec<Token>) -> Self {
        Self { tokens }
    }

    /// Builds a stream of word tokens from whitespace-separated text.
    pub fn from_words(text: &str) -> Self {
        Self::new(text.split_whitespace().map(Token::word).collect())
    }

    pub fn total_len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn tokens(&self) -> &[Token] {
        &self.tokens
    }

    /// Token at position `i mod total_len`.
    ///
    /// Panics on an empty stream.
    pub fn cyclic(&self, i: usize) -> &Token {
        &self.tokens[i % self.tokens.len()]
    }

    pub fn surfaces(&self) -> impl Iterator<Item = &str> + '_ {
        self.tokens.iter().map(|t| t.surface.as_str())
    }
}

impl FromIterator<Token> for TokenStream {
    fn from_iter<I: IntoIterator<Item = Token>>(iter: I) -> Self {
        Self::new(iter.into_iter().collect())
    }
}

/// Tokenizes a normalized document line by line. Each line is segmented,
/// checked against the segmenter's reconstruction contract, then split at
/// inventory marks.
pub fn tokenize(
    doc: &TextDocument,
    inventory: &PunctuationInventory,
    segmenter: &dyn Segmenter,
) -> Result<TokenStream> {
    tokenize_text(&doc.raw, doc.language, inventory, segmenter)
}

pub fn tokenize_text(
    text: &str,
    language: Language,
    inventory: &PunctuationInventory,
    segmenter: &dyn Segmenter,
) -> Result<TokenStream> {
    let lowercase = language == Language::English;
    let mut tokens = Vec::new();
    let mut lines = text.split('\n').peekable();
    while let Some(line) = lines.next() {
        let segments = segmenter.segment(line)?;
        check_reconstruction(line, &segments)?;
        for seg in &segments {
            split_segment(seg, inventory, lowercase, &mut tokens);
        }
        let at_line_break = lines.peek().is_some();
        if at_line_break && inventory.newline_terminates {
            if let Some(last) = tokens.last() {
                if last.kind != TokenKind::SentenceTerminator {
                    tokens.push(Token::terminator(NEWLINE_TERMINATOR));
                }
            }
        }
    }
    Ok(TokenStream::new(tokens))
}

fn is_word_char(c: char) -> bool {
    c.is_alphanumeric() || is_combining_mark(c)
}

fn flush(word: &mut String, lowercase: bool, out: &mut Vec<Token>) {
    if word.is_empty() {
        return;
    }
    let surface = if lowercase {
        word.to_lowercase()
    } else {
        word.clone()
    };
    word.clear();
    out.push(Token::word(surface));
}

fn split_segment(seg: &str, inventory: &PunctuationInventory, lowercase: bool, out: &mut Vec<Token>) {
    let chars: Vec<char> = seg.chars().collect();
    let mut word = String::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            flush(&mut word, lowercase, out);
            i += 1;
            continue;
        }
        let inner = !word.is_empty() && chars.get(i + 1).is_some_and(|&n| is_word_char(n));
        if let Some((class, len)) = inventory.match_at(&chars, i) {
            let in_word_apostrophe = len == 1 && matches!(c, '\'' | '’') && inner;
            if !in_word_apostrophe {
                flush(&mut word, lowercase, out);
                let surface: String = chars[i..i + len].iter().collect();
                match class {
                    MarkClass::Terminator => out.push(Token::terminator(surface)),
                    MarkClass::Other => out.push(Token::punct(surface)),
                    MarkClass::Excluded => {}
                }
                i += len;
                continue;
            }
        }
        if is_word_char(c) || inner {
            word.push(c);
        } else {
            flush(&mut word, lowercase, out);
        }
        i += 1;
    }
    flush(&mut word, lowercase, out);
}

/// Keeps only word tokens; words separated by punctuation become adjacent.
pub fn strip_punctuation(stream: &TokenStream) -> Result<TokenStream> {
    let words: TokenStream = stream.tokens.iter().filter(|t| t.is_word()).cloned().collect();
    if words.is_empty() {
        return Err(Error::EmptyStream);
    }
    Ok(words)
}

/// Occurrences of every punctuation mark (terminators included).
pub fn punctuation_census(stream: &TokenStream) -> BTreeMap<String, usize> {
    let mut counts = BTreeMap::new();
    for t in stream.tokens.iter().filter(|t| !t.is_word()) {
        *counts.entry(t.surface.clone()).or_insert(0) += 1;
    }
    counts
}

/// Ratio of two mark counts, e.g. the same mark in an original and its
/// translation. `None` when the denominator is zero.
pub fn census_ratio(numerator: usize, denominator: usize) -> Option<f64> {
    (denominator != 0).then(|| numerator as f64 / denominator as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn en(text: &str) -> Vec<String> {
        tokenize_text(text, Language::English, &PunctuationInventory::western(), &WhitespaceSegmenter)
            .unwrap()
            .surfaces()
            .map(str::to_string)
            .collect()
    }

    #[test]
    fn english_separator_splitting() {
        let s = tokenize_text(
            "Cat, dog.",
            Language::English,
            &PunctuationInventory::western(),
            &WhitespaceSegmenter,
        )
        .unwrap();
        assert_eq!(
            s.tokens(),
            &[
                Token::word("cat"),
                Token::punct(","),
                Token::word("dog"),
                Token::terminator(".")
            ]
        );
    }

    #[test]
    fn chinese_newline_terminates_open_sentence() {
        let seg = DictionarySegmenter::new(["他说", "说话"]);
        let s = tokenize_text("我们说话\n", Language::Chinese, &PunctuationInventory::chinese(), &seg)
            .unwrap();
        let got: Vec<_> = s.surfaces().collect();
        assert_eq!(got, vec!["我", "们", "说话", NEWLINE_TERMINATOR]);
        assert_eq!(s.tokens()[3].kind, TokenKind::SentenceTerminator);
    }

    #[test]
    fn newline_after_terminator_adds_nothing() {
        let s = tokenize_text(
            "好。\n\n好\n",
            Language::Chinese,
            &PunctuationInventory::chinese(),
            &WhitespaceSegmenter,
        )
        .unwrap();
        let got: Vec<_> = s.surfaces().collect();
        assert_eq!(got, vec!["好", "。", "好", NEWLINE_TERMINATOR]);
    }

    #[test]
    fn excluded_marks_removed() {
        let inv = PunctuationInventory::western()
            .with_other_marks(["," , ":"].iter().map(|s| s.to_string()).collect())
            .unwrap()
            .with_excluded(["(", ")"].iter().map(|s| s.to_string()).collect())
            .unwrap();
        let s = tokenize_text("a (b) c", Language::English, &inv, &WhitespaceSegmenter).unwrap();
        assert_eq!(s.surfaces().collect::<Vec<_>>(), vec!["a", "b", "c"]);
    }

    #[test]
    fn chinese_brackets_excluded_by_default() {
        let s = tokenize_text(
            "【注】他「笑」——好！",
            Language::Chinese,
            &PunctuationInventory::chinese(),
            &WhitespaceSegmenter,
        )
        .unwrap();
        let got: Vec<_> = s.surfaces().collect();
        assert_eq!(got, vec!["注", "他", "笑", "好", "！"]);
    }

    #[test]
    fn apostrophes_and_hyphens_inside_words() {
        assert_eq!(en("Don't"), vec!["don't"]);
        assert_eq!(en("a daisy-chain"), vec!["a", "daisy-chain"]);
        assert_eq!(en("`Oh dear!'"), vec!["`", "oh", "dear", "!", "'"]);
        assert_eq!(en("way--and"), vec!["way", "--", "and"]);
        assert_eq!(en("'tis"), vec!["'", "tis"]);
    }

    #[test]
    fn stray_symbols_dropped() {
        assert_eq!(en("*    *    *"), Vec::<String>::new());
        assert_eq!(en("[Exit] x\u{1a}"), vec!["exit", "x"]);
        assert_eq!(en("well-"), vec!["well"]);
    }

    #[test]
    fn ellipsis_single_token() {
        assert_eq!(en("wait… no"), vec!["wait", "…", "no"]);
    }

    #[test]
    fn chinese_pause_mark_kept() {
        let s = tokenize_text("甲、乙", Language::Chinese, &PunctuationInventory::chinese(), &WhitespaceSegmenter)
            .unwrap();
        assert_eq!(s.tokens()[1], Token::punct("、"));
    }

    #[test]
    fn failing_segmenter_reported() {
        struct Lossy;
        impl Segmenter for Lossy {
            fn segment(&self, text: &str) -> Result<Vec<String>> {
                Ok(text.split_whitespace().skip(1).map(str::to_string).collect())
            }
        }
        let r = tokenize_text("a b", Language::English, &PunctuationInventory::western(), &Lossy);
        assert!(matches!(r, Err(Error::Segmentation(_))));
    }

    #[test]
    fn strip_examples() {
        let s = TokenStream::new(vec![
            Token::word("cat"),
            Token::punct(","),
            Token::word("dog"),
            Token::terminator("."),
        ]);
        assert_eq!(strip_punctuation(&s).unwrap(), TokenStream::from_words("cat dog"));
        let only = TokenStream::new(vec![Token::punct(","), Token::terminator(".")]);
        assert!(matches!(strip_punctuation(&only), Err(Error::EmptyStream)));
        let words = TokenStream::from_words("a b a");
        assert_eq!(strip_punctuation(&words).unwrap(), words);
    }

    #[test]
    fn census_counts_marks() {
        let s = TokenStream::new(vec![
            Token::word("a"),
            Token::punct(","),
            Token::word("b"),
            Token::punct(","),
            Token::terminator("."),
        ]);
        let c = punctuation_census(&s);
        assert_eq!(c.len(), 2);
        assert_eq!(c[","], 2);
        assert_eq!(c["."], 1);
        assert!(punctuation_census(&TokenStream::default()).is_empty());
    }

    #[test]
    fn census_ratio_of_comma_counts() {
        let r = census_ratio(11_945, 6_105).unwrap();
        assert_eq!((r * 100.0).round() / 100.0, 1.96);
        assert_eq!(census_ratio(1, 0), None);
    }

    #[test]
    fn cyclic_indexing() {
        let s = TokenStream::from_words("a b c");
        assert_eq!(s.cyclic(4).surface, "b");
    }
}
