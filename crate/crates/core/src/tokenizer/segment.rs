use std::collections::HashSet;

use crate::error::{Error, Result};

/// Splits a line of text into word candidates. Output segments, with
/// whitespace removed, must concatenate to the input's non-whitespace
/// characters; [`check_reconstruction`] enforces this.
pub trait Segmenter: Send + Sync {
    fn segment(&self, text: &str) -> Result<Vec<String>>;
}

/// Splits on whitespace. Used for Western text and for input that an
/// external segmenter has already delimited.
#[derive(Debug, Clone, Copy, Default)]
pub struct WhitespaceSegmenter;

impl Segmenter for WhitespaceSegmenter {
    fn segment(&self, text: &str) -> Result<Vec<String>> {
        Ok(text.split_whitespace().map(str::to_string).collect())
    }
}

/// Greedy longest-match segmenter over a word list. Characters not covered
/// by any dictionary word become single-character segments.
#[derive(Debug, Clone, Default)]
pub struct DictionarySegmenter {
    words: HashSet<String>,
    max_chars: usize,
}

impl DictionarySegmenter {
    pub fn new<I, S>(words: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let words: HashSet<String> = words
            .into_iter()
            .map(Into::into)
            .filter(|w: &String| !w.is_empty() && !w.chars().any(char::is_whitespace))
            .collect();
        let max_chars = words.iter().map(|w| w.chars().count()).max().unwrap_or(1);
        Self { words, max_chars }
    }

    /// One word per line; anything after the first whitespace on a line
    /// (frequency, tag) is ignored, as in common segmenter dictionaries.
    pub fn from_word_list(text: &str) -> Self {
        Self::new(text.lines().filter_map(|l| l.split_whitespace().next()))
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }
}

impl Segmenter for DictionarySegmenter {
    fn segment(&self, text: &str) -> Result<Vec<String>> {
        let mut out = Vec::new();
        let mut buf = String::new();
        for run in text.split_whitespace() {
            let chars: Vec<char> = run.chars().collect();
            let mut i = 0;
            while i < chars.len() {
                let longest = self.max_chars.min(chars.len() - i);
                let mut taken = 1;
                for len in (2..=longest).rev() {
                    buf.clear();
                    buf.extend(&chars[i..i + len]);
                    if self.words.contains(&buf) {
                        taken = len;
                        break;
                    }
                }
                out.push(chars[i..i + taken].iter().collect());
                i += taken;
            }
        }
        Ok(out)
    }
}

pub fn check_reconstruction(input: &str, segments: &[String]) -> Result<()> {
    let mut expected = input.chars().filter(|c| !c.is_whitespace());
    for seg in segments {
        if seg.is_empty() {
            return Err(Error::Segmentation("segmenter produced an empty segment".into()));
        }
        for c in seg.chars().filter(|c| !c.is_whitespace()) {
            if expected.next() != Some(c) {
                return Err(Error::Segmentation(format!(
                    "segment {seg:?} does not reproduce the input"
                )));
            }
        }
    }
    if expected.next().is_some() {
        return Err(Error::Segmentation("segments drop part of the input".into()));
    }
    Ok(())
}
