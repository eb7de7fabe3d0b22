use std::collections::{BTreeSet, HashMap};

use serde::Deserialize;

use crate::corpus::Language;
use crate::error::{Error, Result};

/// How a matched mark is treated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MarkClass {
    Terminator,
    Other,
    Excluded,
}

/// Sets of punctuation marks recognised by the tokenizer. A mark may span
/// several code points (`"……"`, `"--"`); matching is longest-first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PunctuationInventory {
    terminators: BTreeSet<String>,
    other_marks: BTreeSet<String>,
    excluded: BTreeSet<String>,
    /// A line break ends an unterminated sentence with a synthetic terminator.
    pub newline_terminates: bool,
    lookup: HashMap<String, MarkClass>,
    max_mark_chars: usize,
}

const CHINESE_TERMINATORS: &[&str] = &["。", "！", "？", "…", "……", "；"];
const CHINESE_MARKS: &[&str] = &[
    "，", "、", "：", "“", "”", "‘", "’", "《", "》", "（", "）", "·", ",", ":",
];
const CHINESE_EXCLUDED: &[&str] = &[
    "【", "】", "「", "」", "〈", "〉", "-", "‐", "‑", "‒", "–", "—", "——", "―", "－", "～",
];

const WESTERN_TERMINATORS: &[&str] = &[".", "!", "?", "…", ";"];
const WESTERN_MARKS: &[&str] = &[
    ",", ":", "\"", "'", "(", ")", "—", "--", "`", "“", "”", "‘", "’",
];
const WESTERN_EXCLUDED: &[&str] = &["「", "」", "〈", "〉"];

fn set(items: &[&str]) -> BTreeSet<String> {
    items.iter().map(|s| s.to_string()).collect()
}

impl PunctuationInventory {
    pub fn new(
        terminators: BTreeSet<String>,
        other_marks: BTreeSet<String>,
        excluded: BTreeSet<String>,
        newline_terminates: bool,
    ) -> Result<Self> {
        let mut lookup = HashMap::new();
        for (marks, class) in [
            (&terminators, MarkClass::Terminator),
            (&other_marks, MarkClass::Other),
            (&excluded, MarkClass::Excluded),
        ] {
            for mark in marks {
                if mark.is_empty() || mark.chars().any(char::is_whitespace) {
                    return Err(Error::InvalidConfig(format!(
                        "punctuation mark {mark:?} is empty or contains whitespace"
                    )));
                }
                if lookup.insert(mark.clone(), class).is_some() {
                    return Err(Error::InvalidConfig(format!(
                        "punctuation mark {mark:?} appears in more than one set"
                    )));
                }
            }
        }
        let max_mark_chars = lookup.keys().map(|m| m.chars().count()).max().unwrap_or(0);
        Ok(Self {
            terminators,
            other_marks,
            excluded,
            newline_terminates,
            lookup,
            max_mark_chars,
        })
    }

    /// Chinese defaults: full-width terminators, newline rule on, paired
    /// brackets and dash variants excluded.
    pub fn chinese() -> Self {
        Self::new(
            set(CHINESE_TERMINATORS),
            set(CHINESE_MARKS),
            set(CHINESE_EXCLUDED),
            true,
        )
        .expect("built-in inventory is disjoint")
    }

    /// Western defaults. Line breaks in hard-wrapped prose carry no
    /// sentence information, so the newline rule is off.
    pub fn western() -> Self {
        Self::new(
            set(WESTERN_TERMINATORS),
            set(WESTERN_MARKS),
            set(WESTERN_EXCLUDED),
            false,
        )
        .expect("built-in inventory is disjoint")
    }

    pub fn for_language(language: Language) -> Self {
        match language {
            Language::Chinese => Self::chinese(),
            Language::English | Language::Other => Self::western(),
        }
    }

    pub fn terminators(&self) -> &BTreeSet<String> {
        &self.terminators
    }

    pub fn other_marks(&self) -> &BTreeSet<String> {
        &self.other_marks
    }

    pub fn excluded(&self) -> &BTreeSet<String> {
        &self.excluded
    }

    pub fn classify(&self, mark: &str) -> Option<MarkClass> {
        self.lookup.get(mark).copied()
    }

    /// Longest mark starting at `chars[at]`, as (class, length in chars).
    pub(crate) fn match_at(&self, chars: &[char], at: usize) -> Option<(MarkClass, usize)> {
        let longest = self.max_mark_chars.min(chars.len() - at);
        let mut buf = String::new();
        for len in (1..=longest).rev() {
            buf.clear();
            buf.extend(&chars[at..at + len]);
            if let Some(class) = self.lookup.get(&buf) {
                return Some((*class, len));
            }
        }
        None
    }

    pub fn with_terminators(self, marks: BTreeSet<String>) -> Result<Self> {
        Self::new(marks, self.other_marks, self.excluded, self.newline_terminates)
    }

    pub fn with_other_marks(self, marks: BTreeSet<String>) -> Result<Self> {
        Self::new(self.terminators, marks, self.excluded, self.newline_terminates)
    }

    pub fn with_excluded(self, marks: BTreeSet<String>) -> Result<Self> {
        Self::new(self.terminators, self.other_marks, marks, self.newline_terminates)
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct InventoryFile {
    #[serde(default)]
    base: Option<Language>,
    terminators: Option<Vec<String>>,
    other_marks: Option<Vec<String>>,
    excluded: Option<Vec<String>>,
    newline_terminates: Option<bool>,
}

/// Decodes one mark written either literally or as `U+XXXX` code points
/// (several joined by `+` or spaces, e.g. `"U+2026 U+2026"`).
pub fn parse_mark(item: &str) -> Result<String> {
    let item = item.trim();
    if !(item.starts_with("U+") || item.starts_with("u+")) {
        return Ok(item.to_string());
    }
    let mut out = String::new();
    for part in item.split(|c: char| c.is_whitespace() || c == ',') {
        if part.is_empty() {
            continue;
        }
        let hex = part
            .strip_prefix("U+")
            .or_else(|| part.strip_prefix("u+"))
            .ok_or_else(|| Error::InvalidConfig(format!("bad code point {part:?}")))?;
        let cp = u32::from_str_radix(hex, 16)
            .ok()
            .and_then(char::from_u32)
            .ok_or_else(|| Error::InvalidConfig(format!("bad code point {part:?}")))?;
        out.push(cp);
    }
    Ok(out)
}

/// Parses a whitespace-separated mark list as given on the command line.
pub fn parse_mark_list(list: &str) -> Result<BTreeSet<String>> {
    let mut out = BTreeSet::new();
    for item in list.split_whitespace() {
        out.insert(parse_mark(item)?);
    }
    Ok(out)
}

fn parse_marks(items: Vec<String>) -> Result<BTreeSet<String>> {
    items.iter().map(|s| parse_mark(s)).collect()
}

/// Parses an inventory config file (JSON object with optional `base`,
/// `terminators`, `other_marks`, `excluded`, `newline_terminates`). Missing
/// sets are taken from the base inventory (western by default).
pub fn parse_inventory(text: &str) -> Result<PunctuationInventory> {
    let file: InventoryFile = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        message: e.to_string(),
    })?;
    let base = PunctuationInventory::for_language(file.base.unwrap_or(Language::English));
    let terminators = match file.terminators {
        Some(t) => parse_marks(t)?,
        None => base.terminators.clone(),
    };
    let other = match file.other_marks {
        Some(t) => parse_marks(t)?,
        None => base.other_marks.clone(),
    };
    let excluded = match file.excluded {
        Some(t) => parse_marks(t)?,
        None => base.excluded.clone(),
    };
    PunctuationInventory::new(
        terminators,
        other,
        excluded,
        file.newline_terminates.unwrap_or(base.newline_terminates),
    )
}
