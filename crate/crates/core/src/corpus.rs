//! Text ingestion and corpus manifests.
//!
//! Documents are read whole, decoded as UTF-8, stripped of a leading
//! byte-order mark, given `\n` line endings and put in canonical
//! composition (NFC). Manifests are JSON Lines, one entry per line.

use std::collections::HashSet;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use unicode_normalization::UnicodeNormalization;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Language {
    #[serde(alias = "zh")]
    Chinese,
    #[serde(alias = "en")]
    English,
    Other,
}

impl fmt::Display for Language {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Language::Chinese => "chinese",
            Language::English => "english",
            Language::Other => "other",
        })
    }
}

impl FromStr for Language {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "chinese" | "zh" => Ok(Language::Chinese),
            "english" | "en" => Ok(Language::English),
            "other" => Ok(Language::Other),
            _ => Err(Error::InvalidConfig(format!("unknown language {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TextDocument {
    pub id: String,
    pub language: Language,
    /// Normalized text, never empty.
    pub raw: String,
    pub source_path: PathBuf,
    pub collection: Option<String>,
    /// Content is whitespace-delimited tokens produced by an external segmenter.
    pub pre_segmented: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManifestEntry {
    pub id: String,
    pub path: PathBuf,
    pub language: Language,
    #[serde(default)]
    pub collection: Option<String>,
    #[serde(default)]
    pub pre_segmented: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Manifest {
    pub entries: Vec<ManifestEntry>,
}

impl Manifest {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Loads every document in manifest order.
    pub fn load_documents(&self) -> Result<Vec<TextDocument>> {
        self.entries
            .iter()
            .map(|e| {
                let mut doc = load_document(&e.path, e.language, e.pre_segmented)?;
                doc.id = e.id.clone();
                doc.collection = e.collection.clone();
                Ok(doc)
            })
            .collect()
    }
}

/// Strips leading BOMs, converts CRLF and lone CR to LF and applies NFC.
pub fn normalize_text(text: &str) -> String {
    let text = text.trim_start_matches('\u{feff}');
    let mut unified = String::with_capacity(text.len());
    let mut chars = text.chars().peekable();
    while let Some(c) = chars.next() {
        if c == '\r' {
            if chars.peek() == Some(&'\n') {
                chars.next();
            }
            unified.push('\n');
        } else {
            unified.push(c);
        }
    }
    unified.nfc().collect()
}

/// Decodes raw bytes into a normalized document. `path` is used for the id
/// and for error messages only.
pub fn decode_document(
    path: &Path,
    bytes: &[u8],
    language: Language,
    pre_segmented: bool,
) -> Result<TextDocument> {
    let text = std::str::from_utf8(bytes).map_err(|e| Error::Encoding {
        path: path.to_path_buf(),
        offset: e.valid_up_to(),
    })?;
    let raw = normalize_text(text);
    let id = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    if raw.trim().is_empty() {
        return Err(Error::EmptyDocument(id));
    }
    Ok(TextDocument {
        id,
        language,
        raw,
        source_path: path.to_path_buf(),
        collection: None,
        pre_segmented,
    })
}

pub fn load_document(
    path: impl AsRef<Path>,
    language: Language,
    pre_segmented: bool,
) -> Result<TextDocument> {
    let path = path.as_ref();
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    decode_document(path, &bytes, language, pre_segmented)
}

/// Parses manifest text. Relative paths are resolved against `base_dir`.
/// Blank lines and lines starting with `#` are skipped. File existence is
/// not checked here.
pub fn parse_manifest(text: &str, base_dir: &Path) -> Result<Manifest> {
    let mut entries = Vec::new();
    let mut seen = HashSet::new();
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut entry: ManifestEntry = serde_json::from_str(line).map_err(|e| Error::Parse {
            line: idx + 1,
            message: e.to_string(),
        })?;
        if entry.id.is_empty() {
            return Err(Error::Parse {
                line: idx + 1,
                message: "empty id".into(),
            });
        }
        if !seen.insert(entry.id.clone()) {
            return Err(Error::DuplicateId(entry.id));
        }
        if entry.path.is_relative() {
            entry.path = base_dir.join(&entry.path);
        }
        entries.push(entry);
    }
    Ok(Manifest { entries })
}

/// Reads and parses a manifest, then checks every referenced file is readable.
pub fn load_manifest(path: impl AsRef<Path>) -> Result<Manifest> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let base = path.parent().unwrap_or_else(|| Path::new("."));
    let manifest = parse_manifest(&text, base)?;
    for entry in &manifest.entries {
        std::fs::File::open(&entry.path).map_err(|e| Error::io(&entry.path, e))?;
    }
    Ok(manifest)
}
