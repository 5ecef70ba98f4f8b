//! OEIS b-files: parsing, cached retrieval, and prefix comparison.
//!
//! A b-file is plain text, one `index value` pair per line, with optional
//! `#` comment lines. Retrieval prefers the local cache, then (online) a
//! single HTTP GET from oeis.org stored verbatim in the cache, and finally
//! the fixtures bundled for the sequences this tool cross-checks, so tests
//! and offline runs never touch the network.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use num_bigint::BigInt;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum OeisError {
    #[error("b-file parse error at line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("invalid sequence id {0:?} (expected 'A' followed by 6 digits)")]
    InvalidId(String),
    #[error("fetch of {id} failed and no cache or fixture is available: {detail}")]
    FetchFailed { id: String, detail: String },
    #[error("cache i/o error for {path}: {source}")]
    CacheIo {
        path: PathBuf,
        source: std::io::Error,
    },
}

/// One `index value` line of a b-file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BFileEntry {
    pub index: i64,
    pub value: BigInt,
}

/// Sequence ids with bundled fixtures.
pub const FIXTURE_IDS: [&str; 6] = [
    "A013928", "A360659", "A372306", "A373114", "A373119", "A373178",
];

fn bundled_fixture(id: &str) -> Option<&'static str> {
    match id {
        "A013928" => Some(include_str!("../data/A013928.txt")),
        "A360659" => Some(include_str!("../data/A360659.txt")),
        "A372306" => Some(include_str!("../data/A372306.txt")),
        "A373114" => Some(include_str!("../data/A373114.txt")),
        "A373119" => Some(include_str!("../data/A373119.txt")),
        "A373178" => Some(include_str!("../data/A373178.txt")),
        _ => None,
    }
}

/// Parse b-file text. Comment (`#`) and blank lines are skipped; data lines
/// must be `index value` with strictly increasing indices.
pub fn parse_bfile(text: &str) -> Result<Vec<BFileEntry>, OeisError> {
    let mut entries: Vec<BFileEntry> = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut parts = trimmed.split_whitespace();
        let index_tok = parts.next().expect("nonempty line has a token");
        let value_tok = parts.next().ok_or_else(|| OeisError::Parse {
            line,
            reason: "missing value field".into(),
        })?;
        if parts.next().is_some() {
            return Err(OeisError::Parse {
                line,
                reason: "more than two fields".into(),
            });
        }
        let index: i64 = index_tok.parse().map_err(|e| OeisError::Parse {
            line,
            reason: format!("bad index {index_tok:?}: {e}"),
        })?;
        let value: BigInt = value_tok.parse().map_err(|e| OeisError::Parse {
            line,
            reason: format!("bad value {value_tok:?}: {e}"),
        })?;
        if let Some(last) = entries.last() {
            if index <= last.index {
                return Err(OeisError::Parse {
                    line,
                    reason: format!("index {index} not above previous {}", last.index),
                });
            }
        }
        entries.push(BFileEntry { index, value });
    }
    Ok(entries)
}

/// Render entries back to b-file data lines.
pub fn serialize_bfile(entries: &[BFileEntry]) -> String {
    let mut out = String::new();
    for e in entries {
        out.push_str(&format!("{} {}\n", e.index, e.value));
    }
    out
}

/// Cache directory: `SQPROD_CACHE_DIR` if set, else `.sqprod-cache` in the
/// working directory.
pub fn default_cache_dir() -> PathBuf {
    match std::env::var_os("SQPROD_CACHE_DIR") {
        Some(dir) if !dir.is_empty() => PathBuf::from(dir),
        _ => PathBuf::from(".sqprod-cache"),
    }
}

fn validate_id(id: &str) -> Result<(), OeisError> {
    let ok = id.len() == 7
        && id.starts_with('A')
        && id[1..].chars().all(|c| c.is_ascii_digit());
    if ok {
        Ok(())
    } else {
        Err(OeisError::InvalidId(id.to_string()))
    }
}

fn cache_path(cache_dir: &Path, id: &str) -> PathBuf {
    cache_dir.join(format!("{id}.txt"))
}

/// Fetch the b-file of `id`.
///
/// Cache hits are served verbatim. On a miss, online mode performs one HTTP
/// GET and stores the raw bytes atomically (temp file + rename) with a
/// sidecar fetch timestamp; offline mode, or a failed download, falls back
/// to the bundled fixture if one exists.
pub fn fetch_sequence(
    id: &str,
    cache_dir: &Path,
    offline: bool,
) -> Result<Vec<BFileEntry>, OeisError> {
    validate_id(id)?;
    let path = cache_path(cache_dir, id);
    if path.is_file() {
        let text = fs::read_to_string(&path).map_err(|source| OeisError::CacheIo {
            path: path.clone(),
            source,
        })?;
        return parse_bfile(&text);
    }

    let mut detail = String::from("offline mode");
    if !offline {
        match download_bfile(id) {
            Ok(bytes) => {
                let text = String::from_utf8_lossy(&bytes).into_owned();
                let entries = parse_bfile(&text)?;
                write_cache_atomically(cache_dir, id, &bytes)?;
                return Ok(entries);
            }
            Err(e) => detail = e,
        }
    }

    match bundled_fixture(id) {
        Some(text) => parse_bfile(text),
        None => Err(OeisError::FetchFailed {
            id: id.to_string(),
            detail,
        }),
    }
}

fn download_bfile(id: &str) -> Result<Vec<u8>, String> {
    let url = format!("https://oeis.org/{id}/b{}.txt", &id[1..]);
    let mut response = ureq::get(&url)
        .config()
        .timeout_global(Some(std::time::Duration::from_secs(10)))
        .build()
        .call()
        .map_err(|e| format!("GET {url}: {e}"))?;
    response
        .body_mut()
        .read_to_vec()
        .map_err(|e| format!("read {url}: {e}"))
}

fn write_cache_atomically(cache_dir: &Path, id: &str, bytes: &[u8]) -> Result<(), OeisError> {
    let io_err = |source: std::io::Error| OeisError::CacheIo {
        path: cache_dir.to_path_buf(),
        source,
    };
    fs::create_dir_all(cache_dir).map_err(io_err)?;
    let tmp = cache_dir.join(format!(".{id}.txt.tmp"));
    {
        let mut f = fs::File::create(&tmp).map_err(io_err)?;
        f.write_all(bytes).map_err(io_err)?;
        f.sync_all().map_err(io_err)?;
    }
    fs::rename(&tmp, cache_path(cache_dir, id)).map_err(io_err)?;
    let stamp = cache_dir.join(format!("{id}.fetched-at"));
    let now = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    fs::write(stamp, format!("{now}\n")).map_err(io_err)?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrefixMismatch {
    pub index: i64,
    pub computed: BigInt,
    pub reference: BigInt,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComparisonReport {
    /// Indices <= upto present on both sides.
    pub checked: usize,
    pub matches: usize,
    pub mismatches: Vec<PrefixMismatch>,
}

impl ComparisonReport {
    pub fn all_match(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Compare computed values against a reference at all shared indices <= upto.
pub fn compare_prefix(
    computed: &BTreeMap<i64, BigInt>,
    reference: &[BFileEntry],
    upto: i64,
) -> ComparisonReport {
    let mut checked = 0;
    let mut matches = 0;
    let mut mismatches = Vec::new();
    for entry in reference.iter().filter(|e| e.index <= upto) {
        if let Some(value) = computed.get(&entry.index) {
            checked += 1;
            if *value == entry.value {
                matches += 1;
            } else {
                mismatches.push(PrefixMismatch {
                    index: entry.index,
                    computed: value.clone(),
                    reference: entry.value.clone(),
                });
            }
        }
    }
    ComparisonReport {
        checked,
        matches,
        mismatches,
    }
}
