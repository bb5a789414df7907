//! Persistent volume table.
//!
//! ```json
//! {"version": 1, "entries": {"1,1": {"num": "1", "den": "135", "pi_exp": 4}}}
//! ```
//!
//! Keys are positive degrees in decreasing order. Entries are checked on load:
//! each must be a positive multiple of `π^{2g}` for the genus its key implies.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use strata_core::volumes::{key_of, preload_volume, volume_table_snapshot};
use strata_core::{BigRational, PiValue};

use crate::CliError;

pub const CACHE_VERSION: u32 = 1;
pub const CACHE_ENV: &str = "MV_CACHE";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheEntry {
    pub num: String,
    pub den: String,
    pub pi_exp: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheFile {
    pub version: u32,
    pub entries: BTreeMap<String, CacheEntry>,
}

impl CacheFile {
    pub fn from_table(table: &[(Vec<u32>, PiValue)]) -> Self {
        let entries = table
            .iter()
            .filter_map(|(k, v)| {
                let (q, e) = v.as_monomial()?;
                Some((
                    key_of(k),
                    CacheEntry {
                        num: q.numer().to_string(),
                        den: q.denom().to_string(),
                        pi_exp: e,
                    },
                ))
            })
            .collect();
        Self {
            version: CACHE_VERSION,
            entries,
        }
    }

    /// Pushes every entry into the in-process volume table.
    pub fn install(&self) -> Result<(), CliError> {
        if self.version != CACHE_VERSION {
            return Err(CliError::Cache(format!(
                "unsupported version {} (expected {CACHE_VERSION})",
                self.version
            )));
        }
        for (key, entry) in &self.entries {
            let degrees = parse_key(key)?;
            let num: BigInt = entry
                .num
                .parse()
                .map_err(|_| CliError::Cache(format!("bad numerator for `{key}`")))?;
            let den: BigInt = entry
                .den
                .parse()
                .map_err(|_| CliError::Cache(format!("bad denominator for `{key}`")))?;
            if den == BigInt::from(0) {
                return Err(CliError::Cache(format!("zero denominator for `{key}`")));
            }
            let value = PiValue::monomial(BigRational::new(num, den), entry.pi_exp);
            preload_volume(&degrees, value).map_err(|e| CliError::Cache(e.to_string()))?;
        }
        Ok(())
    }
}

fn parse_key(key: &str) -> Result<Vec<u32>, CliError> {
    if key.is_empty() {
        return Ok(Vec::new());
    }
    let mut degrees = key
        .split(',')
        .map(|t| t.parse::<u32>().ok().filter(|&d| d > 0))
        .collect::<Option<Vec<u32>>>()
        .ok_or_else(|| CliError::Cache(format!("malformed key `{key}`")))?;
    degrees.sort_unstable_by(|a, b| b.cmp(a));
    if key_of(&degrees) != key {
        return Err(CliError::Cache(format!(
            "key `{key}` is not in canonical order"
        )));
    }
    Ok(degrees)
}

/// `MV_CACHE` wins over `--cache`; with neither there is no persistence.
pub fn resolve_path(flag: Option<PathBuf>) -> Option<PathBuf> {
    std::env::var_os(CACHE_ENV)
        .filter(|v| !v.is_empty())
        .map(PathBuf::from)
        .or(flag)
}

/// Loads `path` into the volume table. A missing file is an empty cache.
pub fn load(path: &Path) -> Result<(), CliError> {
    let text = match fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(()),
        Err(e) => return Err(CliError::Cache(format!("{}: {e}", path.display()))),
    };
    let file: CacheFile = serde_json::from_str(&text)
        .map_err(|e| CliError::Cache(format!("{}: {e}", path.display())))?;
    file.install()
}

/// Writes the current volume table to `path` through a temporary sibling file.
pub fn save(path: &Path) -> Result<(), CliError> {
    let file = CacheFile::from_table(&volume_table_snapshot());
    let mut text = serde_json::to_string_pretty(&file).expect("cache serializes");
    text.push('\n');
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, text)
        .and_then(|_| fs::rename(&tmp, path))
        .map_err(|e| CliError::Cache(format!("{}: {e}", path.display())))
}
