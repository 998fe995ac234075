//! On-disk cache of brute-force table columns, one JSON file per `n`.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};
use strong132::enumerate::{brute_column, ClassTable, Column, Options};

/// Bumped whenever the file layout or the meaning of a column changes.
pub const FORMAT_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct Entry {
    format_version: u32,
    column: Column,
}

pub fn column_path(dir: &Path, n: usize) -> PathBuf {
    dir.join(format!("column-{n:03}.json"))
}

/// The cached column, or `None` if absent, unreadable, stale or malformed.
fn load(dir: &Path, n: usize) -> Option<Column> {
    let text = fs::read_to_string(column_path(dir, n)).ok()?;
    let entry: Entry = serde_json::from_str(&text).ok()?;
    let ok = entry.format_version == FORMAT_VERSION
        && entry.column.n == n
        && entry.column.counts.len() == n;
    ok.then_some(entry.column)
}

fn store(dir: &Path, column: &Column) -> Result<()> {
    fs::create_dir_all(dir)
        .with_context(|| format!("creating cache directory {}", dir.display()))?;
    let entry = Entry {
        format_version: FORMAT_VERSION,
        column: column.clone(),
    };
    let path = column_path(dir, column.n);
    // write then rename, so readers never see a partial file
    let tmp = dir.join(format!(
        ".column-{:03}.{}.tmp",
        column.n,
        std::process::id()
    ));
    let text = serde_json::to_string_pretty(&entry)? + "\n";
    fs::write(&tmp, text).with_context(|| format!("writing {}", tmp.display()))?;
    fs::rename(&tmp, &path).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

/// Builds the table for `1..=n_max`, reading and filling the cache when a
/// directory is given.
pub fn table(n_max: usize, opts: &Options, dir: Option<&Path>) -> Result<ClassTable> {
    let mut columns = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let cached = dir.and_then(|d| load(d, n));
        let column = match cached {
            Some(c) => c,
            None => {
                let c = brute_column(n, opts)?;
                if let Some(d) = dir {
                    store(d, &c)?;
                }
                c
            }
        };
        columns.push(column);
    }
    Ok(ClassTable::from_columns(columns)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stale_and_corrupt_entries_are_recomputed() {
        let dir = tempfile::tempdir().unwrap();
        let opts = Options::default();
        let fresh = table(6, &opts, None).unwrap();
        assert_eq!(table(6, &opts, Some(dir.path())).unwrap(), fresh);
        assert!(load(dir.path(), 6).is_some());

        fs::write(column_path(dir.path(), 5), "{not json").unwrap();
        let stale = r#"{"format_version": 0, "column": {"n": 4, "counts": [9, 9, 9, 9]}}"#;
        fs::write(column_path(dir.path(), 4), stale).unwrap();
        assert!(load(dir.path(), 4).is_none());
        assert!(load(dir.path(), 5).is_none());
        assert_eq!(table(6, &opts, Some(dir.path())).unwrap(), fresh);
        assert!(load(dir.path(), 4).is_some());
    }

    #[test]
    fn mislabelled_entry_is_ignored() {
        let dir = tempfile::tempdir().unwrap();
        let wrong = r#"{"format_version": 1, "column": {"n": 2, "counts": [1, 1]}}"#;
        fs::write(column_path(dir.path(), 3), wrong).unwrap();
        assert!(load(dir.path(), 3).is_none());
    }
}
