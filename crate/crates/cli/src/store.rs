//! Append-only JSON Lines store of computed constants.

use std::collections::BTreeMap;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use davenport_core::solver::ValueField;
use davenport_core::{ConstantKind, ResultSummary};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ResultKey {
    pub group: String,
    pub weights: String,
    pub kind: ConstantKind,
}

impl std::fmt::Display for ResultKey {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let symbol = match self.kind {
            ConstantKind::Consecutive => "C",
            ConstantKind::Davenport => "D",
        };
        write!(f, "{symbol}_{}({})", self.weights, self.group)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub key: ResultKey,
    pub result: ResultSummary,
    pub tool_version: String,
    pub timestamp: u64,
}

impl ResultRecord {
    pub fn new(result: ResultSummary) -> Self {
        let key = ResultKey {
            group: result.group.clone(),
            weights: result.weights.clone(),
            kind: result.kind,
        };
        let timestamp = SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs());
        ResultRecord {
            key,
            result,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp,
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum StoreError {
    #[error("result store {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("conflicting conclusive values for {key}: stored {stored}, got {found}")]
    Conflict { key: ResultKey, stored: String, found: String },
}

fn value_text(v: &ValueField) -> String {
    match v {
        ValueField::Number(n) => n.to_string(),
        ValueField::Text(t) => t.clone(),
    }
}

#[derive(Debug)]
pub struct ResultStore {
    path: PathBuf,
    index: BTreeMap<ResultKey, ResultRecord>,
    skipped: usize,
}

impl ResultStore {
    /// Loads the index from `path`; a missing file is an empty store. Lines that
    /// do not parse are skipped and counted.
    pub fn open(path: impl AsRef<Path>) -> Result<Self, StoreError> {
        let path = path.as_ref().to_path_buf();
        let mut store = ResultStore {
            path: path.clone(),
            index: BTreeMap::new(),
            skipped: 0,
        };
        let file = match File::open(&path) {
            Ok(f) => f,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(store),
            Err(source) => return Err(StoreError::Io { path, source }),
        };
        for line in BufReader::new(file).lines() {
            let line = line.map_err(|source| StoreError::Io { path: path.clone(), source })?;
            if line.trim().is_empty() {
                continue;
            }
            match serde_json::from_str::<ResultRecord>(&line) {
                Ok(record) => {
                    store.admit(record)?;
                }
                Err(_) => store.skipped += 1,
            }
        }
        Ok(store)
    }

    fn admit(&mut self, record: ResultRecord) -> Result<bool, StoreError> {
        if let Some(old) = self.index.get(&record.key) {
            if old.result.conclusive && record.result.conclusive && old.result.value != record.result.value {
                return Err(StoreError::Conflict {
                    key: record.key,
                    stored: value_text(&old.result.value),
                    found: value_text(&record.result.value),
                });
            }
            if old.result.conclusive || !record.result.conclusive {
                return Ok(false);
            }
        }
        self.index.insert(record.key.clone(), record);
        Ok(true)
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    /// Number of corrupt lines skipped while loading.
    pub fn skipped(&self) -> usize {
        self.skipped
    }

    pub fn len(&self) -> usize {
        self.index.len()
    }

    pub fn is_empty(&self) -> bool {
        self.index.is_empty()
    }

    pub fn get(&self, key: &ResultKey) -> Option<&ResultRecord> {
        self.index.get(key)
    }

    pub fn records(&self) -> impl Iterator<Item = &ResultRecord> {
        self.index.values()
    }

    /// Appends `record` unless an equal or better record is already indexed.
    pub fn insert(&mut self, record: ResultRecord) -> Result<(), StoreError> {
        let line = serde_json::to_string(&record).expect("records serialize");
        if !self.admit(record)? {
            return Ok(());
        }
        let io = |source| StoreError::Io { path: self.path.clone(), source };
        let mut file = OpenOptions::new().create(true).append(true).open(&self.path).map_err(io)?;
        writeln!(file, "{line}").map_err(|source| StoreError::Io { path: self.path.clone(), source })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn summary(group: &str, value: u64, conclusive: bool) -> ResultSummary {
        ResultSummary {
            kind: ConstantKind::Consecutive,
            group: group.into(),
            weights: "{1}".into(),
            value: ValueField::Number(value),
            witness: None,
            states_explored: 1,
            elapsed_ms: 0,
            conclusive,
            note: None,
        }
    }

    #[test]
    fn round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("r.jsonl");
        let rec = ResultRecord::new(summary("C5", 5, true));
        let mut store = ResultStore::open(&path).unwrap();
        assert!(store.is_empty());
        store.insert(rec.clone()).unwrap();
        let back = ResultStore::open(&path).unwrap();
        assert_eq!(back.get(&rec.key), Some(&rec));
        assert_eq!(back.len(), 1);
    }

    #[test]
    fn conflicting_values_are_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("r.jsonl");
        let mut store = ResultStore::open(&path).unwrap();
        store.insert(ResultRecord::new(summary("C5", 5, true))).unwrap();
        let err = store.insert(ResultRecord::new(summary("C5", 4, true))).unwrap_err();
        assert!(matches!(err, StoreError::Conflict { .. }));

        let a = serde_json::to_string(&ResultRecord::new(summary("C5", 5, true))).unwrap();
        let b = serde_json::to_string(&ResultRecord::new(summary("C5", 4, true))).unwrap();
        std::fs::write(&path, format!("{a}\n{b}\n")).unwrap();
        assert!(matches!(ResultStore::open(&path), Err(StoreError::Conflict { .. })));
    }

    #[test]
    fn corrupt_lines_are_counted() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("r.jsonl");
        let good = serde_json::to_string(&ResultRecord::new(summary("C3", 3, true))).unwrap();
        std::fs::write(&path, format!("{{not json\n{good}\n\n{{\"key\":1}}\n")).unwrap();
        let store = ResultStore::open(&path).unwrap();
        assert_eq!((store.len(), store.skipped()), (1, 2));
    }

    #[test]
    fn empty_file_is_empty_index() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("r.jsonl");
        std::fs::write(&path, "").unwrap();
        let store = ResultStore::open(&path).unwrap();
        assert_eq!((store.len(), store.skipped()), (0, 0));
    }

    #[test]
    fn inconclusive_is_replaced_by_conclusive() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("r.jsonl");
        let mut store = ResultStore::open(&path).unwrap();
        store.insert(ResultRecord::new(summary("C7", 3, false))).unwrap();
        store.insert(ResultRecord::new(summary("C7", 7, true))).unwrap();
        let key = ResultRecord::new(summary("C7", 7, true)).key;
        assert!(ResultStore::open(&path).unwrap().get(&key).unwrap().result.conclusive);
    }
}
