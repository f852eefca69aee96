//! Persistent IRI to entity id cache with an embedded resume checkpoint.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use owlbase_model::EntityId;
use owlbase_rdf::Iri;
use serde::{Deserialize, Serialize};

use crate::error::EngineError;

/// Position of an ingestion run, coarse enough to survive crashes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Stage {
    Classes,
    Shells,
    Claims,
    Qa,
    Done,
}

impl Stage {
    pub fn name(self) -> &'static str {
        match self {
            Stage::Classes => "classes",
            Stage::Shells => "shells",
            Stage::Claims => "claims",
            Stage::Qa => "qa",
            Stage::Done => "done",
        }
    }
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Checkpoint {
    pub stage: Stage,
    pub cursor: usize,
}

impl Checkpoint {
    pub fn start() -> Checkpoint {
        Checkpoint { stage: Stage::Classes, cursor: 0 }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CacheEntry {
    pub id: EntityId,
    /// RFC 3339 timestamp recorded when the mapping was first cached.
    pub created_at: String,
}

/// Maps source IRIs to the entity ids realizing them. Flushed to disk
/// after every successful creation so an interrupted run can resume
/// without creating duplicates.
#[derive(Debug)]
pub struct LocalCache {
    path: PathBuf,
    entries: BTreeMap<Iri, CacheEntry>,
    used_ids: BTreeSet<EntityId>,
    checkpoint: Checkpoint,
    dirty: bool,
}

#[derive(Serialize, Deserialize)]
struct DiskEntry {
    id: EntityId,
    created_at: String,
}

#[derive(Serialize, Deserialize)]
struct DiskCache {
    entries: BTreeMap<String, DiskEntry>,
    #[serde(default = "default_stage")]
    stage: Stage,
    #[serde(default)]
    cursor: usize,
}

fn default_stage() -> Stage {
    Stage::Classes
}

impl LocalCache {
    /// An empty cache that will be written to `path` on the first save.
    pub fn new(path: impl Into<PathBuf>) -> LocalCache {
        LocalCache {
            path: path.into(),
            entries: BTreeMap::new(),
            used_ids: BTreeSet::new(),
            checkpoint: Checkpoint::start(),
            dirty: false,
        }
    }

    /// Load from disk; a missing file yields an empty cache.
    pub fn load(path: impl Into<PathBuf>) -> Result<LocalCache, EngineError> {
        let path = path.into();
        if !path.exists() {
            return Ok(LocalCache::new(path));
        }
        let text = fs::read_to_string(&path)
            .map_err(|e| EngineError::Cache(format!("read {}: {e}", path.display())))?;
        let disk: DiskCache = serde_json::from_str(&text)
            .map_err(|e| EngineError::Cache(format!("parse {}: {e}", path.display())))?;

        let mut entries = BTreeMap::new();
        let mut used_ids = BTreeSet::new();
        for (raw_iri, entry) in disk.entries {
            let iri = Iri::new(raw_iri)
                .map_err(|e| EngineError::Cache(format!("invalid cached IRI: {e}")))?;
            if !used_ids.insert(entry.id) {
                return Err(EngineError::Cache(format!(
                    "cache is not injective: {} appears twice",
                    entry.id
                )));
            }
            entries.insert(iri, CacheEntry { id: entry.id, created_at: entry.created_at });
        }
        Ok(LocalCache {
            path,
            entries,
            used_ids,
            checkpoint: Checkpoint { stage: disk.stage, cursor: disk.cursor },
            dirty: false,
        })
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn get(&self, iri: &Iri) -> Option<EntityId> {
        self.entries.get(iri).map(|e| e.id)
    }

    pub fn entry(&self, iri: &Iri) -> Option<&CacheEntry> {
        self.entries.get(iri)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Iri, &CacheEntry)> {
        self.entries.iter()
    }

    pub fn ids(&self) -> impl Iterator<Item = EntityId> + '_ {
        self.used_ids.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn is_dirty(&self) -> bool {
        self.dirty
    }

    pub fn checkpoint(&self) -> Checkpoint {
        self.checkpoint
    }

    pub fn set_checkpoint(&mut self, stage: Stage, cursor: usize) {
        if self.checkpoint.stage != stage || self.checkpoint.cursor != cursor {
            self.checkpoint = Checkpoint { stage, cursor };
            self.dirty = true;
        }
    }

    /// Record a mapping. Re-inserting the same pair is a no-op; mapping
    /// one IRI to two ids, or one id to two IRIs, is rejected.
    pub fn insert(&mut self, iri: Iri, id: EntityId) -> Result<(), EngineError> {
        if let Some(existing) = self.entries.get(&iri) {
            if existing.id == id {
                return Ok(());
            }
            return Err(EngineError::Cache(format!(
                "{} is already cached as {}, refusing to remap to {id}",
                iri.as_str(),
                existing.id
            )));
        }
        if !self.used_ids.insert(id) {
            return Err(EngineError::Cache(format!(
                "{id} is already cached for another IRI, cannot also record {}",
                iri.as_str()
            )));
        }
        let created_at = chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true);
        self.entries.insert(iri, CacheEntry { id, created_at });
        self.dirty = true;
        Ok(())
    }

    /// Write the cache atomically: serialize to a sibling temp file and
    /// rename over the target so a crash never leaves a torn file.
    pub fn save(&mut self) -> Result<(), EngineError> {
        let disk = DiskCache {
            entries: self
                .entries
                .iter()
                .map(|(iri, e)| {
                    (
                        iri.as_str().to_string(),
                        DiskEntry { id: e.id, created_at: e.created_at.clone() },
                    )
                })
                .collect(),
            stage: self.checkpoint.stage,
            cursor: self.checkpoint.cursor,
        };
        let text = serde_json::to_string_pretty(&disk)
            .map_err(|e| EngineError::Cache(format!("serialize: {e}")))?;

        let file_name = self
            .path
            .file_name()
            .ok_or_else(|| EngineError::Cache(format!("bad cache path {}", self.path.display())))?;
        let mut tmp_name = file_name.to_os_string();
        tmp_name.push(".tmp");
        let tmp = self.path.with_file_name(tmp_name);

        fs::write(&tmp, text)
            .map_err(|e| EngineError::Cache(format!("write {}: {e}", tmp.display())))?;
        fs::rename(&tmp, &self.path)
            .map_err(|e| EngineError::Cache(format!("rename to {}: {e}", self.path.display())))?;
        self.dirty = false;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iri(s: &str) -> Iri {
        Iri::new(s).unwrap()
    }

    #[test]
    fn missing_file_loads_empty() {
        let dir = tempfile::tempdir().unwrap();
        let cache = LocalCache::load(dir.path().join("cache.json")).unwrap();
        assert!(cache.is_empty());
        assert_eq!(cache.checkpoint(), Checkpoint::start());
    }

    #[test]
    fn round_trip_preserves_entries_and_checkpoint() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cache.json");
        let mut cache = LocalCache::new(&path);
        cache.insert(iri("http://example.org/aero#Fan"), EntityId::new(4)).unwrap();
        cache.insert(iri("http://example.org/aero#Pump"), EntityId::new(7)).unwrap();
        cache.set_checkpoint(Stage::Shells, 12);
        cache.save().unwrap();

        let reloaded = LocalCache::load(&path).unwrap();
        assert_eq!(reloaded.get(&iri("http://example.org/aero#Fan")), Some(EntityId::new(4)));
        assert_eq!(reloaded.get(&iri("http://example.org/aero#Pump")), Some(EntityId::new(7)));
        assert_eq!(reloaded.checkpoint(), Checkpoint { stage: Stage::Shells, cursor: 12 });
        assert_eq!(
            reloaded.entry(&iri("http://example.org/aero#Fan")).unwrap().created_at,
            cache.entry(&iri("http://example.org/aero#Fan")).unwrap().created_at
        );
        assert!(!dir.path().join("cache.json.tmp").exists());
    }

    #[test]
    fn disk_shape_uses_entries_stage_and_cursor_keys() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cache.json");
        let mut cache = LocalCache::new(&path);
        cache.insert(iri("http://example.org/aero#Fan"), EntityId::new(12)).unwrap();
        cache.save().unwrap();

        let value: serde_json::Value =
            serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
        let entry = &value["entries"]["http://example.org/aero#Fan"];
        assert_eq!(entry["id"], "Q12");
        assert!(entry["created_at"].is_string());
        assert_eq!(value["stage"], "classes");
        assert_eq!(value["cursor"], 0);
    }

    #[test]
    fn rejects_two_iris_for_one_id() {
        let mut cache = LocalCache::new("/tmp/never-written.json");
        cache.insert(iri("http://example.org/aero#A"), EntityId::new(1)).unwrap();
        let err = cache.insert(iri("http://example.org/aero#B"), EntityId::new(1)).unwrap_err();
        assert!(err.to_string().contains("Q1"));
    }

    #[test]
    fn rejects_remapping_an_iri() {
        let mut cache = LocalCache::new("/tmp/never-written.json");
        cache.insert(iri("http://example.org/aero#A"), EntityId::new(1)).unwrap();
        cache.insert(iri("http://example.org/aero#A"), EntityId::new(1)).unwrap();
        assert!(cache.insert(iri("http://example.org/aero#A"), EntityId::new(2)).is_err());
    }

    #[test]
    fn load_rejects_non_injective_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cache.json");
        std::fs::write(
            &path,
            r#"{"entries":{"http://a":{"id":"Q1","created_at":"t"},"http://b":{"id":"Q1","created_at":"t"}}}"#,
        )
        .unwrap();
        let err = LocalCache::load(&path).unwrap_err();
        assert!(err.to_string().contains("injective"));
    }

    #[test]
    fn checkpoint_defaults_when_file_has_only_entries() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cache.json");
        std::fs::write(&path, r#"{"entries":{}}"#).unwrap();
        let cache = LocalCache::load(&path).unwrap();
        assert_eq!(cache.checkpoint(), Checkpoint::start());
    }
}
