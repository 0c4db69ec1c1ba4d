use std::fs;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use super::{ground_truth, GroundTruth};
use crate::cop::{write_instance, CopInstance};
use crate::error::{Error, Result};

/// SHA-256 of the instance's canonical text form, hex encoded.
pub fn content_hash(inst: &CopInstance) -> String {
    let digest = Sha256::digest(write_instance(inst).as_bytes());
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

/// Ground truths stored as `<dir>/<content hash>.json`.
#[derive(Debug, Clone)]
pub struct GroundTruthCache {
    dir: PathBuf,
}

impl GroundTruthCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Self { dir: dir.into() }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path_for(&self, inst: &CopInstance) -> PathBuf {
        self.dir.join(format!("{}.json", content_hash(inst)))
    }

    pub fn get(&self, inst: &CopInstance) -> Result<Option<GroundTruth>> {
        let path = self.path_for(inst);
        if !path.exists() {
            return Ok(None);
        }
        let text = fs::read_to_string(&path)?;
        serde_json::from_str(&text)
            .map(Some)
            .map_err(|e| Error::Format(format!("{}: {e}", path.display())))
    }

    /// Cached value if present, else an exhaustive scan whose result is stored.
    pub fn load_or_compute(&self, inst: &CopInstance) -> Result<GroundTruth> {
        if let Some(t) = self.get(inst)? {
            return Ok(t);
        }
        let truth = ground_truth(inst)?;
        fs::create_dir_all(&self.dir)?;
        let text = serde_json::to_string_pretty(&truth).map_err(|e| Error::Format(e.to_string()))?;
        fs::write(self.path_for(inst), text)?;
        Ok(truth)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cop::mkcs_benchmark_instance;

    #[test]
    fn hash_is_content_based() {
        let a = mkcs_benchmark_instance();
        assert_eq!(content_hash(&a), content_hash(&a.clone()));
        assert_eq!(content_hash(&a).len(), 64);
        let b = a.delete_variable(0).unwrap();
        assert_ne!(content_hash(&a), content_hash(&b));
    }

    #[test]
    fn round_trip_through_disk() {
        let dir = tempfile::tempdir().unwrap();
        let cache = GroundTruthCache::new(dir.path().join("truth"));
        let inst = mkcs_benchmark_instance();
        assert!(cache.get(&inst).unwrap().is_none());
        let first = cache.load_or_compute(&inst).unwrap();
        assert!(cache.path_for(&inst).exists());
        assert_eq!(cache.get(&inst).unwrap(), Some(first));
    }
}
