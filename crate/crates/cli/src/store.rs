//! On-disk cache of knitted AR quivers under `HALLIE_CACHE_DIR`.

use std::fs;
use std::path::PathBuf;

use hallie_core::algebra::AlgebraSpec;
use hallie_core::knit::{ArQuiverData, ArStore};
use sha2::{Digest, Sha256};

pub struct DirStore {
    dir: PathBuf,
    seed: u64,
}

impl DirStore {
    pub fn new(dir: PathBuf, seed: u64) -> Self {
        DirStore { dir, seed }
    }

    /// Keyed by the algebra's content hash, the prime, and the
    /// decomposition seed that fixed the stored irreducible maps.
    fn path(&self, spec: &AlgebraSpec, p: u64) -> PathBuf {
        let doc = serde_json::to_vec(spec.document()).expect("documents serialize");
        let hash = hex::encode(Sha256::digest(&doc));
        self.dir.join(format!("{hash}-p{p}-s{}.json", self.seed))
    }
}

impl ArStore for DirStore {
    fn load(&self, spec: &AlgebraSpec, p: u64) -> Option<ArQuiverData> {
        let text = fs::read_to_string(self.path(spec, p)).ok()?;
        serde_json::from_str(&text).ok()
    }

    /// Best effort: a cache that cannot be written is simply skipped.
    fn save(&self, spec: &AlgebraSpec, p: u64, data: &ArQuiverData) {
        if fs::create_dir_all(&self.dir).is_err() {
            return;
        }
        let path = self.path(spec, p);
        let tmp = path.with_extension("tmp");
        if let Ok(text) = serde_json::to_string(data) {
            if fs::write(&tmp, text).is_ok() {
                let _ = fs::rename(&tmp, &path);
            }
        }
    }
}
