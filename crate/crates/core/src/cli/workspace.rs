//! Content-addressed artifact store.
//!
//! ```text
//! <root>/objects/<sha256>.json   {"kind": ..., "data": ...}
//! <root>/refs/<name>             hash of the named artifact
//! ```
//!
//! Objects are written in canonical form (sorted keys, pretty printed), so
//! equal artifacts share a hash.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Artifact {
    pub kind: String,
    pub data: Value,
}

impl Artifact {
    pub fn canonical(&self) -> String {
        // serde_json's map is ordered, so this is already key-sorted
        let mut s = serde_json::to_string_pretty(self).expect("artifact serializes");
        s.push('\n');
        s
    }

    pub fn hash(&self) -> String {
        hex::encode(Sha256::digest(self.canonical().as_bytes()))
    }
}

#[derive(Debug, Clone)]
pub struct Workspace {
    root: PathBuf,
}

fn valid_name(name: &str) -> bool {
    !name.is_empty()
        && !name.starts_with('.')
        && name.chars().all(|c| c.is_ascii_alphanumeric() || matches!(c, '.' | '_' | '-'))
}

impl Workspace {
    /// Opens `root`, creating it on first use.
    pub fn open(root: impl Into<PathBuf>) -> Result<Self> {
        let root = root.into();
        fs::create_dir_all(root.join("objects"))?;
        fs::create_dir_all(root.join("refs"))?;
        Ok(Workspace { root })
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    fn object_path(&self, hash: &str) -> PathBuf {
        self.root.join("objects").join(format!("{hash}.json"))
    }

    /// Stores `data` and optionally points `name` at it; returns the hash.
    pub fn put(&self, name: Option<&str>, kind: &str, data: Value) -> Result<String> {
        let art = Artifact { kind: kind.to_string(), data };
        let hash = art.hash();
        let path = self.object_path(&hash);
        if !path.exists() {
            fs::write(&path, art.canonical())?;
        }
        if let Some(n) = name {
            if !valid_name(n) {
                return Err(Error::invalid(format!("bad artifact name `{n}`")));
            }
            fs::write(self.root.join("refs").join(n), format!("{hash}\n"))?;
        }
        Ok(hash)
    }

    /// Resolves a name, a full hash or a unique hash prefix (at least 6
    /// characters), and checks the object against its hash.
    pub fn resolve(&self, reference: &str) -> Result<String> {
        if valid_name(reference) {
            let r = self.root.join("refs").join(reference);
            if r.is_file() {
                return Ok(fs::read_to_string(r)?.trim().to_string());
            }
        }
        if reference.len() >= 6 && reference.chars().all(|c| c.is_ascii_hexdigit()) {
            let mut hits: Vec<String> = self.hashes()?.into_iter().filter(|h| h.starts_with(reference)).collect();
            match hits.len() {
                1 => return Ok(hits.pop().unwrap()),
                0 => {}
                _ => return Err(Error::invalid(format!("hash prefix `{reference}` is ambiguous"))),
            }
        }
        Err(Error::unknown("artifact", reference))
    }

    pub fn get(&self, reference: &str) -> Result<Artifact> {
        let hash = self.resolve(reference)?;
        let text = fs::read_to_string(self.object_path(&hash)).map_err(|_| Error::unknown("artifact", &hash))?;
        let art: Artifact = serde_json::from_str(&text).map_err(|e| Error::invalid(format!("object {hash}: {e}")))?;
        if art.hash() != hash {
            return Err(Error::invalid(format!("object {hash} does not match its hash")));
        }
        Ok(art)
    }

    pub fn hashes(&self) -> Result<Vec<String>> {
        let mut out = Vec::new();
        for entry in fs::read_dir(self.root.join("objects"))? {
            let name = entry?.file_name().to_string_lossy().to_string();
            if let Some(h) = name.strip_suffix(".json") {
                out.push(h.to_string());
            }
        }
        out.sort();
        Ok(out)
    }

    pub fn names(&self) -> Result<BTreeMap<String, String>> {
        let mut out = BTreeMap::new();
        for entry in fs::read_dir(self.root.join("refs"))? {
            let entry = entry?;
            out.insert(entry.file_name().to_string_lossy().to_string(), fs::read_to_string(entry.path())?.trim().to_string());
        }
        Ok(out)
    }

    /// Hashes whose object content no longer matches, and names pointing at
    /// missing objects.
    pub fn check(&self) -> Result<Vec<String>> {
        let mut bad = Vec::new();
        for h in self.hashes()? {
            if self.get(&h).is_err() {
                bad.push(h);
            }
        }
        for (n, h) in self.names()? {
            if !self.object_path(&h).is_file() {
                bad.push(format!("{n} -> {h}"));
            }
        }
        Ok(bad)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn round_trip_and_dedup() {
        let dir = tempfile::tempdir().unwrap();
        let ws = Workspace::open(dir.path()).unwrap();
        let a = ws.put(Some("g"), "graph", json!({"nodes": ["a"], "edges": []})).unwrap();
        let b = ws.put(None, "graph", json!({"edges": [], "nodes": ["a"]})).unwrap();
        assert_eq!(a, b);
        assert_eq!(ws.get("g").unwrap().kind, "graph");
        assert_eq!(ws.get(&a[..8]).unwrap(), ws.get(&a).unwrap());
        assert!(ws.check().unwrap().is_empty());
        assert!(matches!(ws.get("nope"), Err(Error::Unknown { .. })));
    }

    #[test]
    fn tampering_detected() {
        let dir = tempfile::tempdir().unwrap();
        let ws = Workspace::open(dir.path()).unwrap();
        let h = ws.put(Some("x"), "graph", json!({"nodes": [], "edges": []})).unwrap();
        fs::write(ws.object_path(&h), r#"{"kind": "graph", "data": {"nodes": ["z"], "edges": []}}"#).unwrap();
        assert!(ws.get("x").is_err());
        assert_eq!(ws.check().unwrap(), vec![h]);
    }
}
