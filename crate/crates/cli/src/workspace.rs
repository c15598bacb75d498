//! Workspace directory: configuration, advisory lock and cached artifacts.
//!
//! Every artifact `x` has a sidecar `x.meta.json` recording the hash of the
//! configuration keys it depends on, a hash of its inputs, and the SHA-256
//! of its own bytes. An artifact is reused only when all three still match.
//! The sidecar also lists the upstream artifacts it was derived from, so a
//! consumer notices when one of them has since been rebuilt.

use std::collections::BTreeMap;
use std::fs::{self, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use tcsim_core::config::Config;

use crate::error::{CliError, Result};

/// Configuration file picked up from the workspace when `--config` is absent.
pub const WORKSPACE_CONFIG: &str = "tcsim.conf";
const LOCK_FILE: &str = ".lock";

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Meta {
    pub config_hash: String,
    pub inputs_hash: String,
    pub sha256: String,
    /// Workspace-relative path to SHA-256 of each upstream artifact.
    #[serde(default)]
    pub upstream: BTreeMap<String, String>,
}

/// What an artifact was built from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Key {
    pub config_hash: String,
    pub inputs_hash: String,
}

impl Key {
    pub fn new(config_hash: String, inputs: &[&str]) -> Self {
        Self {
            config_hash,
            inputs_hash: sha256_hex(inputs.join("\u{0}").as_bytes()),
        }
    }
}

/// A verified artifact read back from the workspace.
pub struct Artifact {
    pub rel: String,
    pub bytes: Vec<u8>,
    pub sha256: String,
}

impl Artifact {
    pub fn text(&self) -> Result<&str> {
        std::str::from_utf8(&self.bytes).map_err(|_| CliError::Usage("artifact is not UTF-8 text".into()))
    }
}

struct Lock(PathBuf);

impl Drop for Lock {
    fn drop(&mut self) {
        let _ = fs::remove_file(&self.0);
    }
}

pub struct Workspace {
    root: PathBuf,
    pub config: Config,
    _lock: Lock,
}

fn meta_path(path: &Path) -> PathBuf {
    let mut name = path.as_os_str().to_owned();
    name.push(".meta.json");
    PathBuf::from(name)
}

pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    }
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    fs::write(&tmp, bytes).map_err(|e| CliError::io(&tmp, e))?;
    fs::rename(&tmp, path).map_err(|e| CliError::io(path, e))
}

impl Workspace {
    /// Creates the directory if needed, takes the lock, and resolves the
    /// configuration: `--config`, else the workspace's `tcsim.conf`, else the
    /// built-in defaults. `seed` overrides the configured seed.
    pub fn open(root: &Path, config: Option<&Path>, seed: Option<u64>) -> Result<Self> {
        fs::create_dir_all(root).map_err(|e| CliError::io(root, e))?;
        let lock_path = root.join(LOCK_FILE);
        let mut file = match OpenOptions::new().write(true).create_new(true).open(&lock_path) {
            Ok(f) => f,
            Err(e) if e.kind() == std::io::ErrorKind::AlreadyExists => return Err(CliError::Locked(root.to_path_buf())),
            Err(e) => return Err(CliError::io(&lock_path, e)),
        };
        let lock = Lock(lock_path);
        let _ = writeln!(file, "{}", std::process::id());

        let local = root.join(WORKSPACE_CONFIG);
        let mut cfg = match config {
            Some(path) => Config::load(path)?,
            None if local.is_file() => Config::load(&local)?,
            None => Config::default(),
        };
        if let Some(seed) = seed {
            cfg.seed = seed;
        }
        Ok(Self {
            root: root.to_path_buf(),
            config: cfg,
            _lock: lock,
        })
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn path(&self, rel: &str) -> PathBuf {
        self.root.join(rel)
    }

    /// Hash of the canonical configuration lines whose key starts with one
    /// of `prefixes`.
    pub fn config_hash(&self, prefixes: &[&str]) -> String {
        let text = self.config.to_text();
        let relevant: Vec<&str> = text
            .lines()
            .filter(|l| prefixes.iter().any(|p| l.starts_with(p)))
            .collect();
        sha256_hex(relevant.join("\n").as_bytes())
    }

    fn read_meta(&self, rel: &str) -> Result<Option<Meta>> {
        let path = meta_path(&self.path(rel));
        let Ok(text) = fs::read_to_string(&path) else {
            return Ok(None);
        };
        serde_json::from_str(&text).map(Some).map_err(|source| CliError::Json { path, source })
    }

    /// The artifact, if its bytes still hash to the recorded value.
    fn verified(&self, rel: &str) -> Result<Option<(Artifact, Meta)>> {
        let Some(meta) = self.read_meta(rel)? else {
            return Ok(None);
        };
        let Ok(bytes) = fs::read(self.path(rel)) else {
            return Ok(None);
        };
        let sha256 = sha256_hex(&bytes);
        if sha256 != meta.sha256 {
            return Ok(None);
        }
        Ok(Some((
            Artifact {
                rel: rel.to_string(),
                bytes,
                sha256,
            },
            meta,
        )))
    }

    /// A cached artifact built under exactly `key`.
    pub fn lookup(&self, rel: &str, key: &Key) -> Result<Option<Artifact>> {
        Ok(self
            .verified(rel)?
            .filter(|(_, m)| m.config_hash == key.config_hash && m.inputs_hash == key.inputs_hash)
            .map(|(a, _)| a))
    }

    /// An upstream artifact, which must exist, match the current
    /// configuration for `prefixes`, and still agree with its own upstreams.
    pub fn require(&self, rel: &str, prefixes: &[&str], hint: &str) -> Result<Artifact> {
        let (artifact, meta) = self.verified(rel)?.ok_or_else(|| CliError::missing(rel, hint))?;
        let mut fresh = meta.config_hash == self.config_hash(prefixes);
        for (up, sha) in &meta.upstream {
            fresh &= self.read_meta(up)?.is_some_and(|m| &m.sha256 == sha);
        }
        if !fresh {
            return Err(CliError::Stale {
                what: rel.to_string(),
                hint: hint.to_string(),
            });
        }
        Ok(artifact)
    }

    pub fn exists(&self, rel: &str) -> bool {
        self.path(rel).is_file()
    }

    pub fn store(&self, rel: &str, bytes: &[u8], key: &Key, upstream: &[&Artifact]) -> Result<Artifact> {
        let path = self.path(rel);
        write_atomic(&path, bytes)?;
        let meta = Meta {
            config_hash: key.config_hash.clone(),
            inputs_hash: key.inputs_hash.clone(),
            sha256: sha256_hex(bytes),
            upstream: upstream.iter().map(|a| (a.rel.clone(), a.sha256.clone())).collect(),
        };
        let json = serde_json::to_string_pretty(&meta).expect("meta serializes") + "\n";
        write_atomic(&meta_path(&path), json.as_bytes())?;
        Ok(Artifact {
            rel: rel.to_string(),
            bytes: bytes.to_vec(),
            sha256: meta.sha256,
        })
    }

    /// Plain file next to the artifacts, without a sidecar.
    pub fn write_plain(&self, rel: &str, bytes: &[u8]) -> Result<PathBuf> {
        let path = self.path(rel);
        write_atomic(&path, bytes)?;
        Ok(path)
    }

    pub fn read_plain(&self, rel: &str) -> Option<String> {
        fs::read_to_string(self.path(rel)).ok()
    }
}
