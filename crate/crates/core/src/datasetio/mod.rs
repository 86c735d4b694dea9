//! Corpus manifests, corpus building, model bundles and the manifest-driven
//! training and evaluation used by the command-line tool.
//!
//! Manifests, bundles and reports are pretty-printed JSON with shortest
//! round-trip float formatting, so write, read, write is byte-identical.

mod build;
mod bundle;

use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::glitchgen::GlitchSpec;
use crate::pipeline::{ArtifactGroup, Split, SplitPlan};
use crate::{ArtifactKind, Error, Result};

pub use build::{build_corpus, synth_clean, BuildOptions, SynthOptions};
pub use bundle::{
    created_at_default, evaluate_manifest, load_samples, predict_image, train_from_manifest, ModelBundle,
    TrainOptions, BUNDLE_VERSION,
};

pub const MANIFEST_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Label {
    Normal,
    Corrupted,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Record {
    /// Relative to the manifest's directory, `/`-separated.
    pub path: String,
    pub label: Label,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<ArtifactKind>,
    pub source: String,
    pub split: Split,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spec: Option<GlitchSpec>,
    /// Clean frame the record was made from, relative to the clean corpus root.
    pub frame: String,
    /// Second frame used by tearing.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub aux_frame: Option<String>,
    /// Specialist that owns this split-A normal image.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub partition: Option<ArtifactGroup>,
}

impl Record {
    pub fn is_corrupted(&self) -> bool {
        self.label == Label::Corrupted
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorpusManifest {
    pub version: u32,
    pub corpus_seed: u64,
    pub plan: SplitPlan,
    pub records: Vec<Record>,
}

impl CorpusManifest {
    /// Label, kind and spec agree on every record and the (source, split) pairs
    /// follow the plan.
    pub fn validate(&self) -> Result<()> {
        if self.version != MANIFEST_VERSION {
            return Err(Error::Corpus(format!("unsupported manifest version {}", self.version)));
        }
        for r in &self.records {
            let ok = match (r.label, r.kind, &r.spec) {
                (Label::Normal, None, None) => r.aux_frame.is_none(),
                (Label::Corrupted, Some(k), Some(s)) => s.kind == k && r.partition.is_none(),
                _ => false,
            };
            if !ok {
                return Err(Error::Corpus(format!("record {} has inconsistent label, kind and spec", r.path)));
            }
            if r.partition.is_some() && r.split != Split::A {
                return Err(Error::Corpus(format!("record {} has a partition outside split A", r.path)));
            }
        }
        self.plan
            .check_assignment(self.records.iter().map(|r| (r.source.as_str(), r.split)))
    }

    pub fn read(path: impl AsRef<Path>) -> Result<CorpusManifest> {
        read_json(path.as_ref())
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        write_json(path.as_ref(), self)
    }

    pub fn records_in(&self, split: Split) -> impl Iterator<Item = &Record> {
        self.records.iter().filter(move |r| r.split == split)
    }
}

/// Directory that manifest paths resolve against.
pub fn manifest_root(manifest_path: &Path) -> PathBuf {
    manifest_path
        .parent()
        .filter(|p| !p.as_os_str().is_empty())
        .map_or_else(|| PathBuf::from("."), Path::to_path_buf)
}

pub fn to_json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Ok(serde_json::from_str(&text)?)
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    std::fs::write(path, to_json(value)?).map_err(|e| Error::io(path, e))
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}
