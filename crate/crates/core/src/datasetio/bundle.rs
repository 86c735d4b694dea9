use std::collections::BTreeMap;
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use super::{manifest_root, read_json, sha256_hex, write_json, CorpusManifest, Record};
use crate::imagecore::{child_seed, read_png};
use crate::par::{self, Execution};
use crate::pipeline::{
    evaluate, predict, train_ensemble, train_specialist, ArtifactGroup, EnsembleModel, EvalReport, FeatureCache,
    PipelineSpec, Prediction, Sample, Split, SplitPlan,
};
use crate::{Error, Result};

pub const BUNDLE_VERSION: u32 = 1;

/// Everything needed to score new images, plus the provenance of training.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelBundle {
    pub version: u32,
    pub created_at_unix: u64,
    /// SHA-256 of the training manifest file.
    pub manifest_digest: String,
    pub train_seed: u64,
    pub plan: SplitPlan,
    pub specs: Vec<PipelineSpec>,
    pub ensemble: EnsembleModel,
}

impl ModelBundle {
    pub fn read(path: impl AsRef<Path>) -> Result<ModelBundle> {
        let bundle: ModelBundle = read_json(path.as_ref())?;
        if bundle.version != BUNDLE_VERSION {
            return Err(Error::Corpus(format!("unsupported bundle version {}", bundle.version)));
        }
        Ok(bundle)
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        write_json(path.as_ref(), self)
    }
}

/// `SOURCE_DATE_EPOCH` when set, otherwise the current time.
pub fn created_at_default() -> u64 {
    std::env::var("SOURCE_DATE_EPOCH")
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or_else(|| SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs()))
}

#[derive(Clone, Debug)]
pub struct TrainOptions {
    pub seed: u64,
    pub created_at_unix: u64,
    pub specs: Vec<PipelineSpec>,
    pub exec: Execution,
}

impl TrainOptions {
    pub fn new(seed: u64) -> TrainOptions {
        TrainOptions {
            seed,
            created_at_unix: created_at_default(),
            specs: PipelineSpec::defaults(),
            exec: Execution::default(),
        }
    }
}

fn load_with<F>(root: &Path, records: &[&Record], exec: Execution, specs_for: F) -> Result<Vec<Sample>>
where
    F: Fn(&Record) -> Result<Vec<PipelineSpec>> + Sync,
{
    par::try_map_with(exec, records, |r| {
        let img = read_png(root.join(&r.path))?;
        Sample::from_image(r.path.clone(), r.source.clone(), r.kind, &img, &specs_for(r)?)
    })
}

/// Read and featurize records, in order, with every chain of `specs`.
pub fn load_samples(root: &Path, records: &[&Record], specs: &[PipelineSpec], exec: Execution) -> Result<Vec<Sample>> {
    load_with(root, records, exec, |_| Ok(specs.to_vec()))
}

fn spec_for(specs: &[PipelineSpec], group: ArtifactGroup) -> Result<PipelineSpec> {
    specs
        .iter()
        .find(|s| s.artifact == group)
        .copied()
        .ok_or_else(|| Error::MissingSpecialist(group.to_string()))
}

/// Stage I on split A, then stage II on split B.
///
/// Each split-A image is featurized only with the chain of the specialist it
/// belongs to. Specialists train concurrently; the combiner trains afterwards.
pub fn train_from_manifest(manifest_path: &Path, opts: &TrainOptions) -> Result<ModelBundle> {
    let bytes = std::fs::read(manifest_path).map_err(|e| Error::io(manifest_path, e))?;
    let manifest: CorpusManifest = serde_json::from_slice(&bytes)?;
    manifest.validate()?;
    let root = manifest_root(manifest_path);

    let a_records: Vec<&Record> = manifest.records_in(Split::A).collect();
    let mut normal_index = 0usize;
    let groups: Vec<ArtifactGroup> = a_records
        .iter()
        .map(|r| match (r.kind, r.partition) {
            (Some(kind), _) => ArtifactGroup::of(kind),
            (None, Some(g)) => g,
            (None, None) => {
                normal_index += 1;
                ArtifactGroup::ALL[(normal_index - 1) % ArtifactGroup::ALL.len()]
            }
        })
        .collect();
    let group_of: BTreeMap<&str, ArtifactGroup> =
        a_records.iter().zip(&groups).map(|(r, g)| (r.path.as_str(), *g)).collect();
    let a_samples = load_with(&root, &a_records, opts.exec, |r| Ok(vec![spec_for(&opts.specs, group_of[r.path.as_str()])?]))?;

    let mut buckets: BTreeMap<ArtifactGroup, (Vec<Sample>, Vec<Sample>)> =
        ArtifactGroup::ALL.iter().map(|g| (*g, (Vec::new(), Vec::new()))).collect();
    for (sample, group) in a_samples.into_iter().zip(groups) {
        let bucket = buckets.get_mut(&group).expect("all groups present");
        if sample.is_corrupted() {
            bucket.1.push(sample);
        } else {
            bucket.0.push(sample);
        }
    }
    let jobs: Vec<(ArtifactGroup, Vec<Sample>, Vec<Sample>)> =
        buckets.into_iter().map(|(g, (n, c))| (g, n, c)).collect();
    let trained = par::try_map_with(opts.exec, &jobs, |(g, normals, corrupted)| {
        let spec = spec_for(&opts.specs, *g)?;
        train_specialist(&spec, normals, corrupted, child_seed(opts.seed, g.index() as u64 + 1))
            .map_err(|e| Error::Corpus(format!("specialist {g}: {e}")))
    })?;
    drop(jobs);
    let specialists: BTreeMap<ArtifactGroup, _> = trained.into_iter().map(|s| (s.spec.artifact, s)).collect();

    let b_records: Vec<&Record> = manifest.records_in(Split::B).collect();
    let b_samples = load_samples(&root, &b_records, &opts.specs, opts.exec)?;
    let (corrupted, normals): (Vec<Sample>, Vec<Sample>) = b_samples.into_iter().partition(Sample::is_corrupted);
    let ensemble = train_ensemble(specialists, &normals, &corrupted, child_seed(opts.seed, 1000))?;

    Ok(ModelBundle {
        version: BUNDLE_VERSION,
        created_at_unix: opts.created_at_unix,
        manifest_digest: sha256_hex(&bytes),
        train_seed: opts.seed,
        plan: manifest.plan.clone(),
        specs: opts.specs.clone(),
        ensemble,
    })
}

/// Score every record of one split with the bundle's ensemble.
pub fn evaluate_manifest(bundle: &ModelBundle, manifest_path: &Path, split: Split, exec: Execution) -> Result<EvalReport> {
    let manifest = CorpusManifest::read(manifest_path)?;
    manifest.validate()?;
    let records: Vec<&Record> = manifest.records_in(split).collect();
    if records.is_empty() {
        return Err(Error::EmptyInput("no records in the requested split"));
    }
    let samples = load_samples(&manifest_root(manifest_path), &records, &bundle.specs, exec)?;
    evaluate(&bundle.ensemble, &samples)
}

pub fn predict_image(bundle: &ModelBundle, image_path: &Path) -> Result<Prediction> {
    let img = read_png(image_path)?;
    predict(&bundle.ensemble, &FeatureCache::compute(&img, &bundle.specs)?)
}
