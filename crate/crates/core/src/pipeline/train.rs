use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::{finish, stratified_split, ArtifactGroup, EvalReport, FeatureCache, ItemRecord, PipelineSpec, Sample};
use crate::features::{pca_fit, PcaConfig, PcaModel};
use crate::imagecore::child_seed;
use crate::learners::{self, lr_train, LearnerConfig, LearnerKind, LrConfig, TrainedModel};
use crate::{par, Error, Result, Rng};

/// Largest SVC training set; bigger sets are subsampled with the training seed.
pub const SVC_SAMPLE_CAP: usize = 4000;

/// One trained per-artifact detector with the state its chain needs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Specialist {
    pub spec: PipelineSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pca: Option<PcaModel>,
    pub model: TrainedModel,
    /// Sources that contributed training or held-in data.
    pub sources: BTreeSet<String>,
    /// Held-in report on the test half.
    pub report: EvalReport,
}

impl Specialist {
    pub fn score(&self, cache: &FeatureCache) -> Result<f64> {
        let v = finish(&self.spec, cache, self.pca.as_ref())?;
        self.model.predict_proba(&v.values)
    }
}

/// Fit one specialist on a seeded 50/50 split of its data.
///
/// PCA, when the chain has it, is fit on the training half only, with `k` capped at
/// one less than the number of training items.
pub fn train_specialist(spec: &PipelineSpec, normals: &[Sample], corrupted: &[Sample], seed: u64) -> Result<Specialist> {
    if normals.is_empty() || corrupted.is_empty() {
        return Err(Error::SingleClass);
    }
    if let Some(s) = normals.iter().find(|s| s.is_corrupted()) {
        return Err(Error::InvalidParameter(format!("normal set contains corrupted item {}", s.id)));
    }
    if let Some(s) = corrupted
        .iter()
        .find(|s| s.kind.map(ArtifactGroup::of) != Some(spec.artifact))
    {
        return Err(Error::InvalidParameter(format!(
            "item {} does not carry artifact group {}",
            s.id, spec.artifact
        )));
    }
    let items: Vec<&Sample> = normals.iter().chain(corrupted).collect();
    let labels: Vec<bool> = items.iter().map(|s| s.is_corrupted()).collect();
    let (mut train, test) = stratified_split(&labels, 0.5, child_seed(seed, 0))?;

    let pca = if let super::Chain::FtResizePca { k, .. } = spec.chain {
        let rows: Vec<&[f64]> = train
            .iter()
            .map(|&i| items[i].features.get(&spec.chain))
            .collect::<Result<_>>()?;
        let d = rows[0].len();
        let cfg = PcaConfig {
            k: k.min(rows.len() - 1).min(d).max(1),
            seed: child_seed(seed, 1),
            ..PcaConfig::new(k)
        };
        Some(pca_fit(&rows, &cfg)?)
    } else {
        None
    };

    if spec.learner == LearnerKind::Svc && train.len() > SVC_SAMPLE_CAP {
        let perm = Rng::new(child_seed(seed, 2)).permutation(train.len());
        let mut kept: Vec<usize> = perm[..SVC_SAMPLE_CAP].iter().map(|&p| train[p]).collect();
        kept.sort_unstable();
        train = kept;
    }

    let x: Vec<Vec<f64>> = train
        .iter()
        .map(|&i| finish(spec, &items[i].features, pca.as_ref()).map(|v| v.values))
        .collect::<Result<_>>()?;
    let y: Vec<bool> = train.iter().map(|&i| labels[i]).collect();
    let mut model = learners::train(spec.learner, &x, &y, &LearnerConfig::default())?;
    model.pipeline_id = spec.chain.id();
    model.train_meta.seed = seed;

    let mut specialist = Specialist {
        spec: *spec,
        pca,
        model,
        sources: items.iter().map(|s| s.source.clone()).collect(),
        report: placeholder_report(),
    };
    let records = test
        .iter()
        .map(|&i| {
            let p = specialist.score(&items[i].features)?;
            Ok(record(items[i], p))
        })
        .collect::<Result<Vec<_>>>()?;
    specialist.report = EvalReport::from_records(records)?;
    Ok(specialist)
}

fn placeholder_report() -> EvalReport {
    EvalReport {
        total: 0,
        accuracy: 0.0,
        precision: None,
        recall: None,
        confusion: Default::default(),
        per_artifact: BTreeMap::new(),
        records: Vec::new(),
    }
}

fn record(s: &Sample, probability: f64) -> ItemRecord {
    ItemRecord {
        id: s.id.clone(),
        label: s.is_corrupted(),
        kind: s.kind,
        probability,
        predicted: probability >= 0.5,
    }
}

/// Ten specialists plus the logistic-regression combiner over their probabilities.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnsembleModel {
    pub specialists: BTreeMap<ArtifactGroup, Specialist>,
    pub combiner: TrainedModel,
    /// Held-in report on the combiner's test quarter.
    pub report: EvalReport,
}

/// Specialist probabilities in [`ArtifactGroup::ALL`] order.
pub fn specialist_outputs(ensemble: &EnsembleModel, cache: &FeatureCache) -> Result<Vec<f64>> {
    outputs(&ensemble.specialists, cache)
}

fn outputs(specialists: &BTreeMap<ArtifactGroup, Specialist>, cache: &FeatureCache) -> Result<Vec<f64>> {
    ArtifactGroup::ALL
        .iter()
        .map(|g| {
            specialists
                .get(g)
                .ok_or_else(|| Error::MissingSpecialist(g.to_string()))?
                .score(cache)
        })
        .collect()
}

/// Train the combiner on a seeded 75/25 split of data from sources the specialists
/// never saw.
pub fn train_ensemble(
    specialists: BTreeMap<ArtifactGroup, Specialist>,
    normals: &[Sample],
    corrupted: &[Sample],
    seed: u64,
) -> Result<EnsembleModel> {
    for g in ArtifactGroup::ALL {
        if !specialists.contains_key(&g) {
            return Err(Error::MissingSpecialist(g.to_string()));
        }
    }
    if normals.is_empty() || corrupted.is_empty() {
        return Err(Error::SingleClass);
    }
    let seen: BTreeSet<&str> = specialists
        .values()
        .flat_map(|s| s.sources.iter().map(String::as_str))
        .collect();
    let items: Vec<&Sample> = normals.iter().chain(corrupted).collect();
    if let Some(s) = items.iter().find(|s| seen.contains(s.source.as_str())) {
        return Err(Error::SplitViolation(format!(
            "combiner item {} comes from specialist source `{}`",
            s.id, s.source
        )));
    }
    if let Some(s) = normals.iter().find(|s| s.is_corrupted()) {
        return Err(Error::InvalidParameter(format!("normal set contains corrupted item {}", s.id)));
    }
    if let Some(s) = corrupted.iter().find(|s| !s.is_corrupted()) {
        return Err(Error::InvalidParameter(format!("corrupted set contains normal item {}", s.id)));
    }

    let vectors = par::try_map(&items, |s| outputs(&specialists, &s.features))?;
    let labels: Vec<bool> = items.iter().map(|s| s.is_corrupted()).collect();
    let (train, test) = stratified_split(&labels, 0.75, child_seed(seed, 0))?;
    let x: Vec<&[f64]> = train.iter().map(|&i| vectors[i].as_slice()).collect();
    let y: Vec<bool> = train.iter().map(|&i| labels[i]).collect();
    let mut combiner = lr_train(&x, &y, &LrConfig::default())?;
    combiner.pipeline_id = format!("specialist-probabilities(n={})", ArtifactGroup::ALL.len());
    combiner.train_meta.seed = seed;

    let records = test
        .iter()
        .map(|&i| Ok(record(items[i], combiner.predict_proba(&vectors[i])?)))
        .collect::<Result<Vec<_>>>()?;
    let report = EvalReport::from_records(records)?;
    Ok(EnsembleModel {
        specialists,
        combiner,
        report,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpecialistScore {
    pub artifact: ArtifactGroup,
    pub probability: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Prediction {
    pub corrupted: bool,
    pub probability: f64,
    pub specialists: Vec<SpecialistScore>,
}

pub fn predict(ensemble: &EnsembleModel, cache: &FeatureCache) -> Result<Prediction> {
    let scores = specialist_outputs(ensemble, cache)?;
    let probability = ensemble.combiner.predict_proba(&scores)?;
    Ok(Prediction {
        corrupted: probability >= 0.5,
        probability,
        specialists: ArtifactGroup::ALL
            .iter()
            .zip(scores)
            .map(|(&artifact, probability)| SpecialistScore { artifact, probability })
            .collect(),
    })
}

pub fn evaluate(ensemble: &EnsembleModel, samples: &[Sample]) -> Result<EvalReport> {
    if samples.is_empty() {
        return Err(Error::EmptyInput("evaluation set"));
    }
    let records = par::try_map(samples, |s| Ok(record(s, predict(ensemble, &s.features)?.probability)))?;
    EvalReport::from_records(records)
}
