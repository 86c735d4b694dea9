//! Per-artifact specialist pipelines, the logistic-regression combiner over their
//! probabilities, and evaluation.
//!
//! Images enter as [`Sample`]s: the base feature vectors each chain needs are
//! computed once per image, so full-resolution frames never have to stay in memory.

mod eval;
mod split;
mod train;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::features::{anomaly_map, dilate, hog, pca_transform, spectral_feature, FeatureVector, PcaModel};
use crate::learners::LearnerKind;
use crate::par::{self, Execution};
use crate::{ArtifactKind, Error, Image, Result};

pub use eval::{ArtifactRecall, Confusion, EvalReport, ItemRecord};
pub use split::{stratified_split, Split, SplitCounts, SplitPlan};
pub use train::{
    evaluate, predict, specialist_outputs, train_ensemble, train_specialist, EnsembleModel, Prediction,
    SpecialistScore, Specialist,
};

/// The ten detection targets. Declaration order is the fixed order of the
/// combiner's input vector.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ArtifactGroup {
    Shapes,
    LinePixelation,
    Shader,
    Morse,
    ParallelLines,
    Dotted,
    Stuttering,
    Triangulation,
    Discoloration,
    Tearing,
}

impl ArtifactGroup {
    pub const ALL: [ArtifactGroup; 10] = [
        ArtifactGroup::Shapes,
        ArtifactGroup::LinePixelation,
        ArtifactGroup::Shader,
        ArtifactGroup::Morse,
        ArtifactGroup::ParallelLines,
        ArtifactGroup::Dotted,
        ArtifactGroup::Stuttering,
        ArtifactGroup::Triangulation,
        ArtifactGroup::Discoloration,
        ArtifactGroup::Tearing,
    ];

    pub fn of(kind: ArtifactKind) -> ArtifactGroup {
        match kind {
            ArtifactKind::Shader => ArtifactGroup::Shader,
            ArtifactKind::Shapes => ArtifactGroup::Shapes,
            ArtifactKind::Discoloration => ArtifactGroup::Discoloration,
            ArtifactKind::MorseCode => ArtifactGroup::Morse,
            ArtifactKind::DottedLinesRandom | ArtifactKind::DottedLinesRadial => ArtifactGroup::Dotted,
            ArtifactKind::ParallelLines => ArtifactGroup::ParallelLines,
            ArtifactKind::Triangulation => ArtifactGroup::Triangulation,
            ArtifactKind::LinePixelation => ArtifactGroup::LinePixelation,
            ArtifactKind::Stuttering => ArtifactGroup::Stuttering,
            ArtifactKind::Tearing => ArtifactGroup::Tearing,
        }
    }

    pub fn kinds(self) -> Vec<ArtifactKind> {
        ArtifactKind::ALL.into_iter().filter(|k| ArtifactGroup::of(*k) == self).collect()
    }

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            ArtifactGroup::Shapes => "shapes",
            ArtifactGroup::LinePixelation => "line_pixelation",
            ArtifactGroup::Shader => "shader",
            ArtifactGroup::Morse => "morse",
            ArtifactGroup::ParallelLines => "parallel_lines",
            ArtifactGroup::Dotted => "dotted",
            ArtifactGroup::Stuttering => "stuttering",
            ArtifactGroup::Triangulation => "triangulation",
            ArtifactGroup::Discoloration => "discoloration",
            ArtifactGroup::Tearing => "tearing",
        }
    }
}

impl fmt::Display for ArtifactGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ArtifactGroup {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ArtifactGroup::ALL
            .into_iter()
            .find(|g| g.name() == s)
            .ok_or_else(|| Error::UnknownKind(s.to_string()))
    }
}

/// Feature chain with its parameters.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "chain")]
pub enum Chain {
    /// Log-magnitude spectrum resampled to `side x side`.
    FtResize { side: usize },
    /// As `FtResize`, then projected onto `k` principal components.
    FtResizePca { side: usize, k: usize },
    /// Grayscale resize to `width x height`, then HOG.
    ResizeHog {
        width: usize,
        height: usize,
        patch: usize,
        bins: usize,
    },
    /// Maximum of the dilated anomaly map: a single scalar.
    AnomalyDilation { radius: usize },
}

impl Chain {
    pub fn id(&self) -> String {
        match *self {
            Chain::FtResize { side } => format!("ft-resize(side={side})"),
            Chain::FtResizePca { side, k } => format!("ft-resize-pca(side={side},k={k})"),
            Chain::ResizeHog {
                width,
                height,
                patch,
                bins,
            } => format!("resize-hog(w={width},h={height},patch={patch},bins={bins})"),
            Chain::AnomalyDilation { radius } => format!("anomaly-dilation(radius={radius})"),
        }
    }

    /// Id of the image-level part of the chain, shared by chains that differ only
    /// in a learned projection.
    pub fn base_id(&self) -> String {
        match *self {
            Chain::FtResizePca { side, .. } => Chain::FtResize { side }.id(),
            _ => self.id(),
        }
    }

    pub fn uses_pca(&self) -> bool {
        matches!(self, Chain::FtResizePca { .. })
    }

    /// The image-level part of the chain.
    pub fn base_extract(&self, img: &Image) -> Result<Vec<f64>> {
        match *self {
            Chain::FtResize { side } | Chain::FtResizePca { side, .. } => Ok(spectral_feature(img, side)?.values),
            Chain::ResizeHog {
                width,
                height,
                patch,
                bins,
            } => {
                let small = img.to_gray().resize(width, height)?;
                Ok(hog(&small, patch, bins)?.values)
            }
            Chain::AnomalyDilation { radius } => Ok(vec![dilate(&anomaly_map(img), radius).max()]),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PipelineSpec {
    pub artifact: ArtifactGroup,
    #[serde(flatten)]
    pub chain: Chain,
    pub learner: LearnerKind,
}

impl PipelineSpec {
    /// One row per artifact group, in combiner order.
    pub fn defaults() -> Vec<PipelineSpec> {
        let ft = Chain::FtResize { side: 64 };
        let ft_pca = Chain::FtResizePca { side: 64, k: 128 };
        let hog = Chain::ResizeHog {
            width: 256,
            height: 144,
            patch: 16,
            bins: 9,
        };
        let anomaly = Chain::AnomalyDilation { radius: 2 };
        use ArtifactGroup as G;
        use LearnerKind as L;
        [
            (G::Shapes, ft, L::Lr),
            (G::LinePixelation, anomaly, L::Threshold),
            (G::Shader, hog, L::Lr),
            (G::Morse, ft, L::Svc),
            (G::ParallelLines, ft_pca, L::Lr),
            (G::Dotted, ft_pca, L::Lr),
            (G::Stuttering, ft_pca, L::Lr),
            (G::Triangulation, ft_pca, L::Lda),
            (G::Discoloration, ft_pca, L::Lr),
            (G::Tearing, hog, L::Lr),
        ]
        .into_iter()
        .map(|(artifact, chain, learner)| PipelineSpec { artifact, chain, learner })
        .collect()
    }

    pub fn id(&self) -> String {
        format!("{}:{}:{}", self.artifact, self.chain.id(), self.learner)
    }
}

/// Base feature vectors of one image keyed by [`Chain::base_id`].
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct FeatureCache(pub BTreeMap<String, Vec<f64>>);

impl FeatureCache {
    /// Compute every distinct base chain used by `specs`.
    pub fn compute(img: &Image, specs: &[PipelineSpec]) -> Result<FeatureCache> {
        let mut map = BTreeMap::new();
        for spec in specs {
            let id = spec.chain.base_id();
            if !map.contains_key(&id) {
                let v = spec.chain.base_extract(img)?;
                map.insert(id, v);
            }
        }
        Ok(FeatureCache(map))
    }

    pub fn get(&self, chain: &Chain) -> Result<&[f64]> {
        self.0
            .get(&chain.base_id())
            .map(Vec::as_slice)
            .ok_or_else(|| Error::InvalidParameter(format!("feature cache lacks {}", chain.base_id())))
    }
}

/// Finish a chain on cached base features.
pub fn finish(spec: &PipelineSpec, cache: &FeatureCache, pca: Option<&PcaModel>) -> Result<FeatureVector> {
    let base = cache.get(&spec.chain)?;
    let values = match (spec.chain.uses_pca(), pca) {
        (true, Some(model)) => pca_transform(model, base)?,
        (true, None) => return Err(Error::MissingPca(spec.chain.id())),
        (false, Some(_)) => {
            return Err(Error::InvalidParameter(format!("chain {} takes no PCA model", spec.chain.id())))
        }
        (false, None) => base.to_vec(),
    };
    FeatureVector::new(values, spec.chain.id())
}

/// Run the full chain on an image. Anomaly chains yield a length-1 vector.
pub fn extract(spec: &PipelineSpec, img: &Image, pca: Option<&PcaModel>) -> Result<FeatureVector> {
    if spec.chain.uses_pca() && pca.is_none() {
        return Err(Error::MissingPca(spec.chain.id()));
    }
    let cache = FeatureCache::compute(img, std::slice::from_ref(spec))?;
    finish(spec, &cache, pca)
}

/// One image reduced to its identity, label and cached features.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub id: String,
    pub source: String,
    /// `None` for normal images.
    pub kind: Option<ArtifactKind>,
    pub features: FeatureCache,
}

impl Sample {
    pub fn from_image(
        id: impl Into<String>,
        source: impl Into<String>,
        kind: Option<ArtifactKind>,
        img: &Image,
        specs: &[PipelineSpec],
    ) -> Result<Sample> {
        Ok(Sample {
            id: id.into(),
            source: source.into(),
            kind,
            features: FeatureCache::compute(img, specs)?,
        })
    }

    pub fn is_corrupted(&self) -> bool {
        self.kind.is_some()
    }
}

/// Feature extraction over a batch of images, in input order.
pub fn extract_batch(exec: Execution, images: &[Image], specs: &[PipelineSpec]) -> Result<Vec<FeatureCache>> {
    par::try_map_with(exec, images, |img| FeatureCache::compute(img, specs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::glitchgen::testimg;

    #[test]
    fn default_table_rows() {
        let rows: Vec<(ArtifactGroup, &str, LearnerKind)> = PipelineSpec::defaults()
            .iter()
            .map(|s| {
                let chain = match s.chain {
                    Chain::FtResize { side: 64 } => "FT+Resize",
                    Chain::FtResizePca { side: 64, k: 128 } => "FT+Resize+PCA",
                    Chain::ResizeHog { patch: 16, bins: 9, .. } => "Resize+HOG",
                    Chain::AnomalyDilation { radius: 2 } => "Anomaly+Dilation",
                    _ => "unexpected parameters",
                };
                (s.artifact, chain, s.learner)
            })
            .collect();
        use ArtifactGroup as G;
        use LearnerKind as L;
        let expected = vec![
            (G::Shapes, "FT+Resize", L::Lr),
            (G::LinePixelation, "Anomaly+Dilation", L::Threshold),
            (G::Shader, "Resize+HOG", L::Lr),
            (G::Morse, "FT+Resize", L::Svc),
            (G::ParallelLines, "FT+Resize+PCA", L::Lr),
            (G::Dotted, "FT+Resize+PCA", L::Lr),
            (G::Stuttering, "FT+Resize+PCA", L::Lr),
            (G::Triangulation, "FT+Resize+PCA", L::Lda),
            (G::Discoloration, "FT+Resize+PCA", L::Lr),
            (G::Tearing, "Resize+HOG", L::Lr),
        ];
        assert_eq!(rows, expected);
        assert!(PipelineSpec::defaults().iter().map(|s| s.artifact).eq(ArtifactGroup::ALL));
    }

    #[test]
    fn every_kind_has_a_group() {
        let covered: usize = ArtifactGroup::ALL.iter().map(|g| g.kinds().len()).sum();
        assert_eq!(covered, ArtifactKind::ALL.len());
        assert_eq!(ArtifactGroup::Dotted.kinds().len(), 2);
        for g in ArtifactGroup::ALL {
            assert_eq!(g.name().parse::<ArtifactGroup>().unwrap(), g);
            assert_eq!(ArtifactGroup::ALL[g.index()], g);
        }
    }

    #[test]
    fn chain_shapes() {
        let img = testimg::textured(96, 64);
        let specs = PipelineSpec::defaults();
        let ft = extract(&specs[0], &img, None).unwrap();
        assert_eq!(ft.len(), 64 * 64);
        let hog = extract(&specs[2], &img, None).unwrap();
        assert_eq!(hog.len(), 16 * 9 * 9);
        let anomaly = extract(&specs[1], &img, None).unwrap();
        assert_eq!(anomaly.len(), 1);
        assert!(matches!(extract(&specs[4], &img, None), Err(Error::MissingPca(_))));
    }

    #[test]
    fn pca_chain_has_k_outputs() {
        let spec = PipelineSpec::defaults()[4];
        let imgs: Vec<Image> = (0..140).map(|i| testimg::textured(32 + i % 7, 32)).collect();
        let caches = extract_batch(Execution::Sequential, &imgs, &[spec]).unwrap();
        let rows: Vec<&[f64]> = caches.iter().map(|c| c.get(&spec.chain).unwrap()).collect();
        let model = crate::features::pca_fit(&rows, &crate::features::PcaConfig::new(128)).unwrap();
        let v = extract(&spec, &imgs[0], Some(&model)).unwrap();
        assert_eq!(v.len(), 128);
    }

    #[test]
    fn constant_image_has_zero_anomaly() {
        let img = Image::filled(40, 30, [90, 90, 90]).unwrap();
        let spec = PipelineSpec::defaults()[1];
        assert_eq!(extract(&spec, &img, None).unwrap().values, vec![0.0]);
    }

    #[test]
    fn batch_extraction_is_order_stable() {
        let imgs: Vec<Image> = (0..6).map(|i| testimg::textured(40 + i, 36)).collect();
        let specs = PipelineSpec::defaults();
        let seq = extract_batch(Execution::Sequential, &imgs, &specs).unwrap();
        let par = extract_batch(Execution::Parallel, &imgs, &specs).unwrap();
        assert_eq!(seq, par);
        assert_eq!(seq[0].0.len(), 3);
    }
}
