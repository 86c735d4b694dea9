//! Feature representations: unitary 2D DFT, HOG, the channel-graph anomaly
//! measure with grayscale dilation, and randomized PCA.

mod anomaly;
mod dft;
mod hog;
pub(crate) mod linalg;
mod morphology;
mod rpca;

use serde::{Deserialize, Serialize};

pub use anomaly::{anomaly_map, channel_laplacian, AnomalyMap, ChannelGraph};
pub use dft::{dft2, idft2, spectral_feature, Spectrum};
pub use hog::{hog, hog_with, patch_histograms, HogConfig, HogDescriptor, VoteSplit};
pub use morphology::dilate;
pub use rpca::{pca_fit, pca_transform, PcaConfig, PcaModel};

use crate::{Error, Result};

/// Flat feature values plus the id of the chain that produced them.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FeatureVector {
    pub values: Vec<f64>,
    pub pipeline_id: String,
}

impl FeatureVector {
    pub fn new(values: Vec<f64>, pipeline_id: impl Into<String>) -> Result<Self> {
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("feature vector"));
        }
        Ok(FeatureVector {
            values,
            pipeline_id: pipeline_id.into(),
        })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

impl AsRef<[f64]> for FeatureVector {
    fn as_ref(&self) -> &[f64] {
        &self.values
    }
}
