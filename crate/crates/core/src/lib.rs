//! Synthetic graphics-corruption generation and detection for rendered game frames.
//!
//! The crate is organized bottom-up:
//!
//! * [`imagecore`]: RGB/grayscale rasters, resampling, PNG I/O and the seeded RNG contract.
//! * [`glitchgen`]: eleven seeded artifact generators (ten artifact classes, dotted lines
//!   split into random and radial sub-modes).
//! * [`features`]: unitary 2D DFT, HOG, the channel-graph Laplacian anomaly measure,
//!   grayscale dilation and randomized PCA.
//! * [`learners`]: logistic regression, LDA, RBF-kernel SVC and a scalar threshold rule.
//! * [`pipeline`]: per-artifact specialists, the logistic-regression combiner and evaluation.
//! * [`datasetio`]: corpus manifests, corpus building and model bundles.
//!
//! Batch work over images runs through [`par`], which uses rayon when the `parallel`
//! feature is enabled and falls back to plain iterators otherwise.

pub mod datasetio;
pub mod error;
pub mod features;
pub mod glitchgen;
pub mod imagecore;
pub mod learners;
pub mod par;
pub mod pipeline;
pub mod scenes;

pub use error::{Error, Result};
pub use glitchgen::{ArtifactKind, GlitchSpec};
pub use imagecore::{GrayImage, Image, Rng};
