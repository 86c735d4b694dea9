//! Shallow binary classifiers trained from scratch: logistic regression, LDA,
//! an RBF-kernel SVC solved by SMO, and a scalar threshold rule.
//!
//! Labels are `bool` with `true` as the positive (corrupted) class. Every learner
//! except the threshold rule standardizes its inputs and stores the statistics in
//! the returned [`TrainedModel`].

mod lda;
mod lr;
mod svc;
mod threshold;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::features::linalg::dot;
use crate::{Error, Result};

pub use lda::lda_train;
pub use lr::{lr_loss_grad, lr_train, lr_train_traced, LrConfig};
pub use svc::{svc_train, svc_train_traced, Gamma, SvcConfig};
pub use threshold::{threshold_train, Polarity};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LearnerKind {
    #[serde(rename = "LR")]
    Lr,
    #[serde(rename = "LDA")]
    Lda,
    #[serde(rename = "SVC")]
    Svc,
    #[serde(rename = "Threshold")]
    Threshold,
}

impl LearnerKind {
    pub const ALL: [LearnerKind; 4] = [LearnerKind::Lr, LearnerKind::Lda, LearnerKind::Svc, LearnerKind::Threshold];

    pub fn name(self) -> &'static str {
        match self {
            LearnerKind::Lr => "LR",
            LearnerKind::Lda => "LDA",
            LearnerKind::Svc => "SVC",
            LearnerKind::Threshold => "Threshold",
        }
    }
}

impl fmt::Display for LearnerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for LearnerKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        LearnerKind::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidParameter(format!("unknown learner `{s}`")))
    }
}

/// Per-feature mean and scale; constant features keep scale 1.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Standardizer {
    pub mean: Vec<f64>,
    pub scale: Vec<f64>,
}

impl Standardizer {
    pub fn fit<V: AsRef<[f64]>>(x: &[V]) -> Self {
        let d = x.first().map_or(0, |v| v.as_ref().len());
        let n = x.len().max(1) as f64;
        let mut mean = vec![0.0; d];
        for v in x {
            for (m, a) in mean.iter_mut().zip(v.as_ref()) {
                *m += a;
            }
        }
        mean.iter_mut().for_each(|m| *m /= n);
        let mut var = vec![0.0; d];
        for v in x {
            for ((s, a), m) in var.iter_mut().zip(v.as_ref()).zip(&mean) {
                *s += (a - m) * (a - m);
            }
        }
        let scale = var
            .into_iter()
            .map(|s| {
                let sd = (s / n).sqrt();
                if sd > 1e-12 {
                    sd
                } else {
                    1.0
                }
            })
            .collect();
        Standardizer { mean, scale }
    }

    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        v.iter()
            .zip(&self.mean)
            .zip(&self.scale)
            .map(|((a, m), s)| (a - m) / s)
            .collect()
    }
}

/// Kind-specific learned parameters. Linear weights and support vectors live in
/// standardized coordinates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Weights {
    Lr {
        w: Vec<f64>,
        b: f64,
    },
    Lda {
        w: Vec<f64>,
        /// Positive when `w . x` exceeds this.
        threshold: f64,
        priors: [f64; 2],
    },
    Svc {
        support: Vec<Vec<f64>>,
        /// `alpha_i * y_i` per support vector.
        coef: Vec<f64>,
        bias: f64,
        gamma: f64,
        c: f64,
        /// Logistic link `1 / (1 + exp(a f + b))` on decision values.
        platt_a: f64,
        platt_b: f64,
    },
    Threshold {
        cut: f64,
        polarity: Polarity,
        accuracy: f64,
    },
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrainMeta {
    pub n_samples: usize,
    pub n_positive: usize,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrainedModel {
    pub kind: LearnerKind,
    pub dim: usize,
    pub standardizer: Option<Standardizer>,
    pub weights: Weights,
    pub pipeline_id: String,
    pub train_meta: TrainMeta,
}

impl TrainedModel {
    /// Probability of the positive class.
    pub fn predict_proba(&self, v: &[f64]) -> Result<f64> {
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                actual: v.len(),
            });
        }
        if v.iter().any(|a| !a.is_finite()) {
            return Err(Error::NonFinite("prediction input"));
        }
        let z = match &self.standardizer {
            Some(s) => s.apply(v),
            None => v.to_vec(),
        };
        let p = match &self.weights {
            Weights::Lr { w, b } => sigmoid(dot(w, &z) + b),
            Weights::Lda { w, threshold, .. } => sigmoid(dot(w, &z) - threshold),
            Weights::Svc {
                platt_a, platt_b, ..
            } => {
                let f = self.decision_value_standardized(&z);
                sigmoid(-(platt_a * f + platt_b))
            }
            Weights::Threshold { cut, polarity, .. } => {
                if polarity.fires(z[0], *cut) {
                    1.0
                } else {
                    0.0
                }
            }
        };
        Ok(p)
    }

    pub fn predict(&self, v: &[f64]) -> Result<bool> {
        Ok(self.predict_proba(v)? >= 0.5)
    }

    /// Raw SVC decision value `sum coef_i k(s_i, x) + bias`; the linear score
    /// for the other kinds.
    pub fn decision_value(&self, v: &[f64]) -> Result<f64> {
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                actual: v.len(),
            });
        }
        let z = match &self.standardizer {
            Some(s) => s.apply(v),
            None => v.to_vec(),
        };
        Ok(match &self.weights {
            Weights::Lr { w, b } => dot(w, &z) + b,
            Weights::Lda { w, threshold, .. } => dot(w, &z) - threshold,
            Weights::Svc { .. } => self.decision_value_standardized(&z),
            Weights::Threshold { cut, polarity, .. } => match polarity {
                Polarity::Above => z[0] - cut,
                Polarity::Below => cut - z[0],
            },
        })
    }

    fn decision_value_standardized(&self, z: &[f64]) -> f64 {
        match &self.weights {
            Weights::Svc {
                support,
                coef,
                bias,
                gamma,
                ..
            } => {
                support
                    .iter()
                    .zip(coef)
                    .map(|(s, a)| a * rbf(s, z, *gamma))
                    .sum::<f64>()
                    + bias
            }
            _ => unreachable!("only called for SVC"),
        }
    }
}

/// Hyperparameters for any learner kind.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LearnerConfig {
    pub lr: LrConfig,
    pub svc: SvcConfig,
}

impl Default for LearnerConfig {
    fn default() -> Self {
        LearnerConfig {
            lr: LrConfig::default(),
            svc: SvcConfig::default(),
        }
    }
}

/// Train a model of the given kind. Threshold models expect one-dimensional inputs.
pub fn train<V: AsRef<[f64]>>(kind: LearnerKind, x: &[V], y: &[bool], cfg: &LearnerConfig) -> Result<TrainedModel> {
    match kind {
        LearnerKind::Lr => lr_train(x, y, &cfg.lr),
        LearnerKind::Lda => lda_train(x, y),
        LearnerKind::Svc => svc_train(x, y, &cfg.svc),
        LearnerKind::Threshold => {
            let d = x.first().map_or(0, |v| v.as_ref().len());
            if d != 1 {
                return Err(Error::DimensionMismatch { expected: 1, actual: d });
            }
            let scores: Vec<f64> = x.iter().map(|v| v.as_ref()[0]).collect();
            threshold_train(&scores, y)
        }
    }
}

pub(crate) fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

pub(crate) fn rbf(a: &[f64], b: &[f64], gamma: f64) -> f64 {
    let d2: f64 = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum();
    (-gamma * d2).exp()
}

/// Shared input checks. Returns (n, d, positives).
pub(crate) fn check_xy<V: AsRef<[f64]>>(x: &[V], y: &[bool]) -> Result<(usize, usize, usize)> {
    if x.is_empty() {
        return Err(Error::EmptyInput("training set"));
    }
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch {
            expected: x.len(),
            actual: y.len(),
        });
    }
    let d = x[0].as_ref().len();
    if d == 0 {
        return Err(Error::EmptyInput("feature vector"));
    }
    for v in x {
        let v = v.as_ref();
        if v.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                actual: v.len(),
            });
        }
        if v.iter().any(|a| !a.is_finite()) {
            return Err(Error::NonFinite("training features"));
        }
    }
    let pos = y.iter().filter(|&&t| t).count();
    if pos == 0 || pos == y.len() {
        return Err(Error::SingleClass);
    }
    Ok((x.len(), d, pos))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_lr_model_gives_one_half() {
        let m = TrainedModel {
            kind: LearnerKind::Lr,
            dim: 3,
            standardizer: None,
            weights: Weights::Lr { w: vec![0.0; 3], b: 0.0 },
            pipeline_id: String::new(),
            train_meta: TrainMeta::default(),
        };
        assert_eq!(m.predict_proba(&[1.0, -4.0, 9.0]).unwrap(), 0.5);
        assert!(m.predict(&[0.0; 3]).unwrap());
        assert!(matches!(m.predict_proba(&[1.0]), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn sigmoid_is_stable_at_extremes() {
        assert_eq!(sigmoid(-1000.0), 0.0);
        assert_eq!(sigmoid(1000.0), 1.0);
        assert!((sigmoid(0.3) + sigmoid(-0.3) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn standardizer_handles_constant_columns() {
        let s = Standardizer::fit(&[vec![1.0, 5.0], vec![3.0, 5.0]]);
        assert_eq!(s.mean, vec![2.0, 5.0]);
        assert_eq!(s.scale, vec![1.0, 1.0]);
        assert_eq!(s.apply(&[3.0, 5.0]), vec![1.0, 0.0]);
    }

    #[test]
    fn kind_names_round_trip() {
        for k in LearnerKind::ALL {
            assert_eq!(k.name().parse::<LearnerKind>().unwrap(), k);
            let js = serde_json::to_string(&k).unwrap();
            assert_eq!(js, format!("\"{}\"", k.name()));
        }
    }

    #[test]
    fn input_errors() {
        let x = vec![vec![1.0], vec![2.0]];
        assert!(matches!(check_xy(&x, &[true, true]), Err(Error::SingleClass)));
        assert!(matches!(check_xy(&[vec![f64::NAN], vec![1.0]], &[true, false]), Err(Error::NonFinite(_))));
        assert!(matches!(check_xy(&[vec![1.0], vec![1.0, 2.0]], &[true, false]), Err(Error::DimensionMismatch { .. })));
        let empty: Vec<Vec<f64>> = Vec::new();
        assert!(check_xy(&empty, &[]).is_err());
    }
}
