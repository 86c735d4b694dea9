use serde::{Deserialize, Serialize};

use super::{LearnerKind, TrainMeta, TrainedModel, Weights};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Polarity {
    /// Positive iff `score >= cut`.
    Above,
    /// Positive iff `score < cut`.
    Below,
}

impl Polarity {
    pub fn fires(self, score: f64, cut: f64) -> bool {
        match self {
            Polarity::Above => score >= cut,
            Polarity::Below => score < cut,
        }
    }
}

/// Best single cut on a scalar score.
///
/// Candidates are the midpoints between consecutive distinct scores plus one cut
/// below every score (the constant classifiers, margin 0). Accuracy is maximized,
/// then the half-gap margin, then the cut is taken as small as possible.
pub fn threshold_train(scores: &[f64], y: &[bool]) -> Result<TrainedModel> {
    if scores.is_empty() {
        return Err(Error::EmptyInput("threshold scores"));
    }
    if scores.len() != y.len() {
        return Err(Error::DimensionMismatch {
            expected: scores.len(),
            actual: y.len(),
        });
    }
    if scores.iter().any(|s| !s.is_finite()) {
        return Err(Error::NonFinite("threshold scores"));
    }
    let n = scores.len();
    let total_pos = y.iter().filter(|&&t| t).count();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| scores[a].total_cmp(&scores[b]));

    // Sentinel below everything: Above predicts all positive, Below all negative.
    let sentinel = scores[order[0]] - 1.0;
    let mut best = (total_pos.max(n - total_pos), 0.0, sentinel, if total_pos * 2 >= n { Polarity::Above } else { Polarity::Below });
    let mut pos_below = 0usize;
    let mut k = 0;
    while k < n {
        let s = scores[order[k]];
        while k < n && scores[order[k]] == s {
            pos_below += y[order[k]] as usize;
            k += 1;
        }
        if k == n {
            break;
        }
        let next = scores[order[k]];
        let cut = 0.5 * (s + next);
        let margin = 0.5 * (next - s);
        let neg_below = k - pos_below;
        let above_correct = neg_below + (total_pos - pos_below);
        let below_correct = pos_below + (n - k - (total_pos - pos_below));
        for (correct, pol) in [(above_correct, Polarity::Above), (below_correct, Polarity::Below)] {
            if correct > best.0 || (correct == best.0 && margin > best.1) {
                best = (correct, margin, cut, pol);
            }
        }
    }
    let (correct, _, cut, polarity) = best;
    Ok(TrainedModel {
        kind: LearnerKind::Threshold,
        dim: 1,
        standardizer: None,
        weights: Weights::Threshold {
            cut,
            polarity,
            accuracy: correct as f64 / n as f64,
        },
        pipeline_id: String::new(),
        train_meta: TrainMeta {
            n_samples: n,
            n_positive: total_pos,
            seed: 0,
        },
    })
}
