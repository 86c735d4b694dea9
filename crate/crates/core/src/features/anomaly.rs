use serde::{Deserialize, Serialize};

use crate::imagecore::Image;

/// Per-pixel anomaly scores, row-major, all non-negative.
#[derive(Clone, Debug, PartialEq)]
pub struct AnomalyMap {
    pub width: usize,
    pub height: usize,
    pub scores: Vec<f64>,
}

impl AnomalyMap {
    pub fn max(&self) -> f64 {
        self.scores.iter().copied().fold(0.0, f64::max)
    }
}

/// The three-vertex {r, g, b} graph built from an image's channel means.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChannelGraph {
    /// Channel means on the 8-bit scale.
    pub means: [f64; 3],
    pub alpha: f64,
    /// Symmetric adjacency with zero diagonal.
    pub weights: [[f64; 3]; 3],
    pub degrees: [f64; 3],
}

impl ChannelGraph {
    /// Normalized Laplacian D^-1/2 (D - W) D^-1/2.
    pub fn normalized_laplacian(&self) -> [[f64; 3]; 3] {
        let mut l = [[0.0; 3]; 3];
        for a in 0..3 {
            for b in 0..3 {
                let lab = if a == b {
                    self.degrees[a] - self.weights[a][b]
                } else {
                    -self.weights[a][b]
                };
                l[a][b] = lab / (self.degrees[a] * self.degrees[b]).sqrt();
            }
        }
        l
    }

    /// s^T L* s, evaluated as sum over edges of w_ab (s_a/sqrt(d_a) - s_b/sqrt(d_b))^2
    /// so the result is non-negative by construction.
    #[inline]
    pub fn score(&self, s: [f64; 3]) -> f64 {
        let y = [
            s[0] / self.degrees[0].sqrt(),
            s[1] / self.degrees[1].sqrt(),
            s[2] / self.degrees[2].sqrt(),
        ];
        self.weights[0][1] * (y[0] - y[1]).powi(2)
            + self.weights[0][2] * (y[0] - y[2]).powi(2)
            + self.weights[1][2] * (y[1] - y[2]).powi(2)
    }
}

/// Channel graph of `img`. For an all-black image (alpha = 0) every weight is 1.
pub fn channel_laplacian(img: &Image) -> ChannelGraph {
    let n = img.pixels().len() as f64;
    let mut sums = [0.0f64; 3];
    for px in img.pixels() {
        for c in 0..3 {
            sums[c] += px[c] as f64;
        }
    }
    let means = sums.map(|s| s / n);
    let alpha = (means[0] + means[1] + means[2]) / 3.0;
    let weight = |a: usize, b: usize| {
        if alpha == 0.0 {
            1.0
        } else {
            1.0 / (1.0 + ((means[a] - means[b]) / alpha).powi(2))
        }
    };
    let mut weights = [[0.0; 3]; 3];
    for a in 0..3 {
        for b in 0..3 {
            if a != b {
                weights[a][b] = weight(a, b);
            }
        }
    }
    let degrees = [0, 1, 2].map(|a| weights[a].iter().sum::<f64>());
    ChannelGraph {
        means,
        alpha,
        weights,
        degrees,
    }
}

/// Per-pixel delta(x) = s^T L* s with s the pixel's 8-bit RGB vector.
pub fn anomaly_map(img: &Image) -> AnomalyMap {
    let graph = channel_laplacian(img);
    let scores = img
        .pixels()
        .iter()
        .map(|px| graph.score([px[0] as f64, px[1] as f64, px[2] as f64]))
        .collect();
    AnomalyMap {
        width: img.width(),
        height: img.height(),
        scores,
    }
}
