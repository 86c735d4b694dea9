use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::imagecore::GrayImage;
use crate::{Error, Result};

/// How a gradient's magnitude is divided between its two bracketing bins.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VoteSplit {
    /// Linear interpolation: the closer bin receives the larger share.
    #[default]
    Interpolated,
    /// Bin theta1 receives m*n*|theta - theta1|/pi, i.e. the farther bin gets more.
    Literal,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HogConfig {
    pub patch: usize,
    pub bins: usize,
    #[serde(default)]
    pub split: VoteSplit,
}

/// Concatenated per-patch orientation histograms, row-major over patches.
#[derive(Clone, Debug, PartialEq)]
pub struct HogDescriptor {
    pub patch_rows: usize,
    pub patch_cols: usize,
    pub bins: usize,
    pub values: Vec<f64>,
}

impl HogDescriptor {
    pub fn patch(&self, row: usize, col: usize) -> &[f64] {
        let i = (row * self.patch_cols + col) * self.bins;
        &self.values[i..i + self.bins]
    }
}

/// Normalized HOG with the default (interpolated) vote split.
pub fn hog(img: &GrayImage, patch: usize, bins: usize) -> Result<HogDescriptor> {
    hog_with(
        img,
        HogConfig {
            patch,
            bins,
            split: VoteSplit::Interpolated,
        },
    )
}

/// Per-patch L2-normalized HOG; all-zero patches stay zero.
pub fn hog_with(img: &GrayImage, cfg: HogConfig) -> Result<HogDescriptor> {
    let (mut desc, _) = patch_histograms(img, cfg)?;
    for block in desc.values.chunks_exact_mut(cfg.bins) {
        let norm = block.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm > 0.0 {
            block.iter_mut().for_each(|v| *v /= norm);
        }
    }
    Ok(desc)
}

/// Raw (unnormalized) histograms and the per-patch sum of gradient magnitudes.
///
/// The image is center-cropped to a whole number of patches. Gradients are central
/// differences with clamped borders; orientation is unsigned in [0, pi).
pub fn patch_histograms(img: &GrayImage, cfg: HogConfig) -> Result<(HogDescriptor, Vec<f64>)> {
    let HogConfig { patch, bins, split } = cfg;
    if bins < 2 {
        return Err(Error::InvalidParameter(format!("HOG needs at least 2 bins, got {bins}")));
    }
    let (w, h) = (img.width(), img.height());
    if patch == 0 || patch > w || patch > h {
        return Err(Error::InvalidParameter(format!("HOG patch {patch} does not fit a {w}x{h} image")));
    }
    let cols = w / patch;
    let rows = h / patch;
    let ox = (w - cols * patch) / 2;
    let oy = (h - rows * patch) / 2;
    let bin_width = PI / bins as f64;

    let mut values = vec![0.0; rows * cols * bins];
    let mut mass = vec![0.0; rows * cols];
    for y in oy..oy + rows * patch {
        let (yu, yd) = (y.saturating_sub(1), (y + 1).min(h - 1));
        for x in ox..ox + cols * patch {
            let (xl, xr) = (x.saturating_sub(1), (x + 1).min(w - 1));
            let gx = img.get(xr, y) - img.get(xl, y);
            let gy = img.get(x, yd) - img.get(x, yu);
            let m = (gx * gx + gy * gy).sqrt();
            if m == 0.0 {
                continue;
            }
            let mut theta = gy.atan2(gx);
            if theta < 0.0 {
                theta += PI;
            }
            if theta >= PI {
                theta -= PI;
            }
            let lo = ((theta / bin_width).floor() as usize).min(bins - 1);
            let hi = (lo + 1) % bins;
            let t1 = lo as f64 * bin_width;
            let t2 = t1 + bin_width;
            let to_lo = m * bins as f64 * (t2 - theta).abs() / PI;
            let to_hi = m * bins as f64 * (theta - t1).abs() / PI;
            let (v_lo, v_hi) = match split {
                VoteSplit::Interpolated => (to_lo, to_hi),
                VoteSplit::Literal => (to_hi, to_lo),
            };
            let p = ((y - oy) / patch) * cols + (x - ox) / patch;
            values[p * bins + lo] += v_lo;
            values[p * bins + hi] += v_hi;
            mass[p] += m;
        }
    }
    Ok((
        HogDescriptor {
            patch_rows: rows,
            patch_cols: cols,
            bins,
            values,
        },
        mass,
    ))
}
