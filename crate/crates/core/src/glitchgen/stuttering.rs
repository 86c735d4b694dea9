use serde::{Deserialize, Serialize};

use super::{ArtifactKind, GlitchParams, GlitchSpec};
use crate::imagecore::{Image, Rng};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StutterMode {
    /// First pass over the whole frame, second pass over a sub-band.
    FullFrame,
    /// Both passes over independent sub-bands.
    Band,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StutteringParams {
    pub mode: StutterMode,
    /// Region of the forward pass (columns then rows): x, y, width, height.
    pub forward: [usize; 4],
    /// Region of the reverse pass (rows then columns, pairs offset by one).
    pub reverse: [usize; 4],
}

fn random_band(rng: &mut Rng, w: usize, h: usize) -> [usize; 4] {
    let bw = ((rng.real(0.2, 0.6) * w as f64).round() as usize).clamp(2, w);
    let bh = ((rng.real(0.2, 0.6) * h as f64).round() as usize).clamp(2, h);
    let x = rng.int(0, (w - bw) as i64) as usize;
    let y = rng.int(0, (h - bh) as i64) as usize;
    [x, y, bw, bh]
}

fn swap_columns(img: &mut Image, region: [usize; 4], offset: usize) {
    let [x0, y0, w, h] = region;
    let mut x = x0 + offset;
    while x + 1 < x0 + w {
        for y in y0..y0 + h {
            let a = img.get(x, y);
            let b = img.get(x + 1, y);
            img.set(x, y, b);
            img.set(x + 1, y, a);
        }
        x += 2;
    }
}

fn swap_rows(img: &mut Image, region: [usize; 4], offset: usize) {
    let [x0, y0, w, h] = region;
    let mut y = y0 + offset;
    while y + 1 < y0 + h {
        for x in x0..x0 + w {
            let a = img.get(x, y);
            let b = img.get(x, y + 1);
            img.set(x, y, b);
            img.set(x, y + 1, a);
        }
        y += 2;
    }
}

/// Swaps neighboring columns then rows in one direction, then rows then columns
/// with the pairing shifted by one in the other direction. Every step is a pixel
/// permutation.
pub fn glitch_stuttering(img: &Image, rng: &mut Rng) -> (Image, GlitchSpec) {
    let (w, h) = img.dims();
    let mode = if rng.chance(0.5) {
        StutterMode::FullFrame
    } else {
        StutterMode::Band
    };
    let forward = match mode {
        StutterMode::FullFrame => [0, 0, w, h],
        StutterMode::Band => random_band(rng, w, h),
    };
    let reverse = random_band(rng, w, h);

    let mut out = img.clone();
    swap_columns(&mut out, forward, 0);
    swap_rows(&mut out, forward, 0);
    swap_rows(&mut out, reverse, 1);
    swap_columns(&mut out, reverse, 1);
    let params = StutteringParams {
        mode,
        forward,
        reverse,
    };
    (
        out,
        GlitchSpec::new(ArtifactKind::Stuttering, rng, GlitchParams::Stuttering(params)),
    )
}
