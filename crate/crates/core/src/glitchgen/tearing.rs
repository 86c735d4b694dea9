use serde::{Deserialize, Serialize};

use super::{ArtifactKind, GlitchParams, GlitchSpec};
use crate::imagecore::{Image, Rng};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TearOrientation {
    Rows,
    Columns,
}

/// How a missing second frame was synthesized from the first.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FallbackFrame {
    pub brightness: f64,
    pub shift: [i64; 2],
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TearingParams {
    pub orientation: TearOrientation,
    /// (start, length) of each span copied from the second frame.
    pub spans: Vec<[usize; 2]>,
    /// Present when the second frame was synthesized rather than supplied.
    pub fallback: Option<FallbackFrame>,
}

impl TearingParams {
    /// Whether row (or column) `i` comes from the second frame.
    pub fn from_second(&self, i: usize) -> bool {
        self.spans.iter().any(|&[s, l]| i >= s && i < s + l)
    }
}

/// Stand-in for a temporally distant frame: a 5% brightness change plus an
/// 8-pixel translation with edge clamping.
pub fn synthesize_second_frame(img: &Image, rng: &mut Rng) -> (Image, FallbackFrame) {
    let brightness = if rng.chance(0.5) { 1.05 } else { 0.95 };
    let shift = match rng.int(0, 3) {
        0 => [8, 0],
        1 => [-8, 0],
        2 => [0, 8],
        _ => [0, -8],
    };
    let (w, h) = img.dims();
    let out = Image::from_fn(w, h, |x, y| {
        let sx = (x as i64 - shift[0]).clamp(0, w as i64 - 1) as usize;
        let sy = (y as i64 - shift[1]).clamp(0, h as i64 - 1) as usize;
        img.get(sx, sy)
            .map(|v| (v as f64 * brightness).round().clamp(0.0, 255.0) as u8)
    })
    .expect("same dimensions as a valid image");
    (out, FallbackFrame { brightness, shift })
}

/// Replaces 1-3 contiguous spans of rows (or columns), 20-60% of the frame in
/// total, with the matching lines of `frame_b`.
pub fn glitch_tearing(frame_a: &Image, frame_b: &Image, rng: &mut Rng) -> Result<(Image, GlitchSpec)> {
    if frame_a.dims() != frame_b.dims() {
        return Err(Error::DimensionMismatch {
            expected: frame_a.width() * frame_a.height(),
            actual: frame_b.width() * frame_b.height(),
        });
    }
    let (w, h) = frame_a.dims();
    let orientation = if rng.chance(0.5) {
        TearOrientation::Rows
    } else {
        TearOrientation::Columns
    };
    let dim = match orientation {
        TearOrientation::Rows => h,
        TearOrientation::Columns => w,
    };
    let total = ((rng.real(0.2, 0.6) * dim as f64).round() as usize).clamp(1, dim);
    let k = (rng.int(1, 3) as usize).min(total);

    // k positive lengths summing to `total`.
    let mut cuts: Vec<usize> = Vec::with_capacity(k + 1);
    while cuts.len() < k - 1 {
        let c = rng.int(1, total as i64 - 1) as usize;
        if !cuts.contains(&c) {
            cuts.push(c);
        }
    }
    cuts.push(0);
    cuts.push(total);
    cuts.sort_unstable();
    let lengths: Vec<usize> = cuts.windows(2).map(|p| p[1] - p[0]).collect();

    // k+1 non-negative gaps summing to the remainder.
    let free = dim - total;
    let mut gcuts: Vec<usize> = (0..k).map(|_| rng.int(0, free as i64) as usize).collect();
    gcuts.push(0);
    gcuts.push(free);
    gcuts.sort_unstable();
    let gaps: Vec<usize> = gcuts.windows(2).map(|p| p[1] - p[0]).collect();

    let mut spans = Vec::with_capacity(k);
    let mut pos = 0;
    for (i, &len) in lengths.iter().enumerate() {
        pos += gaps[i];
        spans.push([pos, len]);
        pos += len;
    }
    let params = TearingParams {
        orientation,
        spans,
        fallback: None,
    };

    let mut out = frame_a.clone();
    for y in 0..h {
        for x in 0..w {
            let line = match orientation {
                TearOrientation::Rows => y,
                TearOrientation::Columns => x,
            };
            if params.from_second(line) {
                out.set(x, y, frame_b.get(x, y));
            }
        }
    }
    Ok((out, GlitchSpec::new(ArtifactKind::Tearing, rng, GlitchParams::Tearing(params))))
}
