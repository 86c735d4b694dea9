use serde::{Deserialize, Serialize};

use super::{ArtifactKind, GlitchParams, GlitchSpec};
use crate::imagecore::{Image, Rgb, Rng};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MorseRect {
    pub x: i64,
    pub len: i64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MorseRun {
    pub y: i64,
    pub height: i64,
    pub rects: Vec<MorseRect>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MorseParams {
    pub color: Rgb,
    pub runs: Vec<MorseRun>,
}

/// Short horizontal runs of dots and dashes in one solid color, as left behind by
/// stuck memory cells.
pub fn glitch_morse(img: &Image, rng: &mut Rng) -> (Image, GlitchSpec) {
    let (w, h) = img.dims();
    let color = rng.color();
    let mut out = img.clone();
    let count = rng.int(8, 30);
    let mut runs = Vec::with_capacity(count as usize);
    for _ in 0..count {
        let height = rng.int(1, 2);
        let y = rng.int(0, h as i64 - height);
        let mut x = rng.int(0, w as i64 - 1);
        let symbols = rng.int(5, 15);
        let mut rects = Vec::with_capacity(symbols as usize);
        for _ in 0..symbols {
            let len = if rng.chance(0.5) {
                rng.int((2 * height).max(2), 4)
            } else {
                rng.int(6, 12)
            };
            rects.push(MorseRect { x, len });
            x += len + rng.int(2, 4);
        }
        for r in &rects {
            for yy in y..y + height {
                for xx in r.x..r.x + r.len {
                    if out.contains(xx, yy) {
                        out.set(xx as usize, yy as usize, color);
                    }
                }
            }
        }
        runs.push(MorseRun { y, height, rects });
    }
    (
        out,
        GlitchSpec::new(ArtifactKind::MorseCode, rng, GlitchParams::MorseCode(MorseParams { color, runs })),
    )
}
