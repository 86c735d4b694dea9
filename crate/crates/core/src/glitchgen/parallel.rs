use serde::{Deserialize, Serialize};

use super::raster::{line_points, stamp};
use super::{frac_int, ArtifactKind, GlitchParams, GlitchSpec};
use crate::imagecore::{Image, Rgb, Rng};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParallelLine {
    pub start: [i64; 2],
    pub length: f64,
    pub color: Rgb,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParallelLinesParams {
    /// Number of lines, N ~ U{60..100}.
    pub count: usize,
    /// Shared angle with the horizontal axis, degrees in [10, 35].
    pub theta_deg: f64,
    /// Line thickness t ~ U{1..3}.
    pub thickness: i64,
    pub lines: Vec<ParallelLine>,
}

/// Parallel segments at a common angle, each painted with the color of its own
/// starting pixel. Start points lie in [0.3W, 0.6W] x [0.2H, 0.8H].
pub fn glitch_parallel_lines(img: &Image, rng: &mut Rng) -> (Image, GlitchSpec) {
    let (w, h) = img.dims();
    let count = rng.int(60, 100) as usize;
    let theta_deg = rng.real(10.0, 35.0);
    let thickness = rng.int(1, 3);
    let (s, c) = theta_deg.to_radians().sin_cos();

    let mut out = img.clone();
    let mut lines = Vec::with_capacity(count);
    for _ in 0..count {
        let x0 = frac_int(rng, w, 0.3, 0.6);
        let y0 = frac_int(rng, h, 0.2, 0.8);
        let length = rng.real(0.1, 0.3) * w as f64;
        let color = img.get(x0 as usize, y0 as usize);
        // Image rows grow downward, so a positive angle climbs toward smaller y.
        let x1 = (x0 as f64 + length * c).round() as i64;
        let y1 = (y0 as f64 - length * s).round() as i64;
        for (x, y) in line_points(x0, y0, x1, y1) {
            stamp(&mut out, x, y, thickness, color);
        }
        lines.push(ParallelLine {
            start: [x0, y0],
            length,
            color,
        });
    }
    let params = ParallelLinesParams {
        count,
        theta_deg,
        thickness,
        lines,
    };
    (
        out,
        GlitchSpec::new(ArtifactKind::ParallelLines, rng, GlitchParams::ParallelLines(params)),
    )
}
