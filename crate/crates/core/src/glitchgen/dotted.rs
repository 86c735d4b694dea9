use serde::{Deserialize, Serialize};

use super::raster::stamp;
use super::{ArtifactKind, GlitchParams, GlitchSpec};
use crate::imagecore::{Image, Rgb, Rng};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DottedSegment {
    pub start: [f64; 2],
    pub angle_deg: f64,
    pub length: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DottedRandomParams {
    pub color: Rgb,
    pub dot: i64,
    pub gap: i64,
    pub segments: Vec<DottedSegment>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RadialRay {
    pub angle_deg: f64,
    pub length: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DottedRadialParams {
    pub color: Rgb,
    pub dot: i64,
    pub gap: i64,
    pub origin: [f64; 2],
    pub rays: Vec<RadialRay>,
}

/// Dots of `dot` x `dot` pixels every `dot + gap` pixels along a ray.
fn draw_dotted(out: &mut Image, start: [f64; 2], angle_deg: f64, length: f64, dot: i64, gap: i64, color: Rgb) {
    let (s, c) = angle_deg.to_radians().sin_cos();
    let step = (dot + gap) as f64;
    let mut t = 0.0;
    while t <= length {
        let x = (start[0] + t * c).floor() as i64;
        let y = (start[1] + t * s).floor() as i64;
        stamp(out, x, y, dot, color);
        t += step;
    }
}

fn dot_style(rng: &mut Rng) -> (Rgb, i64, i64) {
    (rng.color(), rng.int(1, 2), rng.int(3, 6))
}

/// Dotted segments with random slopes, starting away from the frame edges.
pub fn glitch_dotted_random(img: &Image, rng: &mut Rng) -> (Image, GlitchSpec) {
    let (w, h) = img.dims();
    let (color, dot, gap) = dot_style(rng);
    let mut out = img.clone();
    let count = rng.int(5, 25);
    let min_side = w.min(h) as f64;
    let mut segments = Vec::with_capacity(count as usize);
    for _ in 0..count {
        let start = [rng.real(0.1, 0.9) * w as f64, rng.real(0.1, 0.9) * h as f64];
        let angle_deg = rng.real(0.0, 360.0);
        let length = rng.real(0.1, 0.4) * min_side;
        draw_dotted(&mut out, start, angle_deg, length, dot, gap, color);
        segments.push(DottedSegment {
            start,
            angle_deg,
            length,
        });
    }
    let params = DottedRandomParams {
        color,
        dot,
        gap,
        segments,
    };
    (
        out,
        GlitchSpec::new(ArtifactKind::DottedLinesRandom, rng, GlitchParams::DottedLinesRandom(params)),
    )
}

/// Dotted rays emanating from one origin.
pub fn glitch_dotted_radial(img: &Image, rng: &mut Rng) -> (Image, GlitchSpec) {
    let (w, h) = img.dims();
    let (color, dot, gap) = dot_style(rng);
    let origin = [rng.real(0.1, 0.9) * w as f64, rng.real(0.1, 0.9) * h as f64];
    let mut out = img.clone();
    let count = rng.int(5, 25);
    let min_side = w.min(h) as f64;
    let mut rays = Vec::with_capacity(count as usize);
    for _ in 0..count {
        let angle_deg = rng.real(0.0, 360.0);
        let length = rng.real(0.1, 0.4) * min_side;
        draw_dotted(&mut out, origin, angle_deg, length, dot, gap, color);
        rays.push(RadialRay { angle_deg, length });
    }
    let params = DottedRadialParams {
        color,
        dot,
        gap,
        origin,
        rays,
    };
    (
        out,
        GlitchSpec::new(ArtifactKind::DottedLinesRadial, rng, GlitchParams::DottedLinesRadial(params)),
    )
}
