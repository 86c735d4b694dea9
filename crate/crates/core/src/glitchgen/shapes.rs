use serde::{Deserialize, Serialize};

use super::raster::{line_points, polygon_pixels};
use super::{ArtifactKind, GlitchParams, GlitchSpec};
use crate::imagecore::{luma, Image, Rgb, Rng};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShapesParams {
    /// Darkest rectangle found: x, y, width, height.
    pub region: [usize; 4],
    pub origin: [i64; 2],
    pub color: Rgb,
    pub polygons: Vec<Vec<[f64; 2]>>,
}

/// Thin dark polygons fanning out of a point inside the darkest rectangle.
pub fn glitch_shapes(img: &Image, rng: &mut Rng) -> (Image, GlitchSpec) {
    let (w, h) = img.dims();
    let rw = ((rng.real(0.1, 0.3) * w as f64).round() as usize).clamp(1, w);
    let rh = ((rng.real(0.1, 0.3) * h as f64).round() as usize).clamp(1, h);
    let (rx, ry) = darkest_rect(img, rw, rh);
    let ox = rx as i64 + rng.int(0, rw as i64 - 1);
    let oy = ry as i64 + rng.int(0, rh as i64 - 1);
    let color = [rng.int(8, 56) as u8, rng.int(8, 56) as u8, rng.int(8, 56) as u8];

    let mut out = img.clone();
    let n = rng.int(3, 8);
    let min_side = w.min(h) as f64;
    let origin = [ox as f64 + 0.5, oy as f64 + 0.5];
    let mut polygons = Vec::with_capacity(n as usize);
    for _ in 0..n {
        let angle = rng.real(0.0, std::f64::consts::TAU);
        let len = rng.real(0.08, 0.3) * min_side;
        let half_width = rng.real(1.0, 3.0);
        let (s, c) = angle.sin_cos();
        let end = [origin[0] + len * c, origin[1] + len * s];
        let perp = [-s * half_width, c * half_width];
        let poly = vec![
            origin,
            [end[0] + perp[0], end[1] + perp[1]],
            [end[0] - perp[0], end[1] - perp[1]],
        ];
        for (x, y) in polygon_pixels(&poly, w, h) {
            out.set(x, y, color);
        }
        // Keep the spine so very thin slivers still render.
        for (x, y) in line_points(ox, oy, end[0].floor() as i64, end[1].floor() as i64) {
            if out.contains(x, y) {
                out.set(x as usize, y as usize, color);
            }
        }
        polygons.push(poly);
    }
    let params = ShapesParams {
        region: [rx, ry, rw, rh],
        origin: [ox, oy],
        color,
        polygons,
    };
    (out, GlitchSpec::new(ArtifactKind::Shapes, rng, GlitchParams::Shapes(params)))
}

/// Top-left corner of the `rw` x `rh` window with minimum mean luma, searched on a
/// grid with stride a quarter of the shorter window side. Ties keep the first hit
/// in raster order.
fn darkest_rect(img: &Image, rw: usize, rh: usize) -> (usize, usize) {
    let (w, h) = img.dims();
    // Summed-area table with a zero border.
    let mut sat = vec![0.0f64; (w + 1) * (h + 1)];
    for y in 0..h {
        let mut run = 0.0;
        for x in 0..w {
            run += luma(img.get(x, y));
            sat[(y + 1) * (w + 1) + x + 1] = sat[y * (w + 1) + x + 1] + run;
        }
    }
    let sum = |x: usize, y: usize| {
        let a = sat[y * (w + 1) + x];
        let b = sat[y * (w + 1) + x + rw];
        let c = sat[(y + rh) * (w + 1) + x];
        let d = sat[(y + rh) * (w + 1) + x + rw];
        d - b - c + a
    };
    let step = (rw.min(rh) / 4).max(1);
    let mut best = (0, 0);
    let mut best_sum = f64::INFINITY;
    for y in (0..=h - rh).step_by(step) {
        for x in (0..=w - rw).step_by(step) {
            let s = sum(x, y);
            if s < best_sum - 1e-9 {
                best_sum = s;
                best = (x, y);
            }
        }
    }
    best
}
