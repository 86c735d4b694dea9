use serde::{Deserialize, Serialize};

use super::{ArtifactKind, GlitchParams, GlitchSpec};
use crate::imagecore::{Image, Rng};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TriangulationParams {
    pub full_frame: bool,
    /// Meshed region: x, y, width, height.
    pub region: [usize; 4],
    /// Edge length of the square cells, each split into two triangles.
    pub cell: usize,
}

impl TriangulationParams {
    /// Triangle index of pixel (x, y), or `None` outside the meshed region.
    ///
    /// Cells alternate their diagonal in a checkerboard; pixels on a diagonal belong
    /// to the second triangle of their cell.
    pub fn triangle_of(&self, x: usize, y: usize) -> Option<usize> {
        let [rx, ry, rw, rh] = self.region;
        if x < rx || y < ry || x >= rx + rw || y >= ry + rh {
            return None;
        }
        let (lx, ly) = (x - rx, y - ry);
        let (cx, cy) = (lx / self.cell, ly / self.cell);
        let (u, v) = (lx % self.cell, ly % self.cell);
        let cols = rw.div_ceil(self.cell);
        let second = if (cx + cy) % 2 == 0 {
            u + v + 1 >= self.cell
        } else {
            u >= v
        };
        Some((cy * cols + cx) * 2 + second as usize)
    }
}

/// Flat-shaded triangular mesh: each triangle is filled with its mean input color.
pub fn glitch_triangulation(img: &Image, rng: &mut Rng) -> (Image, GlitchSpec) {
    let (w, h) = img.dims();
    let full_frame = rng.chance(0.5);
    let region = if full_frame {
        [0, 0, w, h]
    } else {
        let rw = ((rng.real(0.5, 1.0) * w as f64).ceil() as usize).clamp(1, w);
        let rh = ((rng.real(0.5, 1.0) * h as f64).ceil() as usize).clamp(1, h);
        let rx = rng.int(0, (w - rw) as i64) as usize;
        let ry = rng.int(0, (h - rh) as i64) as usize;
        [rx, ry, rw, rh]
    };
    let cell = rng.int(20, 60) as usize;
    let params = TriangulationParams {
        full_frame,
        region,
        cell,
    };

    let [rx, ry, rw, rh] = region;
    let tris = rw.div_ceil(cell) * rh.div_ceil(cell) * 2;
    let mut sums = vec![[0u64; 3]; tris];
    let mut counts = vec![0u64; tris];
    for y in ry..ry + rh {
        for x in rx..rx + rw {
            let t = params.triangle_of(x, y).expect("inside region");
            let px = img.get(x, y);
            for c in 0..3 {
                sums[t][c] += px[c] as u64;
            }
            counts[t] += 1;
        }
    }
    let means: Vec<[u8; 3]> = sums
        .iter()
        .zip(&counts)
        .map(|(s, &n)| {
            if n == 0 {
                [0; 3]
            } else {
                let m = |c: usize| (s[c] as f64 / n as f64).round() as u8;
                [m(0), m(1), m(2)]
            }
        })
        .collect();
    let mut out = img.clone();
    for y in ry..ry + rh {
        for x in rx..rx + rw {
            out.set(x, y, means[params.triangle_of(x, y).expect("inside region")]);
        }
    }
    (
        out,
        GlitchSpec::new(ArtifactKind::Triangulation, rng, GlitchParams::Triangulation(params)),
    )
}
