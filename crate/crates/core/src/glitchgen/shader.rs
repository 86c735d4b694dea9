use serde::{Deserialize, Serialize};

use super::raster::polygon_pixels;
use super::{ArtifactKind, GlitchParams, GlitchSpec};
use crate::imagecore::{Image, Rgb, Rng};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShaderPolygon {
    pub anchor: [i64; 2],
    pub vertices: Vec<[f64; 2]>,
    /// Starting color, offset from the anchor pixel's color.
    pub color: Rgb,
    /// Direction of the intensity fade, degrees.
    pub direction_deg: f64,
    /// Fraction of intensity lost at the far end of the polygon.
    pub fade: f64,
    pub extent: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShaderParams {
    pub polygons: Vec<ShaderPolygon>,
}

/// Polygons whose color starts near the anchor pixel's color and fades in
/// intensity along a random direction.
pub fn glitch_shader(img: &Image, rng: &mut Rng) -> (Image, GlitchSpec) {
    let (w, h) = img.dims();
    let mut out = img.clone();
    let count = rng.int(1, 4);
    let mut polygons = Vec::with_capacity(count as usize);
    for _ in 0..count {
        let ax = rng.int(0, w as i64 - 1);
        let ay = rng.int(0, h as i64 - 1);
        let radius = (rng.real(0.04, 0.12) * w.min(h) as f64).max(2.0);
        let edges = rng.int(3, 8) as usize;

        let mut angles: Vec<f64> = (0..edges).map(|_| rng.real(0.0, std::f64::consts::TAU)).collect();
        angles.sort_by(|a, b| a.total_cmp(b));
        let center = [ax as f64 + 0.5, ay as f64 + 0.5];
        let vertices: Vec<[f64; 2]> = angles
            .iter()
            .map(|&t| {
                let r = radius * rng.real(0.4, 1.0);
                [center[0] + r * t.cos(), center[1] + r * t.sin()]
            })
            .collect();

        let anchor_px = img.get(ax as usize, ay as usize);
        let mut color = [0u8; 3];
        for c in 0..3 {
            let delta = rng.int(20, 60);
            let v = anchor_px[c] as i64;
            color[c] = if v > 127 { v - delta } else { v + delta } as u8;
        }
        let direction_deg = rng.real(0.0, 360.0);
        let fade = rng.real(0.3, 0.8);

        let mut pixels = polygon_pixels(&vertices, w, h);
        pixels.push((ax as usize, ay as usize));
        let (dy, dx) = direction_deg.to_radians().sin_cos();
        for (x, y) in pixels {
            let proj = (x as f64 - ax as f64) * dx + (y as f64 - ay as f64) * dy;
            let t = (proj / radius).clamp(0.0, 1.0);
            let k = 1.0 - fade * t;
            let px = [
                (color[0] as f64 * k).round() as u8,
                (color[1] as f64 * k).round() as u8,
                (color[2] as f64 * k).round() as u8,
            ];
            out.set(x, y, px);
        }
        polygons.push(ShaderPolygon {
            anchor: [ax, ay],
            vertices,
            color,
            direction_deg,
            fade,
            extent: radius,
        });
    }
    let spec = GlitchSpec::new(ArtifactKind::Shader, rng, GlitchParams::Shader(ShaderParams { polygons }));
    (out, spec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::glitchgen::testimg::textured;

    #[test]
    fn changes_are_confined_to_polygons() {
        let img = textured(200, 120);
        let mut max_frac: f64 = 0.0;
        for seed in 0..100 {
            let (out, spec) = glitch_shader(&img, &mut Rng::new(seed));
            let GlitchParams::Shader(p) = &spec.params else { unreachable!() };
            assert!((1..=4).contains(&p.polygons.len()));
            let mut inside = vec![false; 200 * 120];
            for poly in &p.polygons {
                for (x, y) in polygon_pixels(&poly.vertices, 200, 120) {
                    inside[y * 200 + x] = true;
                }
                inside[poly.anchor[1] as usize * 200 + poly.anchor[0] as usize] = true;
            }
            let mut changed = 0;
            for (i, (a, b)) in img.pixels().iter().zip(out.pixels()).enumerate() {
                if a != b {
                    changed += 1;
                    assert!(inside[i], "seed {seed}: change outside polygons");
                }
            }
            assert!(changed >= 1);
            max_frac = max_frac.max(changed as f64 / (200.0 * 120.0));
        }
        assert!(max_frac <= 0.4, "{max_frac}");
    }

    #[test]
    fn anchor_takes_the_start_color() {
        let img = textured(100, 80);
        let (out, spec) = glitch_shader(&img, &mut Rng::new(3));
        let GlitchParams::Shader(p) = &spec.params else { unreachable!() };
        let last = p.polygons.last().unwrap();
        assert_eq!(out.get(last.anchor[0] as usize, last.anchor[1] as usize), last.color);
        for c in 0..3 {
            let orig = img.get(last.anchor[0] as usize, last.anchor[1] as usize)[c] as i64;
            assert!((orig - last.color[c] as i64).abs() >= 20);
        }
    }
}
