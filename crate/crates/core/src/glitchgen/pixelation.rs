use serde::{Deserialize, Serialize};

use super::{ArtifactKind, GlitchParams, GlitchSpec};
use crate::imagecore::{Image, Rng};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Stripe {
    pub center: [f64; 2],
    pub angle_deg: f64,
    pub width: f64,
    pub length: f64,
}

impl Stripe {
    /// Whether the pixel center of (x, y) lies inside the stripe rectangle.
    pub fn contains(&self, x: usize, y: usize) -> bool {
        let (s, c) = self.angle_deg.to_radians().sin_cos();
        let dx = x as f64 + 0.5 - self.center[0];
        let dy = y as f64 + 0.5 - self.center[1];
        let along = dx * c + dy * s;
        let across = -dx * s + dy * c;
        along.abs() <= self.length / 2.0 && across.abs() <= self.width / 2.0
    }

    fn bounds(&self, w: usize, h: usize) -> (usize, usize, usize, usize) {
        let r = 0.5 * (self.length.powi(2) + self.width.powi(2)).sqrt() + 1.0;
        let x0 = (self.center[0] - r).floor().max(0.0) as usize;
        let y0 = (self.center[1] - r).floor().max(0.0) as usize;
        let x1 = ((self.center[0] + r).ceil().max(0.0) as usize).min(w);
        let y1 = ((self.center[1] + r).ceil().max(0.0) as usize).min(h);
        (x0, y0, x1, y1)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Halo {
    pub x: i64,
    pub y: i64,
    pub size: i64,
    pub boost: u8,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinePixelationParams {
    pub stripes: Vec<Stripe>,
    pub halos: Vec<Halo>,
}

/// Stripes of i.i.d. uniform RGB noise plus small brightened halo clusters.
pub fn glitch_line_pixelation(img: &Image, rng: &mut Rng) -> (Image, GlitchSpec) {
    let (w, h) = img.dims();
    let cap = (w.min(h) / 12).max(1) as i64;
    let mut out = img.clone();

    let count = rng.int(1, 4);
    let mut stripes = Vec::with_capacity(count as usize);
    for _ in 0..count {
        let stripe = Stripe {
            center: [rng.real(0.0, w as f64), rng.real(0.0, h as f64)],
            angle_deg: rng.real(0.0, 180.0),
            width: rng.int(4.min(cap), 20.min(cap)) as f64,
            length: rng.real(0.25, 0.75) * w.max(h) as f64,
        };
        let (x0, y0, x1, y1) = stripe.bounds(w, h);
        for y in y0..y1 {
            for x in x0..x1 {
                if stripe.contains(x, y) {
                    let noise = rng.color();
                    out.set(x, y, noise);
                }
            }
        }
        stripes.push(stripe);
    }

    let max_halos = (w * h / 400).min(50) as i64;
    let count = rng.int(0, max_halos);
    let mut halos = Vec::with_capacity(count as usize);
    for _ in 0..count {
        let halo = Halo {
            x: rng.int(0, w as i64 - 1),
            y: rng.int(0, h as i64 - 1),
            size: rng.int(1, 3.min(cap)),
            boost: rng.int(60, 120) as u8,
        };
        for y in halo.y..halo.y + halo.size {
            for x in halo.x..halo.x + halo.size {
                if out.contains(x, y) {
                    let px = out.get(x as usize, y as usize);
                    out.set(x as usize, y as usize, px.map(|v| v.saturating_add(halo.boost)));
                }
            }
        }
        halos.push(halo);
    }
    (
        out,
        GlitchSpec::new(
            ArtifactKind::LinePixelation,
            rng,
            GlitchParams::LinePixelation(LinePixelationParams { stripes, halos }),
        ),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::glitchgen::testimg::textured;

    #[test]
    fn stripes_are_noisy_and_changes_are_local() {
        let img = textured(240, 160);
        for seed in 0..30 {
            let (out, spec) = glitch_line_pixelation(&img, &mut Rng::new(seed));
            let GlitchParams::LinePixelation(p) = &spec.params else { unreachable!() };
            assert!((1..=4).contains(&p.stripes.len()));
            assert!(p.halos.len() <= 50);
            for stripe in &p.stripes {
                for c in 0..3 {
                    let vals: Vec<f64> = (0..160)
                        .flat_map(|y| (0..240).map(move |x| (x, y)))
                        .filter(|&(x, y)| stripe.contains(x, y))
                        .map(|(x, y)| out.get(x, y)[c] as f64)
                        .collect();
                    if vals.len() < 30 {
                        continue;
                    }
                    let n = vals.len() as f64;
                    let mean = vals.iter().sum::<f64>() / n;
                    let var = vals.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
                    assert!(var > 500.0, "seed {seed} channel {c}: {var}");
                }
            }
            for y in 0..160 {
                for x in 0..240 {
                    if img.get(x, y) != out.get(x, y) {
                        let in_stripe = p.stripes.iter().any(|s| s.contains(x, y));
                        let in_halo = p.halos.iter().any(|hl| {
                            (hl.x..hl.x + hl.size).contains(&(x as i64)) && (hl.y..hl.y + hl.size).contains(&(y as i64))
                        });
                        assert!(in_stripe || in_halo, "seed {seed}: ({x},{y})");
                    }
                }
            }
        }
    }
}
