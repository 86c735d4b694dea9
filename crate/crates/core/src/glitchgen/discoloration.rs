use serde::{Deserialize, Serialize};

use super::raster::ellipse_pixels;
use super::{ArtifactKind, GlitchParams, GlitchSpec};
use crate::imagecore::{Image, Rng};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DiscolorationRule {
    /// The forced value lies above the threshold.
    Above,
    /// The forced value lies below the threshold.
    Below,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Blob {
    pub center: [f64; 2],
    pub radii: [f64; 2],
    pub angle_deg: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiscolorationParams {
    pub channel: usize,
    pub rule: DiscolorationRule,
    pub threshold: u8,
    pub value: u8,
    pub blobs: Vec<Blob>,
}

/// Forces one color channel to a fixed value inside a few elliptical blobs.
pub fn glitch_discoloration(img: &Image, rng: &mut Rng) -> (Image, GlitchSpec) {
    let (w, h) = img.dims();
    let channel = rng.index(3);
    let rule = if rng.chance(0.5) {
        DiscolorationRule::Above
    } else {
        DiscolorationRule::Below
    };
    let threshold = rng.int(100, 200);
    let value = match rule {
        DiscolorationRule::Above => rng.int((threshold + 40).min(255), 255),
        DiscolorationRule::Below => rng.int(0, (threshold - 40).max(0)),
    } as u8;

    let mut out = img.clone();
    let count = rng.int(1, 5);
    let min_side = w.min(h) as f64;
    let mut blobs = Vec::with_capacity(count as usize);
    for _ in 0..count {
        let center = [rng.real(0.0, w as f64), rng.real(0.0, h as f64)];
        let radii = [
            (rng.real(0.03, 0.1) * min_side).max(1.0),
            (rng.real(0.03, 0.1) * min_side).max(1.0),
        ];
        let angle_deg = rng.real(0.0, 180.0);
        let mut pixels = ellipse_pixels(center, radii, angle_deg.to_radians(), w, h);
        pixels.push((
            (center[0] as usize).min(w - 1),
            (center[1] as usize).min(h - 1),
        ));
        for (x, y) in pixels {
            let mut px = out.get(x, y);
            px[channel] = value;
            out.set(x, y, px);
        }
        blobs.push(Blob {
            center,
            radii,
            angle_deg,
        });
    }
    let params = DiscolorationParams {
        channel,
        rule,
        threshold: threshold as u8,
        value,
        blobs,
    };
    (
        out,
        GlitchSpec::new(ArtifactKind::Discoloration, rng, GlitchParams::Discoloration(params)),
    )
}
