//! Seeded artifact generators.
//!
//! Each generator maps a clean frame (two frames for tearing) plus a fresh [`Rng`]
//! to a corrupted frame and a [`GlitchSpec`] recording every sampled parameter.
//! Generators are pure: replaying a spec through [`replay`] reproduces the output
//! byte-for-byte. They expect a freshly seeded stream, since the spec only stores
//! the seed the stream was created from.

mod discoloration;
mod dotted;
mod morse;
mod parallel;
mod pixelation;
pub(crate) mod raster;
mod shader;
mod shapes;
mod stuttering;
mod tearing;
mod triangulation;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use discoloration::{glitch_discoloration, Blob, DiscolorationParams, DiscolorationRule};
pub use dotted::{
    glitch_dotted_radial, glitch_dotted_random, DottedRadialParams, DottedRandomParams, DottedSegment, RadialRay,
};
pub use morse::{glitch_morse, MorseParams, MorseRect, MorseRun};
pub use parallel::{glitch_parallel_lines, ParallelLine, ParallelLinesParams};
pub use pixelation::{glitch_line_pixelation, Halo, LinePixelationParams, Stripe};
pub use shader::{glitch_shader, ShaderParams, ShaderPolygon};
pub use shapes::{glitch_shapes, ShapesParams};
pub use stuttering::{glitch_stuttering, StutterMode, StutteringParams};
pub use tearing::{glitch_tearing, synthesize_second_frame, FallbackFrame, TearOrientation, TearingParams};
pub use triangulation::{glitch_triangulation, TriangulationParams};

use crate::imagecore::{Image, Rng};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ArtifactKind {
    Shader,
    Shapes,
    Discoloration,
    MorseCode,
    DottedLinesRandom,
    DottedLinesRadial,
    ParallelLines,
    Triangulation,
    LinePixelation,
    Stuttering,
    Tearing,
}

impl ArtifactKind {
    pub const ALL: [ArtifactKind; 11] = [
        ArtifactKind::Shader,
        ArtifactKind::Shapes,
        ArtifactKind::Discoloration,
        ArtifactKind::MorseCode,
        ArtifactKind::DottedLinesRandom,
        ArtifactKind::DottedLinesRadial,
        ArtifactKind::ParallelLines,
        ArtifactKind::Triangulation,
        ArtifactKind::LinePixelation,
        ArtifactKind::Stuttering,
        ArtifactKind::Tearing,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ArtifactKind::Shader => "shader",
            ArtifactKind::Shapes => "shapes",
            ArtifactKind::Discoloration => "discoloration",
            ArtifactKind::MorseCode => "morse_code",
            ArtifactKind::DottedLinesRandom => "dotted_lines_random",
            ArtifactKind::DottedLinesRadial => "dotted_lines_radial",
            ArtifactKind::ParallelLines => "parallel_lines",
            ArtifactKind::Triangulation => "triangulation",
            ArtifactKind::LinePixelation => "line_pixelation",
            ArtifactKind::Stuttering => "stuttering",
            ArtifactKind::Tearing => "tearing",
        }
    }

    pub fn needs_second_frame(self) -> bool {
        self == ArtifactKind::Tearing
    }
}

impl fmt::Display for ArtifactKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ArtifactKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let norm = s.trim().to_ascii_lowercase().replace('-', "_");
        ArtifactKind::ALL
            .into_iter()
            .find(|k| k.name() == norm)
            .ok_or_else(|| Error::UnknownKind(s.to_string()))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GlitchParams {
    Shader(ShaderParams),
    Shapes(ShapesParams),
    Discoloration(DiscolorationParams),
    MorseCode(MorseParams),
    DottedLinesRandom(DottedRandomParams),
    DottedLinesRadial(DottedRadialParams),
    ParallelLines(ParallelLinesParams),
    Triangulation(TriangulationParams),
    LinePixelation(LinePixelationParams),
    Stuttering(StutteringParams),
    Tearing(TearingParams),
}

/// Full provenance of one corruption.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GlitchSpec {
    pub kind: ArtifactKind,
    pub seed: u64,
    pub params: GlitchParams,
}

impl GlitchSpec {
    pub(crate) fn new(kind: ArtifactKind, rng: &Rng, params: GlitchParams) -> Self {
        GlitchSpec {
            kind,
            seed: rng.seed(),
            params,
        }
    }

    /// True when a tearing spec used a synthesized second frame.
    pub fn uses_synthetic_frame(&self) -> bool {
        matches!(&self.params, GlitchParams::Tearing(p) if p.fallback.is_some())
    }
}

#[derive(Clone, Copy, Debug)]
pub struct ApplyOptions {
    /// Synthesize a second frame for tearing when none is supplied.
    pub allow_tearing_fallback: bool,
}

impl Default for ApplyOptions {
    fn default() -> Self {
        ApplyOptions {
            allow_tearing_fallback: true,
        }
    }
}

/// Dispatch to the generator for `kind` with a stream seeded by `seed`.
pub fn apply(kind: ArtifactKind, img: &Image, aux: Option<&Image>, seed: u64) -> Result<(Image, GlitchSpec)> {
    apply_with(kind, img, aux, seed, ApplyOptions::default())
}

pub fn apply_with(
    kind: ArtifactKind,
    img: &Image,
    aux: Option<&Image>,
    seed: u64,
    opts: ApplyOptions,
) -> Result<(Image, GlitchSpec)> {
    let mut rng = Rng::new(seed);
    let rng = &mut rng;
    Ok(match kind {
        ArtifactKind::Shader => glitch_shader(img, rng),
        ArtifactKind::Shapes => glitch_shapes(img, rng),
        ArtifactKind::Discoloration => glitch_discoloration(img, rng),
        ArtifactKind::MorseCode => glitch_morse(img, rng),
        ArtifactKind::DottedLinesRandom => glitch_dotted_random(img, rng),
        ArtifactKind::DottedLinesRadial => glitch_dotted_radial(img, rng),
        ArtifactKind::ParallelLines => glitch_parallel_lines(img, rng),
        ArtifactKind::Triangulation => glitch_triangulation(img, rng),
        ArtifactKind::LinePixelation => glitch_line_pixelation(img, rng),
        ArtifactKind::Stuttering => glitch_stuttering(img, rng),
        ArtifactKind::Tearing => match aux {
            Some(b) => glitch_tearing(img, b, rng)?,
            None if opts.allow_tearing_fallback => {
                let (b, fallback) = synthesize_second_frame(img, rng);
                let (out, mut spec) = glitch_tearing(img, &b, rng)?;
                if let GlitchParams::Tearing(p) = &mut spec.params {
                    p.fallback = Some(fallback);
                }
                (out, spec)
            }
            None => return Err(Error::MissingAux),
        },
    })
}

/// Re-run the generator recorded in `spec`. A tearing spec that used a synthesized
/// second frame replays without `aux`.
pub fn replay(spec: &GlitchSpec, img: &Image, aux: Option<&Image>) -> Result<Image> {
    let aux = if spec.uses_synthetic_frame() { None } else { aux };
    let (out, again) = apply(spec.kind, img, aux, spec.seed)?;
    if again != *spec {
        return Err(Error::InvalidParameter(format!(
            "replay of {} (seed {}) did not reproduce the recorded parameters",
            spec.kind, spec.seed
        )));
    }
    Ok(out)
}

/// Integer in [ceil(lo_frac * n), floor(hi_frac * n)], falling back to the nearest
/// valid coordinate on tiny frames.
pub(crate) fn frac_int(rng: &mut Rng, n: usize, lo_frac: f64, hi_frac: f64) -> i64 {
    let lo = (lo_frac * n as f64).ceil() as i64;
    let hi = ((hi_frac * n as f64).floor() as i64).min(n as i64 - 1);
    if hi < lo {
        lo.min(n as i64 - 1)
    } else {
        rng.int(lo, hi)
    }
}


#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eleven_kinds_with_round_trip_names() {
        assert_eq!(ArtifactKind::ALL.len(), 11);
        for k in ArtifactKind::ALL {
            assert_eq!(k.name().parse::<ArtifactKind>().unwrap(), k);
            let json = serde_json::to_string(&k).unwrap();
            assert_eq!(json, format!("\"{}\"", k.name()));
        }
        assert!(matches!("plasma".parse::<ArtifactKind>(), Err(Error::UnknownKind(_))));
    }

    #[test]
    fn every_kind_is_deterministic_and_replayable() {
        let img = testimg::textured(96, 64);
        for kind in ArtifactKind::ALL {
            for seed in [0u64, 17, 9999] {
                let (a, spec) = apply(kind, &img, None, seed).unwrap();
                let (b, spec2) = apply(kind, &img, None, seed).unwrap();
                assert_eq!(a, b, "{kind}");
                assert_eq!(spec, spec2);
                assert_eq!(spec.kind, kind);
                assert_eq!(a.dims(), img.dims());
                let json = serde_json::to_string(&spec).unwrap();
                let back: GlitchSpec = serde_json::from_str(&json).unwrap();
                assert_eq!(replay(&back, &img, None).unwrap(), a);
            }
        }
    }

    #[test]
    fn tearing_without_aux_respects_options() {
        let img = testimg::textured(32, 32);
        let opts = ApplyOptions {
            allow_tearing_fallback: false,
        };
        assert!(matches!(
            apply_with(ArtifactKind::Tearing, &img, None, 1, opts),
            Err(Error::MissingAux)
        ));
        let (_, spec) = apply(ArtifactKind::Tearing, &img, None, 1).unwrap();
        assert!(spec.uses_synthetic_frame());
    }

    #[test]
    fn localized_generators_touch_under_half_the_frame() {
        let img = testimg::textured(320, 180);
        let local = [
            ArtifactKind::Shader,
            ArtifactKind::Shapes,
            ArtifactKind::Discoloration,
            ArtifactKind::MorseCode,
            ArtifactKind::DottedLinesRandom,
            ArtifactKind::DottedLinesRadial,
            ArtifactKind::ParallelLines,
            ArtifactKind::LinePixelation,
        ];
        let total = (320 * 180) as f64;
        for kind in local {
            for seed in 0..20 {
                let (out, _) = apply(kind, &img, None, seed).unwrap();
                let changed = out.diff_count(&img);
                assert!(changed >= 1, "{kind} seed {seed} changed nothing");
                assert!((changed as f64) < 0.5 * total, "{kind} seed {seed}: {changed}");
            }
        }
    }

    #[test]
    fn apply_stuttering_preserves_pixel_multiset() {
        let img = testimg::textured(64, 40);
        let (out, _) = apply(ArtifactKind::Stuttering, &img, None, 5).unwrap();
        let mut a = img.pixels().to_vec();
        let mut b = out.pixels().to_vec();
        a.sort();
        b.sort();
        assert_eq!(a, b);
    }
}
