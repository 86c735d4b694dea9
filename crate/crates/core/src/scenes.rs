//! Procedural stand-ins for clean gameplay frames.
//!
//! Each source is a side-scrolling world with its own palette, horizon, skyline
//! and props; frames are views at increasing camera offsets, so consecutive frames
//! of one source look like neighbouring frames of one video. Rendering is
//! anti-aliased by a final blur and otherwise noise-free, like an engine's frame buffer.

use crate::imagecore::{child_seed, Image, Rgb};
use crate::{Result, Rng};

type Color = [f32; 3];

#[derive(Clone, Debug)]
enum Prop {
    Building {
        x0: f32,
        width: f32,
        height: f32,
        color: Color,
        window: Color,
        spacing: f32,
    },
    Blob {
        cx: f32,
        cy: f32,
        rx: f32,
        ry: f32,
        color: Color,
    },
    Pole {
        x0: f32,
        width: f32,
        height: f32,
        color: Color,
    },
}

/// One source's world.
#[derive(Clone, Debug)]
pub struct SceneStyle {
    seed: u64,
    sky_top: Color,
    sky_bottom: Color,
    ground_near: Color,
    ground_far: Color,
    horizon: f32,
    speed: f32,
    world_width: f32,
    props: Vec<Prop>,
    hud: Option<Color>,
}

fn hsv(rng: &mut Rng, h: (f64, f64), s: (f64, f64), v: (f64, f64)) -> Color {
    let h = rng.real(h.0, h.1).rem_euclid(360.0);
    let s = rng.real(s.0, s.1);
    let v = rng.real(v.0, v.1);
    let c = v * s;
    let x = c * (1.0 - ((h / 60.0) % 2.0 - 1.0).abs());
    let m = v - c;
    let (r, g, b) = match (h / 60.0) as u32 {
        0 => (c, x, 0.0),
        1 => (x, c, 0.0),
        2 => (0.0, c, x),
        3 => (0.0, x, c),
        4 => (x, 0.0, c),
        _ => (c, 0.0, x),
    };
    [((r + m) * 255.0) as f32, ((g + m) * 255.0) as f32, ((b + m) * 255.0) as f32]
}

impl SceneStyle {
    /// The world of source `index` for a corpus seed. Sizes are relative to the
    /// frame so one style renders consistently at any resolution.
    pub fn new(corpus_seed: u64, index: u64, width: usize, height: usize) -> SceneStyle {
        let seed = child_seed(corpus_seed, index);
        let mut rng = Rng::new(seed);
        let (w, h) = (width as f32, height as f32);
        let hue = rng.real(0.0, 360.0);
        let sky_top = hsv(&mut rng, (hue + 180.0, hue + 240.0), (0.3, 0.6), (0.45, 0.8));
        let sky_bottom = hsv(&mut rng, (hue + 150.0, hue + 210.0), (0.1, 0.35), (0.7, 0.95));
        let ground_near = hsv(&mut rng, (hue - 20.0, hue + 20.0), (0.25, 0.55), (0.25, 0.5));
        let ground_far = hsv(&mut rng, (hue - 30.0, hue + 30.0), (0.15, 0.4), (0.45, 0.7));
        let horizon = rng.real(0.4, 0.65) as f32;
        let world_width = 5.0 * w;
        let mut props = Vec::new();
        let n = rng.int(40, 70);
        for _ in 0..n {
            let x0 = rng.real(0.0, world_width as f64) as f32;
            let base_hue = hue + rng.real(-60.0, 60.0);
            match rng.int(0, 5) {
                0..=2 => props.push(Prop::Building {
                    x0,
                    width: rng.real(0.04, 0.14) as f32 * w,
                    height: rng.real(0.1, 0.45) as f32 * h,
                    color: hsv(&mut rng, (base_hue, base_hue + 30.0), (0.05, 0.35), (0.3, 0.75)),
                    window: hsv(&mut rng, (40.0, 60.0), (0.2, 0.5), (0.55, 0.9)),
                    spacing: rng.real(0.012, 0.03) as f32 * w,
                }),
                3 | 4 => props.push(Prop::Blob {
                    cx: x0,
                    cy: horizon * h + rng.real(-0.05, 0.3) as f32 * h,
                    rx: rng.real(0.02, 0.08) as f32 * w,
                    ry: rng.real(0.03, 0.1) as f32 * h,
                    color: hsv(&mut rng, (base_hue - 90.0, base_hue - 40.0), (0.25, 0.55), (0.2, 0.55)),
                }),
                _ => props.push(Prop::Pole {
                    x0,
                    width: rng.real(0.003, 0.008) as f32 * w,
                    height: rng.real(0.2, 0.5) as f32 * h,
                    color: hsv(&mut rng, (0.0, 360.0), (0.0, 0.2), (0.15, 0.4)),
                }),
            }
        }
        let hud = rng.chance(0.6).then(|| hsv(&mut rng, (0.0, 360.0), (0.3, 0.6), (0.6, 0.9)));
        SceneStyle {
            seed,
            sky_top,
            sky_bottom,
            ground_near,
            ground_far,
            horizon,
            speed: rng.real(0.02, 0.06) as f32 * w,
            world_width,
            props,
            hud,
        }
    }

    /// Frame `index` of this world at `width x height`.
    pub fn render(&self, index: u64, width: usize, height: usize) -> Result<Image> {
        let (w, h) = (width as f32, height as f32);
        let span = self.world_width - w;
        let pan = (index as f32 * self.speed) % span;
        let horizon = self.horizon * h;
        let mut buf: Vec<Color> = vec![[0.0; 3]; width * height];
        let cloud_seed = self.seed ^ 0x5eed;
        let ground_seed = self.seed ^ 0x9e37;
        for y in 0..height {
            let fy = y as f32 + 0.5;
            for x in 0..width {
                let wx = x as f32 + 0.5 + pan;
                let px = if fy < horizon {
                    let t = fy / horizon;
                    let cloud = fbm(cloud_seed, (wx * 0.5 + pan * 0.5) / (0.15 * w), fy / (0.08 * h), 3);
                    let c = mix(self.sky_top, self.sky_bottom, t);
                    mix(c, [240.0, 240.0, 245.0], (cloud - 0.55).max(0.0) * 1.2)
                } else {
                    let depth = ((fy - horizon) / (h - horizon)).clamp(0.0, 1.0);
                    let scale = 0.01 + 0.05 * depth;
                    let tex = fbm(ground_seed, wx / (scale * w), fy / (scale * h * 0.6), 3);
                    let c = mix(self.ground_far, self.ground_near, depth);
                    shade(c, 0.8 + 0.4 * tex)
                };
                buf[y * width + x] = px;
            }
        }
        for prop in &self.props {
            self.draw_prop(prop, pan, width, height, &mut buf);
        }
        if let Some(color) = self.hud {
            let level = 0.3 + 0.6 * hash01(self.seed, index as i64, 7);
            let (bx, by, bw, bh) = (0.03 * w, 0.04 * h, 0.2 * w, 0.025 * h);
            fill_rect(&mut buf, width, height, bx - 2.0, by - 2.0, bw + 4.0, bh + 4.0, |_, _| [30.0, 30.0, 34.0]);
            fill_rect(&mut buf, width, height, bx, by, bw * level, bh, |_, _| color);
        }

        let data: Vec<Rgb> = blur(&buf, width, height)
            .into_iter()
            .map(|c| c.map(|v| v.round().clamp(0.0, 255.0) as u8))
            .collect();
        Image::new(width, height, data)
    }

    fn draw_prop(&self, prop: &Prop, pan: f32, width: usize, height: usize, buf: &mut [Color]) {
        let h = height as f32;
        let ground = self.horizon * h;
        match *prop {
            Prop::Building {
                x0,
                width: bw,
                height: bh,
                color,
                window,
                spacing,
            } => {
                let x = x0 - pan;
                let top = ground - bh;
                fill_rect(buf, width, height, x, top, bw, bh + 0.01 * h, |px, py| {
                    let (lx, ly) = (px - x, py - top);
                    let col = (lx / spacing).floor();
                    let row = (ly / spacing).floor();
                    let in_cell = lx % spacing > spacing * 0.35 && ly % spacing > spacing * 0.35;
                    let lit = hash01(col as u64 ^ x0.to_bits() as u64, row as i64, 3) > 0.45;
                    if in_cell && lx > spacing * 0.5 && lx < bw - spacing * 0.5 && ly > spacing {
                        if lit {
                            window
                        } else {
                            shade(color, 0.6)
                        }
                    } else {
                        shade(color, 0.9 + 0.2 * (lx / bw))
                    }
                });
            }
            Prop::Blob { cx, cy, rx, ry, color } => {
                let x = cx - pan;
                fill_rect(buf, width, height, x - rx, cy - ry, 2.0 * rx, 2.0 * ry, |px, py| {
                    let (dx, dy) = ((px - x) / rx, (py - cy) / ry);
                    let r2 = dx * dx + dy * dy;
                    if r2 <= 1.0 {
                        shade(color, 1.15 - 0.35 * (dx + dy + 1.0).clamp(0.0, 2.0) / 2.0)
                    } else {
                        [f32::NAN; 3]
                    }
                });
            }
            Prop::Pole {
                x0,
                width: pw,
                height: ph,
                color,
            } => {
                fill_rect(buf, width, height, x0 - pan, ground - ph, pw, ph, |_, _| color);
            }
        }
    }
}

/// Paint pixels whose centers fall in the rectangle; NaN colors leave the pixel untouched.
#[allow(clippy::too_many_arguments)]
fn fill_rect(
    buf: &mut [Color],
    width: usize,
    height: usize,
    x: f32,
    y: f32,
    w: f32,
    h: f32,
    mut color: impl FnMut(f32, f32) -> Color,
) {
    let x0 = (x - 0.5).ceil().max(0.0) as usize;
    let y0 = (y - 0.5).ceil().max(0.0) as usize;
    let x1 = ((x + w - 0.5).floor() + 1.0).clamp(0.0, width as f32) as usize;
    let y1 = ((y + h - 0.5).floor() + 1.0).clamp(0.0, height as f32) as usize;
    for py in y0..y1 {
        for px in x0..x1 {
            let c = color(px as f32 + 0.5, py as f32 + 0.5);
            if !c[0].is_nan() {
                buf[py * width + px] = c;
            }
        }
    }
}

fn mix(a: Color, b: Color, t: f32) -> Color {
    let t = t.clamp(0.0, 1.0);
    [a[0] + (b[0] - a[0]) * t, a[1] + (b[1] - a[1]) * t, a[2] + (b[2] - a[2]) * t]
}

fn shade(c: Color, f: f32) -> Color {
    c.map(|v| v * f)
}

fn hash01(seed: u64, x: i64, y: i64) -> f32 {
    let mut z = seed ^ (x as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ (y as u64).wrapping_mul(0xC2B2_AE3D_27D4_EB4F);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^= z >> 31;
    (z >> 40) as f32 / (1u64 << 24) as f32
}

fn value_noise(seed: u64, x: f32, y: f32) -> f32 {
    let (xi, yi) = (x.floor(), y.floor());
    let (fx, fy) = (x - xi, y - yi);
    let (sx, sy) = (fx * fx * (3.0 - 2.0 * fx), fy * fy * (3.0 - 2.0 * fy));
    let (xi, yi) = (xi as i64, yi as i64);
    let a = hash01(seed, xi, yi);
    let b = hash01(seed, xi + 1, yi);
    let c = hash01(seed, xi, yi + 1);
    let d = hash01(seed, xi + 1, yi + 1);
    let top = a + (b - a) * sx;
    let bottom = c + (d - c) * sx;
    top + (bottom - top) * sy
}

fn fbm(seed: u64, x: f32, y: f32, octaves: u32) -> f32 {
    let (mut sum, mut amp, mut freq, mut norm) = (0.0, 1.0, 1.0, 0.0);
    for o in 0..octaves {
        sum += amp * value_noise(seed.wrapping_add(o as u64), x * freq, y * freq);
        norm += amp;
        amp *= 0.5;
        freq *= 2.0;
    }
    sum / norm
}

/// Separable [1 2 1] / 4 blur with clamped borders.
fn blur(buf: &[Color], width: usize, height: usize) -> Vec<Color> {
    let mut tmp = vec![[0.0f32; 3]; buf.len()];
    for y in 0..height {
        for x in 0..width {
            let l = buf[y * width + x.saturating_sub(1)];
            let c = buf[y * width + x];
            let r = buf[y * width + (x + 1).min(width - 1)];
            tmp[y * width + x] = [0, 1, 2].map(|k| 0.25 * l[k] + 0.5 * c[k] + 0.25 * r[k]);
        }
    }
    let mut out = vec![[0.0f32; 3]; buf.len()];
    for y in 0..height {
        for x in 0..width {
            let u = tmp[y.saturating_sub(1) * width + x];
            let c = tmp[y * width + x];
            let d = tmp[(y + 1).min(height - 1) * width + x];
            out[y * width + x] = [0, 1, 2].map(|k| 0.25 * u[k] + 0.5 * c[k] + 0.25 * d[k]);
        }
    }
    out
}

pub fn source_name(index: usize) -> String {
    format!("source_{index:02}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_and_distinct() {
        let style = SceneStyle::new(3, 0, 160, 90);
        let a = style.render(4, 160, 90).unwrap();
        assert_eq!(a, style.render(4, 160, 90).unwrap());
        assert_ne!(a, style.render(5, 160, 90).unwrap());
        let other = SceneStyle::new(3, 1, 160, 90).render(4, 160, 90).unwrap();
        assert!(a.diff_count(&other) > 160 * 90 / 2);
    }

    #[test]
    fn neighbouring_frames_are_similar() {
        let style = SceneStyle::new(9, 2, 200, 120);
        let a = style.render(10, 200, 120).unwrap().to_gray();
        let b = style.render(11, 200, 120).unwrap().to_gray();
        let c = SceneStyle::new(9, 3, 200, 120).render(10, 200, 120).unwrap().to_gray();
        let mad = |p: &crate::GrayImage, q: &crate::GrayImage| {
            p.data().iter().zip(q.data()).map(|(x, y)| (x - y).abs()).sum::<f64>() / p.data().len() as f64
        };
        assert!(mad(&a, &b) < mad(&a, &c));
    }

    #[test]
    fn noise_is_bounded() {
        for s in 0..50 {
            for (x, y) in [(0.3, 0.7), (12.5, -3.25), (100.0, 4.0)] {
                let v = fbm(s, x, y, 3);
                assert!((0.0..=1.0).contains(&v));
            }
        }
    }
}
