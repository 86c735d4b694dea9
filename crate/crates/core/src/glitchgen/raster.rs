//! Integer rasterization helpers. No anti-aliasing anywhere: every drawn pixel is
//! either fully replaced or untouched.

use crate::imagecore::{Image, Rgb};

/// Bresenham line between two integer points, inclusive of both ends.
pub(crate) fn line_points(x0: i64, y0: i64, x1: i64, y1: i64) -> Vec<(i64, i64)> {
    let dx = (x1 - x0).abs();
    let dy = -(y1 - y0).abs();
    let sx = if x0 < x1 { 1 } else { -1 };
    let sy = if y0 < y1 { 1 } else { -1 };
    let (mut x, mut y) = (x0, y0);
    let mut err = dx + dy;
    let mut pts = Vec::with_capacity((dx.max(-dy) + 1) as usize);
    loop {
        pts.push((x, y));
        if x == x1 && y == y1 {
            break;
        }
        let e2 = 2 * err;
        if e2 >= dy {
            err += dy;
            x += sx;
        }
        if e2 <= dx {
            err += dx;
            y += sy;
        }
    }
    pts
}

/// Fill a `size` x `size` square whose top-left corner is offset so that the
/// square is centered on (x, y) as well as integers allow. Returns pixels written.
pub(crate) fn stamp(img: &mut Image, x: i64, y: i64, size: i64, color: Rgb) -> usize {
    let off = (size - 1) / 2;
    let mut n = 0;
    for yy in y - off..y - off + size {
        for xx in x - off..x - off + size {
            if img.contains(xx, yy) {
                img.set(xx as usize, yy as usize, color);
                n += 1;
            }
        }
    }
    n
}

/// Pixels whose centers fall inside the polygon (even-odd rule), clipped to the frame.
pub(crate) fn polygon_pixels(vertices: &[[f64; 2]], width: usize, height: usize) -> Vec<(usize, usize)> {
    if vertices.len() < 3 {
        return Vec::new();
    }
    let ymin = vertices.iter().map(|v| v[1]).fold(f64::INFINITY, f64::min);
    let ymax = vertices.iter().map(|v| v[1]).fold(f64::NEG_INFINITY, f64::max);
    let y_lo = (ymin - 0.5).ceil().max(0.0) as usize;
    let y_hi = ((ymax - 0.5).floor()).min(height as f64 - 1.0);
    if y_hi < 0.0 {
        return Vec::new();
    }
    let y_hi = y_hi as usize;
    let mut out = Vec::new();
    let mut xs = Vec::new();
    for y in y_lo..=y_hi {
        let cy = y as f64 + 0.5;
        xs.clear();
        for i in 0..vertices.len() {
            let a = vertices[i];
            let b = vertices[(i + 1) % vertices.len()];
            if (a[1] <= cy && b[1] > cy) || (b[1] <= cy && a[1] > cy) {
                let t = (cy - a[1]) / (b[1] - a[1]);
                xs.push(a[0] + t * (b[0] - a[0]));
            }
        }
        xs.sort_by(|a, b| a.total_cmp(b));
        for pair in xs.chunks_exact(2) {
            let x_lo = (pair[0] - 0.5).ceil().max(0.0);
            let x_hi = (pair[1] - 0.5).floor().min(width as f64 - 1.0);
            if x_hi < x_lo {
                continue;
            }
            for x in x_lo as usize..=x_hi as usize {
                out.push((x, y));
            }
        }
    }
    out
}

/// Pixels whose centers fall inside a rotated ellipse, clipped to the frame.
pub(crate) fn ellipse_pixels(
    center: [f64; 2],
    radii: [f64; 2],
    angle: f64,
    width: usize,
    height: usize,
) -> Vec<(usize, usize)> {
    let (s, c) = angle.sin_cos();
    let r = radii[0].max(radii[1]);
    let x_lo = (center[0] - r).floor().max(0.0) as usize;
    let y_lo = (center[1] - r).floor().max(0.0) as usize;
    let x_hi = ((center[0] + r).ceil() as usize).min(width - 1);
    let y_hi = ((center[1] + r).ceil() as usize).min(height - 1);
    let mut out = Vec::new();
    for y in y_lo..=y_hi {
        for x in x_lo..=x_hi {
            let dx = x as f64 + 0.5 - center[0];
            let dy = y as f64 + 0.5 - center[1];
            let u = (dx * c + dy * s) / radii[0];
            let v = (-dx * s + dy * c) / radii[1];
            if u * u + v * v <= 1.0 {
                out.push((x, y));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bresenham_endpoints_and_connectivity() {
        for &(x0, y0, x1, y1) in &[(0, 0, 10, 3), (5, 5, -3, 9), (2, 2, 2, 2), (0, 0, 0, -7)] {
            let pts = line_points(x0, y0, x1, y1);
            assert_eq!(pts[0], (x0, y0));
            assert_eq!(*pts.last().unwrap(), (x1, y1));
            for w in pts.windows(2) {
                assert!((w[0].0 - w[1].0).abs() <= 1 && (w[0].1 - w[1].1).abs() <= 1);
            }
        }
    }

    #[test]
    fn square_polygon_covers_interior() {
        let px = polygon_pixels(&[[2.0, 2.0], [6.0, 2.0], [6.0, 6.0], [2.0, 6.0]], 10, 10);
        assert_eq!(px.len(), 16);
        assert!(px.iter().all(|&(x, y)| (2..6).contains(&x) && (2..6).contains(&y)));
    }

    #[test]
    fn circle_area_is_close() {
        let px = ellipse_pixels([50.0, 50.0], [20.0, 20.0], 0.3, 100, 100);
        let area = std::f64::consts::PI * 400.0;
        assert!((px.len() as f64 - area).abs() / area < 0.03);
    }
}
