//! Rasters, color conversion, resampling and the deterministic RNG.

mod io;
mod resize;
mod rng;

pub use io::{decode_png, encode_png, read_png, write_png};
pub use resize::resample_plane;
pub use rng::{child_seed, Rng};

use crate::{Error, Result};

/// Smallest side accepted for an RGB [`Image`].
pub const MIN_SIDE: usize = 8;

pub type Rgb = [u8; 3];

/// Owned row-major 8-bit RGB raster, at least 8x8.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Image {
    width: usize,
    height: usize,
    data: Vec<Rgb>,
}

impl Image {
    pub fn new(width: usize, height: usize, data: Vec<Rgb>) -> Result<Self> {
        if width < MIN_SIDE || height < MIN_SIDE {
            return Err(Error::InvalidDimensions {
                width,
                height,
                reason: "images must be at least 8x8",
            });
        }
        if data.len() != width * height {
            return Err(Error::DimensionMismatch {
                expected: width * height,
                actual: data.len(),
            });
        }
        Ok(Image {
            width,
            height,
            data,
        })
    }

    pub fn filled(width: usize, height: usize, color: Rgb) -> Result<Self> {
        Image::new(width, height, vec![color; width * height])
    }

    pub fn from_fn(
        width: usize,
        height: usize,
        mut f: impl FnMut(usize, usize) -> Rgb,
    ) -> Result<Self> {
        let mut data = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                data.push(f(x, y));
            }
        }
        Image::new(width, height, data)
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.width
    }

    #[inline]
    pub fn height(&self) -> usize {
        self.height
    }

    #[inline]
    pub fn dims(&self) -> (usize, usize) {
        (self.width, self.height)
    }

    #[inline]
    pub fn pixels(&self) -> &[Rgb] {
        &self.data
    }

    #[inline]
    pub fn pixels_mut(&mut self) -> &mut [Rgb] {
        &mut self.data
    }

    pub fn into_pixels(self) -> Vec<Rgb> {
        self.data
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> Rgb {
        self.data[y * self.width + x]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, px: Rgb) {
        let w = self.width;
        self.data[y * w + x] = px;
    }

    pub fn row(&self, y: usize) -> &[Rgb] {
        &self.data[y * self.width..(y + 1) * self.width]
    }

    #[inline]
    pub fn contains(&self, x: i64, y: i64) -> bool {
        x >= 0 && y >= 0 && (x as usize) < self.width && (y as usize) < self.height
    }

    /// Number of pixels that differ from `other`. Panics if dimensions differ.
    pub fn diff_count(&self, other: &Image) -> usize {
        assert_eq!(self.dims(), other.dims());
        self.data
            .iter()
            .zip(&other.data)
            .filter(|(a, b)| a != b)
            .count()
    }

    /// BT.601 luma in [0,1].
    pub fn to_gray(&self) -> GrayImage {
        GrayImage {
            width: self.width,
            height: self.height,
            data: self.data.iter().map(|&px| luma(px)).collect(),
        }
    }

    /// Bilinear (triangle-filter) resampling; targets below 8x8 are rejected.
    pub fn resize(&self, new_w: usize, new_h: usize) -> Result<Image> {
        if new_w < MIN_SIDE || new_h < MIN_SIDE {
            return Err(Error::InvalidDimensions {
                width: new_w,
                height: new_h,
                reason: "resize target must be at least 8x8",
            });
        }
        if (new_w, new_h) == self.dims() {
            return Ok(self.clone());
        }
        let mut out = vec![[0u8; 3]; new_w * new_h];
        for c in 0..3 {
            let plane: Vec<f64> = self.data.iter().map(|px| px[c] as f64).collect();
            let res = resample_plane(&plane, self.width, self.height, new_w, new_h);
            for (o, v) in out.iter_mut().zip(res) {
                o[c] = v.round().clamp(0.0, 255.0) as u8;
            }
        }
        Image::new(new_w, new_h, out)
    }
}

#[inline]
pub fn luma(px: Rgb) -> f64 {
    ((0.299 * px[0] as f64 + 0.587 * px[1] as f64 + 0.114 * px[2] as f64) / 255.0).clamp(0.0, 1.0)
}

/// Row-major real-valued intensities in [0,1].
#[derive(Clone, Debug, PartialEq)]
pub struct GrayImage {
    width: usize,
    height: usize,
    data: Vec<f64>,
}

impl GrayImage {
    /// Values are clamped into [0,1]; non-finite values are rejected.
    pub fn new(width: usize, height: usize, data: Vec<f64>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidDimensions {
                width,
                height,
                reason: "gray images must be non-empty",
            });
        }
        if data.len() != width * height {
            return Err(Error::DimensionMismatch {
                expected: width * height,
                actual: data.len(),
            });
        }
        if data.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("gray image"));
        }
        let data = data.into_iter().map(|v| v.clamp(0.0, 1.0)).collect();
        Ok(GrayImage {
            width,
            height,
            data,
        })
    }

    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        let mut data = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                data.push(f(x, y));
            }
        }
        GrayImage::new(width, height, data)
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.width
    }

    #[inline]
    pub fn height(&self) -> usize {
        self.height
    }

    #[inline]
    pub fn data(&self) -> &[f64] {
        &self.data
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.data[y * self.width + x]
    }

    /// Bilinear (triangle-filter) resampling. Unlike [`Image::resize`], any
    /// non-empty target is accepted.
    pub fn resize(&self, new_w: usize, new_h: usize) -> Result<GrayImage> {
        if new_w == 0 || new_h == 0 {
            return Err(Error::InvalidDimensions {
                width: new_w,
                height: new_h,
                reason: "resize target must be non-empty",
            });
        }
        let data = resample_plane(&self.data, self.width, self.height, new_w, new_h);
        GrayImage::new(new_w, new_h, data)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_small_or_inconsistent_images() {
        assert!(Image::filled(7, 8, [0; 3]).is_err());
        assert!(Image::new(8, 8, vec![[0; 3]; 63]).is_err());
        assert!(Image::filled(8, 8, [0; 3]).is_ok());
    }

    #[test]
    fn gray_of_black_white_and_red() {
        let black = Image::filled(8, 8, [0, 0, 0]).unwrap().to_gray();
        assert!(black.data().iter().all(|&v| v == 0.0));
        let white = Image::filled(8, 8, [255, 255, 255]).unwrap().to_gray();
        assert!(white.data().iter().all(|&v| (v - 1.0).abs() < 1e-12));
        assert!((luma([255, 0, 0]) - 0.299).abs() < 1e-6);
    }

    #[test]
    fn resize_identity_and_constant() {
        let img = Image::from_fn(20, 12, |x, y| [(x * 7) as u8, (y * 13) as u8, (x + y) as u8]).unwrap();
        assert_eq!(img.resize(20, 12).unwrap(), img);

        let c = Image::filled(33, 17, [10, 200, 77]).unwrap();
        let up = c.resize(50, 41).unwrap();
        assert!(up.pixels().iter().all(|&p| p == [10, 200, 77]));
        assert_eq!(up.resize(33, 17).unwrap(), c);
    }

    #[test]
    fn resize_checkerboard_to_single_pixel() {
        let g = GrayImage::new(2, 2, vec![0.0, 1.0, 1.0, 0.0]).unwrap();
        let r = g.resize(1, 1).unwrap();
        assert!((r.get(0, 0) - 0.5).abs() < 1e-6);
    }

    #[test]
    fn resize_rejects_degenerate_targets() {
        let img = Image::filled(16, 16, [1, 2, 3]).unwrap();
        assert!(img.resize(4, 16).is_err());
        let g = img.to_gray();
        assert!(g.resize(0, 3).is_err());
    }
}
