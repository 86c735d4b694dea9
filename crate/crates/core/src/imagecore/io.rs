use std::io::Cursor;
use std::path::Path;

use image::codecs::png::{CompressionType, FilterType, PngEncoder};
use image::{ExtendedColorType, ImageEncoder};

use super::Image;
use crate::{Error, Result};

/// Decode PNG bytes into RGB; alpha and 16-bit depth are reduced to 8-bit RGB.
pub fn decode_png(bytes: &[u8]) -> Result<Image> {
    let dynamic = image::load_from_memory_with_format(bytes, image::ImageFormat::Png)
        .map_err(|source| Error::Image {
            path: "<memory>".into(),
            source,
        })?;
    let rgb = dynamic.to_rgb8();
    let (w, h) = (rgb.width() as usize, rgb.height() as usize);
    let data = rgb.pixels().map(|p| p.0).collect();
    Image::new(w, h, data)
}

pub fn encode_png(img: &Image) -> Result<Vec<u8>> {
    let mut buf = Vec::new();
    let flat: Vec<u8> = img.pixels().iter().flatten().copied().collect();
    PngEncoder::new_with_quality(Cursor::new(&mut buf), CompressionType::Fast, FilterType::Sub)
        .write_image(&flat, img.width() as u32, img.height() as u32, ExtendedColorType::Rgb8)
        .map_err(|source| Error::Image {
            path: "<memory>".into(),
            source,
        })?;
    Ok(buf)
}

pub fn read_png(path: impl AsRef<Path>) -> Result<Image> {
    let path = path.as_ref();
    let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
    decode_png(&bytes).map_err(|e| match e {
        Error::Image { source, .. } => Error::Image {
            path: path.to_path_buf(),
            source,
        },
        other => other,
    })
}

pub fn write_png(path: impl AsRef<Path>, img: &Image) -> Result<()> {
    let path = path.as_ref();
    let bytes = encode_png(img)?;
    std::fs::write(path, bytes).map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn png_round_trip() {
        let img = Image::from_fn(17, 9, |x, y| [(x * 13) as u8, (y * 29) as u8, (x ^ y) as u8]).unwrap();
        let bytes = encode_png(&img).unwrap();
        assert_eq!(decode_png(&bytes).unwrap(), img);
        assert_eq!(encode_png(&img).unwrap(), bytes);
    }

    #[test]
    fn alpha_is_dropped() {
        let mut rgba = image::RgbaImage::new(8, 8);
        for p in rgba.pixels_mut() {
            *p = image::Rgba([10, 20, 30, 40]);
        }
        let mut buf = Vec::new();
        rgba.write_to(&mut Cursor::new(&mut buf), image::ImageFormat::Png).unwrap();
        let img = decode_png(&buf).unwrap();
        assert!(img.pixels().iter().all(|&p| p == [10, 20, 30]));
    }
}
