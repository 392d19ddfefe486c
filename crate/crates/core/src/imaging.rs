//! Image decoding, grayscale conversion and area-averaging resampling.

use std::path::{Path, PathBuf};

use image::{DynamicImage, ImageFormat};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ImagingError {
    #[error("{path}: unsupported image format")]
    UnsupportedFormat { path: PathBuf },
    #[error("{path}: corrupt image stream: {reason}")]
    CorruptStream { path: PathBuf, reason: String },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("resize target must be at least 1x1, got {width}x{height}")]
    ZeroDimension { width: usize, height: usize },
    #[error("invalid raster: {0}")]
    InvalidRaster(String),
}

/// An 8-bit RGB raster, row-major, three bytes per pixel.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RgbImage {
    width: u32,
    height: u32,
    data: Vec<u8>,
}

impl RgbImage {
    pub fn new(width: u32, height: u32, data: Vec<u8>) -> Result<Self, ImagingError> {
        if width == 0 || height == 0 {
            return Err(ImagingError::InvalidRaster(format!(
                "dimensions must be positive, got {width}x{height}"
            )));
        }
        let expected = width as usize * height as usize * 3;
        if data.len() != expected {
            return Err(ImagingError::InvalidRaster(format!(
                "expected {expected} bytes for {width}x{height}, got {}",
                data.len()
            )));
        }
        Ok(Self { width, height, data })
    }

    /// Builds an image by evaluating `f(x, y)` for every pixel.
    pub fn from_fn(width: u32, height: u32, mut f: impl FnMut(u32, u32) -> [u8; 3]) -> Self {
        assert!(width > 0 && height > 0, "image dimensions must be positive");
        let mut data = Vec::with_capacity(width as usize * height as usize * 3);
        for y in 0..height {
            for x in 0..width {
                data.extend_from_slice(&f(x, y));
            }
        }
        Self { width, height, data }
    }

    pub fn filled(width: u32, height: u32, rgb: [u8; 3]) -> Self {
        Self::from_fn(width, height, |_, _| rgb)
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn data(&self) -> &[u8] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [u8] {
        &mut self.data
    }

    pub fn into_data(self) -> Vec<u8> {
        self.data
    }

    pub fn pixel(&self, x: u32, y: u32) -> [u8; 3] {
        let i = (y as usize * self.width as usize + x as usize) * 3;
        [self.data[i], self.data[i + 1], self.data[i + 2]]
    }

    pub fn put_pixel(&mut self, x: u32, y: u32, rgb: [u8; 3]) {
        let i = (y as usize * self.width as usize + x as usize) * 3;
        self.data[i..i + 3].copy_from_slice(&rgb);
    }

    /// Encodes the raster as PNG.
    pub fn to_png(&self) -> Result<Vec<u8>, ImagingError> {
        let buf = image::RgbImage::from_raw(self.width, self.height, self.data.clone())
            .expect("raster length checked at construction");
        let mut out = std::io::Cursor::new(Vec::new());
        buf.write_to(&mut out, ImageFormat::Png).map_err(|e| ImagingError::InvalidRaster(e.to_string()))?;
        Ok(out.into_inner())
    }

    pub fn save_png(&self, path: &Path) -> Result<(), ImagingError> {
        let bytes = self.to_png()?;
        std::fs::write(path, bytes).map_err(|source| ImagingError::Io { path: path.to_path_buf(), source })
    }
}

/// A grayscale intensity grid with real values in `[0, 255]`.
#[derive(Debug, Clone, PartialEq)]
pub struct PixelGrid {
    width: usize,
    height: usize,
    data: Vec<f64>,
}

impl PixelGrid {
    pub fn new(width: usize, height: usize, data: Vec<f64>) -> Result<Self, ImagingError> {
        if data.len() != width * height {
            return Err(ImagingError::InvalidRaster(format!(
                "expected {} values for {width}x{height}, got {}",
                width * height,
                data.len()
            )));
        }
        if let Some(bad) = data.iter().find(|v| !v.is_finite() || **v < 0.0 || **v > 255.0) {
            return Err(ImagingError::InvalidRaster(format!("intensity {bad} outside [0, 255]")));
        }
        Ok(Self { width, height, data })
    }

    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(width * height);
        for r in 0..height {
            for c in 0..width {
                data.push(f(r, c));
            }
        }
        Self::new(width, height, data).expect("generated intensities must lie in [0, 255]")
    }

    pub fn constant(width: usize, height: usize, value: f64) -> Self {
        Self::from_fn(width, height, |_, _| value)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    /// Value at row `r`, column `c`.
    pub fn get(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.width + c]
    }

    pub fn mean(&self) -> f64 {
        let base = self.data[0];
        base + self.data.iter().map(|v| v - base).sum::<f64>() / self.data.len() as f64
    }
}

fn guess_supported(bytes: &[u8], path: &Path) -> Result<ImageFormat, ImagingError> {
    match image::guess_format(bytes) {
        Ok(f @ (ImageFormat::Png | ImageFormat::Jpeg | ImageFormat::Bmp)) => Ok(f),
        _ => Err(ImagingError::UnsupportedFormat { path: path.to_path_buf() }),
    }
}

/// Decodes a PNG, JPEG or BMP stream. `path` only labels errors.
///
/// Alpha is composited over black, so a pixel `(c, a)` becomes
/// `round(c * a / 255)`.
pub fn decode(bytes: &[u8], path: &Path) -> Result<RgbImage, ImagingError> {
    let format = guess_supported(bytes, path)?;
    let img = image::load_from_memory_with_format(bytes, format)
        .map_err(|e| ImagingError::CorruptStream { path: path.to_path_buf(), reason: e.to_string() })?;
    Ok(from_dynamic(img))
}

/// Reads and decodes an image file.
pub fn open(path: &Path) -> Result<RgbImage, ImagingError> {
    let bytes =
        std::fs::read(path).map_err(|source| ImagingError::Io { path: path.to_path_buf(), source })?;
    decode(&bytes, path)
}

fn from_dynamic(img: DynamicImage) -> RgbImage {
    let (width, height) = (img.width(), img.height());
    let data = if img.color().has_alpha() {
        let rgba = img.into_rgba8();
        let mut out = Vec::with_capacity(width as usize * height as usize * 3);
        for px in rgba.pixels() {
            let a = px[3] as u32;
            for ch in &px.0[..3] {
                out.push(((*ch as u32 * a + 127) / 255) as u8);
            }
        }
        out
    } else {
        img.into_rgb8().into_raw()
    };
    RgbImage { width, height, data }
}

/// BT.601 luma, `0.299 R + 0.587 G + 0.114 B`, unrounded.
pub fn to_grayscale(img: &RgbImage) -> PixelGrid {
    // Integer numerator with a single division keeps white at exactly 255.0
    // and every value between the channel min and max.
    let data = img
        .data
        .chunks_exact(3)
        .map(|p| (299 * p[0] as u32 + 587 * p[1] as u32 + 114 * p[2] as u32) as f64 / 1000.0)
        .collect();
    PixelGrid { width: img.width as usize, height: img.height as usize, data }
}

/// Per-output-sample list of `(source index, weight)` for box resampling
/// of `src` samples onto `dst` samples. Weights of each list sum to one.
fn box_weights(src: usize, dst: usize) -> Vec<Vec<(usize, f64)>> {
    // Output sample `o` covers [o*src, (o+1)*src) and input sample `i`
    // covers [i*dst, (i+1)*dst) on a common integer axis of length src*dst.
    (0..dst)
        .map(|o| {
            let lo = o * src;
            let hi = lo + src;
            (lo / dst..hi.div_ceil(dst))
                .filter_map(|i| {
                    let overlap = hi.min((i + 1) * dst).saturating_sub(lo.max(i * dst));
                    (overlap > 0).then(|| (i, overlap as f64 / src as f64))
                })
                .collect()
        })
        .collect()
}

/// Weighted mean of `taps`, accumulated relative to the first sample so a
/// constant window reproduces its value exactly.
fn weighted(taps: &[(usize, f64)], at: impl Fn(usize) -> f64) -> f64 {
    let base = at(taps[0].0);
    base + taps.iter().map(|&(i, w)| (at(i) - base) * w).sum::<f64>()
}

/// Area-averaging resample: each output pixel is the mean of the source
/// rectangle it covers, with fractional edge pixels weighted by coverage.
pub fn resize(grid: &PixelGrid, out_w: usize, out_h: usize) -> Result<PixelGrid, ImagingError> {
    if out_w == 0 || out_h == 0 {
        return Err(ImagingError::ZeroDimension { width: out_w, height: out_h });
    }
    if out_w == grid.width && out_h == grid.height {
        return Ok(grid.clone());
    }

    let cols = box_weights(grid.width, out_w);
    let rows = box_weights(grid.height, out_h);

    let mut horiz = vec![0.0; grid.height * out_w];
    for r in 0..grid.height {
        let src = &grid.data[r * grid.width..(r + 1) * grid.width];
        for (c, taps) in cols.iter().enumerate() {
            horiz[r * out_w + c] = weighted(taps, |i| src[i]);
        }
    }

    let mut data = vec![0.0; out_h * out_w];
    for (r, taps) in rows.iter().enumerate() {
        for c in 0..out_w {
            let v = weighted(taps, |i| horiz[i * out_w + c]);
            data[r * out_w + c] = v.clamp(0.0, 255.0);
        }
    }
    Ok(PixelGrid { width: out_w, height: out_h, data })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn encode(img: &image::DynamicImage, format: ImageFormat) -> Vec<u8> {
        let mut out = std::io::Cursor::new(Vec::new());
        img.write_to(&mut out, format).unwrap();
        out.into_inner()
    }

    #[test]
    fn decodes_single_red_png() {
        let img = image::DynamicImage::ImageRgb8(image::RgbImage::from_pixel(1, 1, image::Rgb([255, 0, 0])));
        let decoded = decode(&encode(&img, ImageFormat::Png), Path::new("red.png")).unwrap();
        assert_eq!(decoded, RgbImage::new(1, 1, vec![255, 0, 0]).unwrap());
    }

    #[test]
    fn decodes_white_bmp() {
        let img =
            image::DynamicImage::ImageRgb8(image::RgbImage::from_pixel(2, 2, image::Rgb([255, 255, 255])));
        let decoded = decode(&encode(&img, ImageFormat::Bmp), Path::new("w.bmp")).unwrap();
        assert_eq!(decoded.data(), &[255u8; 12][..]);
        assert_eq!((decoded.width(), decoded.height()), (2, 2));
    }

    #[test]
    fn truncated_jpeg_is_corrupt() {
        let img = image::DynamicImage::ImageRgb8(image::RgbImage::from_fn(16, 16, |x, y| {
            image::Rgb([(x * 16) as u8, (y * 16) as u8, 7])
        }));
        let bytes = encode(&img, ImageFormat::Jpeg);
        let err = decode(&bytes[..bytes.len() / 2], Path::new("cut.jpg")).unwrap_err();
        match err {
            ImagingError::CorruptStream { path, .. } => assert_eq!(path, Path::new("cut.jpg")),
            other => panic!("expected CorruptStream, got {other:?}"),
        }
    }

    #[test]
    fn unknown_bytes_are_unsupported() {
        let err = decode(b"GIF89a....", Path::new("x.gif")).unwrap_err();
        assert!(matches!(err, ImagingError::UnsupportedFormat { .. }));
        assert!(err.to_string().contains("x.gif"));
    }

    #[test]
    fn alpha_composites_over_black() {
        let img = image::DynamicImage::ImageRgba8(image::RgbaImage::from_pixel(
            1,
            1,
            image::Rgba([200, 100, 255, 0]),
        ));
        let decoded = decode(&encode(&img, ImageFormat::Png), Path::new("a.png")).unwrap();
        assert_eq!(decoded.data(), &[0, 0, 0]);
    }

    #[test]
    fn luma_values() {
        let g = to_grayscale(&RgbImage::new(3, 1, vec![255, 255, 255, 0, 0, 0, 255, 0, 0]).unwrap());
        assert_eq!(g.data(), &[255.0, 0.0, 76.245]);
    }

    #[test]
    fn resize_half_split() {
        let g = PixelGrid::from_fn(4, 4, |_, c| if c < 2 { 0.0 } else { 100.0 });
        let out = resize(&g, 2, 2).unwrap();
        assert_eq!(out.data(), &[0.0, 100.0, 0.0, 100.0]);
    }

    #[test]
    fn resize_three_to_one() {
        let g = PixelGrid::new(3, 1, vec![0.0, 60.0, 120.0]).unwrap();
        let out = resize(&g, 1, 1).unwrap();
        assert!((out.data()[0] - 60.0).abs() < 1e-12);
    }

    #[test]
    fn resize_fractional_coverage() {
        // 3 -> 2: outputs cover [0, 1.5) and [1.5, 3) in source units.
        let g = PixelGrid::new(3, 1, vec![0.0, 30.0, 90.0]).unwrap();
        let out = resize(&g, 2, 1).unwrap();
        assert!((out.data()[0] - 10.0).abs() < 1e-12);
        assert!((out.data()[1] - 70.0).abs() < 1e-12);
    }

    #[test]
    fn resize_rejects_zero() {
        let g = PixelGrid::constant(2, 2, 1.0);
        assert!(matches!(resize(&g, 0, 3), Err(ImagingError::ZeroDimension { .. })));
    }

    fn grid_strategy() -> impl Strategy<Value = PixelGrid> {
        (1usize..20, 1usize..20).prop_flat_map(|(w, h)| {
            proptest::collection::vec(0.0f64..=255.0, w * h)
                .prop_map(move |d| PixelGrid::new(w, h, d).unwrap())
        })
    }

    proptest! {
        #[test]
        fn luma_within_channel_range(r: u8, g: u8, b: u8) {
            let l = to_grayscale(&RgbImage::new(1, 1, vec![r, g, b]).unwrap()).data()[0];
            let lo = r.min(g).min(b) as f64;
            let hi = r.max(g).max(b) as f64;
            prop_assert!(l >= lo && l <= hi);
        }

        #[test]
        fn resize_identity_at_same_size(g in grid_strategy()) {
            prop_assert_eq!(resize(&g, g.width(), g.height()).unwrap(), g);
        }

        #[test]
        fn resize_constant_stays_constant(
            c in 0.0f64..=255.0, w in 1usize..40, h in 1usize..40, ow in 1usize..40, oh in 1usize..40,
        ) {
            let out = resize(&PixelGrid::constant(w, h, c), ow, oh).unwrap();
            for &v in out.data() {
                prop_assert_eq!(v, c);
            }
        }

        #[test]
        fn integral_downsample_preserves_mean(
            fw in 1usize..5, fh in 1usize..5, ow in 1usize..9, oh in 1usize..9, seed: u64,
        ) {
            let (w, h) = (ow * fw, oh * fh);
            let mut s = seed;
            let g = PixelGrid::from_fn(w, h, |_, _| {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                (s >> 11) as f64 / (1u64 << 53) as f64 * 255.0
            });
            let out = resize(&g, ow, oh).unwrap();
            prop_assert!((out.mean() - g.mean()).abs() < 1e-9);
        }
    }
}
