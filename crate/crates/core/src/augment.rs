//! Seeded near-duplicate generation.
//!
//! Each source image yields itself plus `variants_per_image` perturbed
//! copies forming one ground-truth group. Parameters for op `k` of variant
//! `v` of source `i` come from a generator keyed by `(seed, i, v, k)`, so
//! any variant can be produced alone and in any order.

use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dataset::{self, DatasetError, ImageRecord, Manifest};
use crate::imaging::{ImagingError, RgbImage};

/// Crops smaller than this on either side are rejected.
pub const MIN_SIDE: u32 = 8;

#[derive(Debug, Error)]
pub enum AugmentError {
    #[error("crop of {width}x{height} is below the {MIN_SIDE}x{MIN_SIDE} minimum")]
    DegenerateImage { width: u32, height: u32 },
    #[error("invalid augmentation spec: {0}")]
    InvalidSpec(String),
    #[error(transparent)]
    Dataset(#[from] DatasetError),
    #[error(transparent)]
    Imaging(#[from] ImagingError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AugmentOp {
    ColorJitter,
    Rotate,
    ResizedCrop,
    Erase,
}

impl AugmentOp {
    pub const ALL: [AugmentOp; 4] = [Self::ColorJitter, Self::Rotate, Self::ResizedCrop, Self::Erase];
}

impl std::str::FromStr for AugmentOp {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "color-jitter" | "color_jitter" => Ok(Self::ColorJitter),
            "rotate" => Ok(Self::Rotate),
            "resized-crop" | "resized_crop" => Ok(Self::ResizedCrop),
            "erase" => Ok(Self::Erase),
            other => Err(format!("unknown augmentation op {other:?}")),
        }
    }
}

/// Sampling ranges, inclusive at both ends.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AugmentRanges {
    /// Contrast gain.
    pub jitter_alpha: (f64, f64),
    /// Brightness offset in intensity units.
    pub jitter_beta: (f64, f64),
    pub rotate_degrees: (f64, f64),
    /// Fraction of the image area kept by the crop.
    pub crop_area: (f64, f64),
    /// Fraction of the image area erased; the upper bound may not exceed 0.2.
    pub erase_area: (f64, f64),
}

impl AugmentRanges {
    /// Narrow geometric ranges under which PHash variants mostly stay
    /// within a Hamming distance of 6 to 8 of their source.
    pub fn mild() -> Self {
        Self {
            rotate_degrees: (-2.0, 2.0),
            crop_area: (0.9, 1.0),
            erase_area: (0.0, 0.01),
            ..Self::default()
        }
    }
}

impl Default for AugmentRanges {
    fn default() -> Self {
        Self {
            jitter_alpha: (0.8, 1.2),
            jitter_beta: (-20.0, 20.0),
            rotate_degrees: (-15.0, 15.0),
            crop_area: (0.7, 1.0),
            erase_area: (0.02, 0.2),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AugmentSpec {
    pub seed: u64,
    pub ops: Vec<AugmentOp>,
    pub variants_per_image: usize,
    #[serde(default)]
    pub ranges: AugmentRanges,
}

impl AugmentSpec {
    pub fn new(seed: u64, ops: Vec<AugmentOp>, variants_per_image: usize) -> Self {
        Self { seed, ops, variants_per_image, ranges: AugmentRanges::default() }
    }

    pub fn validate(&self) -> Result<(), AugmentError> {
        let bad = |m: &str| Err(AugmentError::InvalidSpec(m.to_string()));
        if self.ops.is_empty() {
            return bad("ops list is empty");
        }
        let r = &self.ranges;
        let pairs = [
            ("jitter_alpha", r.jitter_alpha),
            ("jitter_beta", r.jitter_beta),
            ("rotate_degrees", r.rotate_degrees),
            ("crop_area", r.crop_area),
            ("erase_area", r.erase_area),
        ];
        for (name, (lo, hi)) in pairs {
            if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
                return Err(AugmentError::InvalidSpec(format!("{name} range ({lo}, {hi}) is not ordered")));
            }
        }
        if r.jitter_alpha.0 <= 0.0 {
            return bad("jitter_alpha must be positive");
        }
        if r.crop_area.0 <= 0.0 || r.crop_area.1 > 1.0 {
            return bad("crop_area must lie in (0, 1]");
        }
        if r.erase_area.0 < 0.0 || r.erase_area.1 > 0.2 {
            return bad("erase_area must lie in [0, 0.2]");
        }
        Ok(())
    }
}

/// Concrete parameters for one op application.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum OpParams {
    /// `p' = clamp(round(alpha * p + beta))` on every channel.
    ColorJitter { alpha: f64, beta: f64 },
    /// Counter-clockwise rotation about the centre, black fill.
    Rotate { degrees: f64 },
    /// Keep `area` of the image at relative offset `(x, y)` ∈ [0,1]², then
    /// scale back to the original size.
    ResizedCrop { area: f64, x: f64, y: f64 },
    /// Zero a rectangle covering `area` of the image with width/height
    /// ratio `aspect` at relative offset `(x, y)`.
    Erase { area: f64, aspect: f64, x: f64, y: f64 },
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Generator for one `(seed, image, variant, op)` cell.
pub fn keyed_rng(seed: u64, image_id: u64, variant: u64, op_index: u64) -> ChaCha8Rng {
    let key = [image_id, variant, op_index]
        .into_iter()
        .fold(splitmix64(seed), |acc, k| splitmix64(acc ^ splitmix64(k)));
    ChaCha8Rng::seed_from_u64(key)
}

fn draw(rng: &mut impl Rng, (lo, hi): (f64, f64)) -> f64 {
    if lo == hi {
        lo
    } else {
        rng.random_range(lo..=hi)
    }
}

pub fn sample_params(op: AugmentOp, ranges: &AugmentRanges, rng: &mut impl Rng) -> OpParams {
    match op {
        AugmentOp::ColorJitter => OpParams::ColorJitter {
            alpha: draw(rng, ranges.jitter_alpha),
            beta: draw(rng, ranges.jitter_beta),
        },
        AugmentOp::Rotate => OpParams::Rotate { degrees: draw(rng, ranges.rotate_degrees) },
        AugmentOp::ResizedCrop => {
            OpParams::ResizedCrop { area: draw(rng, ranges.crop_area), x: rng.random(), y: rng.random() }
        }
        AugmentOp::Erase => OpParams::Erase {
            area: draw(rng, ranges.erase_area),
            aspect: draw(rng, (0.3, 3.3)),
            x: rng.random(),
            y: rng.random(),
        },
    }
}

fn to_u8(v: f64) -> u8 {
    v.round().clamp(0.0, 255.0) as u8
}

/// Bilinear sample of channel `ch` at real coordinates, clamped to the
/// edge. Callers handle out-of-bounds fill.
fn bilinear(img: &RgbImage, x: f64, y: f64, x_off: u32, y_off: u32, w: u32, h: u32) -> [f64; 3] {
    let x = x.clamp(0.0, (w - 1) as f64);
    let y = y.clamp(0.0, (h - 1) as f64);
    let (x0, y0) = (x.floor() as u32, y.floor() as u32);
    let (x1, y1) = ((x0 + 1).min(w - 1), (y0 + 1).min(h - 1));
    let (fx, fy) = (x - x0 as f64, y - y0 as f64);
    let p = |xx: u32, yy: u32| img.pixel(x_off + xx, y_off + yy);
    let (a, b, c, d) = (p(x0, y0), p(x1, y0), p(x0, y1), p(x1, y1));
    let mut out = [0.0; 3];
    for ch in 0..3 {
        let top = a[ch] as f64 * (1.0 - fx) + b[ch] as f64 * fx;
        let bottom = c[ch] as f64 * (1.0 - fx) + d[ch] as f64 * fx;
        out[ch] = top * (1.0 - fy) + bottom * fy;
    }
    out
}

fn color_jitter(img: &RgbImage, alpha: f64, beta: f64) -> RgbImage {
    let mut out = img.clone();
    for p in out.data_mut() {
        *p = to_u8(alpha * *p as f64 + beta);
    }
    out
}

fn rotate(img: &RgbImage, degrees: f64) -> RgbImage {
    let (w, h) = (img.width(), img.height());
    let theta = degrees.to_radians();
    let (sin, cos) = theta.sin_cos();
    let (cx, cy) = ((w as f64 - 1.0) / 2.0, (h as f64 - 1.0) / 2.0);
    let limit = 1e-9;
    RgbImage::from_fn(w, h, |x, y| {
        // Inverse map: rotate the destination point by −θ.
        let (dx, dy) = (x as f64 - cx, y as f64 - cy);
        let sx = cos * dx - sin * dy + cx;
        let sy = sin * dx + cos * dy + cy;
        if sx < -limit || sy < -limit || sx > (w - 1) as f64 + limit || sy > (h - 1) as f64 + limit {
            return [0; 3];
        }
        bilinear(img, sx, sy, 0, 0, w, h).map(to_u8)
    })
}

fn resized_crop(img: &RgbImage, area: f64, x: f64, y: f64) -> Result<RgbImage, AugmentError> {
    let (w, h) = (img.width(), img.height());
    let side = area.sqrt();
    let cw = ((w as f64 * side).round() as u32).clamp(1, w);
    let ch = ((h as f64 * side).round() as u32).clamp(1, h);
    if cw < MIN_SIDE || ch < MIN_SIDE {
        return Err(AugmentError::DegenerateImage { width: cw, height: ch });
    }
    let x0 = ((x * (w - cw + 1) as f64) as u32).min(w - cw);
    let y0 = ((y * (h - ch + 1) as f64) as u32).min(h - ch);
    let (sx, sy) = (cw as f64 / w as f64, ch as f64 / h as f64);
    Ok(RgbImage::from_fn(w, h, |ox, oy| {
        let src_x = (ox as f64 + 0.5) * sx - 0.5;
        let src_y = (oy as f64 + 0.5) * sy - 0.5;
        bilinear(img, src_x, src_y, x0, y0, cw, ch).map(to_u8)
    }))
}

fn erase(img: &RgbImage, area: f64, aspect: f64, x: f64, y: f64) -> RgbImage {
    let (w, h) = (img.width(), img.height());
    let total = w as f64 * h as f64;
    let cap = (0.2 * total).floor() as u64;
    let target = area * total;
    let mut ew = ((target * aspect).sqrt().round() as u32).clamp(1, w);
    let mut eh = ((target / aspect).sqrt().round() as u32).clamp(1, h);
    while ew as u64 * eh as u64 > cap && (ew > 1 || eh > 1) {
        if ew >= eh {
            ew -= 1;
        } else {
            eh -= 1;
        }
    }
    if ew as u64 * eh as u64 > cap || target < 1.0 {
        return img.clone();
    }
    let x0 = ((x * (w - ew + 1) as f64) as u32).min(w - ew);
    let y0 = ((y * (h - eh + 1) as f64) as u32).min(h - eh);
    let mut out = img.clone();
    for yy in y0..y0 + eh {
        for xx in x0..x0 + ew {
            out.put_pixel(xx, yy, [0; 3]);
        }
    }
    out
}

/// Applies one op with explicit parameters. Output size equals input size.
pub fn apply_op(img: &RgbImage, params: OpParams) -> Result<RgbImage, AugmentError> {
    match params {
        OpParams::ColorJitter { alpha, beta } => Ok(color_jitter(img, alpha, beta)),
        OpParams::Rotate { degrees } => Ok(rotate(img, degrees)),
        OpParams::ResizedCrop { area, x, y } => resized_crop(img, area, x, y),
        OpParams::Erase { area, aspect, x, y } => Ok(erase(img, area, aspect, x, y)),
    }
}

/// Parameters that [`augment`] would use for this variant.
pub fn variant_params(spec: &AugmentSpec, image_id: u64, variant: u64) -> Vec<OpParams> {
    spec.ops
        .iter()
        .enumerate()
        .map(|(k, op)| {
            let mut rng = keyed_rng(spec.seed, image_id, variant, k as u64);
            sample_params(*op, &spec.ranges, &mut rng)
        })
        .collect()
}

/// Produces variant `variant` of source image `image_id`.
pub fn augment(
    img: &RgbImage,
    spec: &AugmentSpec,
    image_id: u64,
    variant: u64,
) -> Result<RgbImage, AugmentError> {
    spec.validate()?;
    variant_params(spec, image_id, variant).into_iter().try_fold(img.clone(), |acc, p| apply_op(&acc, p))
}

#[derive(Debug, Clone, PartialEq)]
pub struct AugmentedImage {
    pub source_id: u64,
    /// 0 is the untouched original; `1..=variants_per_image` are augmented.
    pub variant: u64,
    pub image: RgbImage,
}

/// Originals plus variants for every source, ordered by (source, variant).
pub fn augment_corpus(
    sources: &[(u64, RgbImage)],
    spec: &AugmentSpec,
) -> Result<Vec<AugmentedImage>, AugmentError> {
    spec.validate()?;
    let per = spec.variants_per_image as u64 + 1;
    let jobs: Vec<(usize, u64)> = (0..sources.len()).flat_map(|s| (0..per).map(move |v| (s, v))).collect();
    jobs.into_par_iter()
        .map(|(s, v)| {
            let (id, img) = &sources[s];
            let image = if v == 0 { img.clone() } else { augment(img, spec, *id, v)? };
            Ok(AugmentedImage { source_id: *id, variant: v, image })
        })
        .collect()
}

/// Group id shared by a source and its variants.
pub fn group_name(source_id: u64) -> String {
    format!("src{source_id:06}")
}

/// Augments every record of `m`, writes PNGs into `out_dir` and returns
/// the manifest of the new corpus. Split tags are inherited.
pub fn build_aug_corpus(m: &Manifest, spec: &AugmentSpec, out_dir: &Path) -> Result<Manifest, AugmentError> {
    spec.validate()?;
    std::fs::create_dir_all(out_dir)
        .map_err(|source| ImagingError::Io { path: out_dir.to_path_buf(), source })?;
    let per = spec.variants_per_image as u64 + 1;
    let records: Vec<Vec<ImageRecord>> = m
        .records
        .par_iter()
        .map(|rec| -> Result<Vec<ImageRecord>, AugmentError> {
            let src = dataset::load_image(&rec.path)?;
            (0..per)
                .map(|v| {
                    let img = if v == 0 { src.clone() } else { augment(&src, spec, rec.id, v)? };
                    let path = out_dir.join(format!("{}_v{v}.png", group_name(rec.id)));
                    img.save_png(&path)?;
                    Ok(ImageRecord {
                        id: 0,
                        split: rec.split,
                        group_id: Some(group_name(rec.id)),
                        path: path.to_string_lossy().into_owned(),
                    })
                })
                .collect()
        })
        .collect::<Result<_, _>>()?;
    let mut out = Manifest::new(records.into_iter().flatten().collect(), format!("aug:{}", m.source));
    out.renumber();
    Ok(out)
}

/// In-memory group-labelled corpus: `groups` synthetic scenes of
/// `side`×`side`, each followed by its augmented variants. Record ids are
/// dense in (source, variant) order and paths are left empty.
pub fn synthetic_corpus(
    scene_seed: u64,
    groups: u64,
    side: u32,
    spec: &AugmentSpec,
) -> Result<(Manifest, Vec<RgbImage>), AugmentError> {
    let sources: Vec<(u64, RgbImage)> =
        (0..groups).map(|i| (i, synthetic_scene(scene_seed, i, side, side))).collect();
    let corpus = augment_corpus(&sources, spec)?;
    let records = corpus
        .iter()
        .enumerate()
        .map(|(i, a)| ImageRecord {
            id: i as u64,
            split: None,
            group_id: Some(group_name(a.source_id)),
            path: String::new(),
        })
        .collect();
    let m = Manifest::new(records, format!("synthetic:{scene_seed}"));
    Ok((m, corpus.into_iter().map(|a| a.image).collect()))
}

/// Deterministic synthetic photograph stand-in: a random-phase field with
/// a 1/f amplitude falloff, mapped between two colours, overlaid with a
/// few soft-edged ellipses and bars. Used to build reproducible
/// near-duplicate corpora without external data.
pub fn synthetic_scene(seed: u64, index: u64, width: u32, height: u32) -> RgbImage {
    use std::f64::consts::{PI, TAU};

    let mut rng = keyed_rng(seed, index, u64::MAX, u64::MAX);
    let color = |rng: &mut ChaCha8Rng| -> [f64; 3] {
        [rng.random_range(0.0..255.0), rng.random_range(0.0..255.0), rng.random_range(0.0..255.0)]
    };
    let dark = [rng.random_range(0.0..110.0), rng.random_range(0.0..110.0), rng.random_range(0.0..110.0)];
    let light =
        [rng.random_range(145.0..255.0), rng.random_range(145.0..255.0), rng.random_range(145.0..255.0)];
    let (c0, c1) = if rng.random_bool(0.5) { (dark, light) } else { (light, dark) };

    // (kx, ky, amplitude, phase)
    let mut waves = Vec::new();
    for kx in 0..6i32 {
        for ky in -5..6i32 {
            if kx == 0 && ky <= 0 {
                continue;
            }
            let f = ((kx * kx + ky * ky) as f64).sqrt();
            let amp = rng.random_range(0.5..1.0) / f;
            waves.push((kx as f64, ky as f64, amp, rng.random_range(0.0..TAU)));
        }
    }
    // ±2σ of the field spans the colour ramp
    let norm: f64 = 4.0 * (waves.iter().map(|w| w.2 * w.2).sum::<f64>() * 0.5).sqrt();

    struct Blob {
        cx: f64,
        cy: f64,
        rx: f64,
        ry: f64,
        rot: f64,
        color: [f64; 3],
        bar: bool,
    }
    let n = rng.random_range(2..=5);
    let blobs: Vec<Blob> = (0..n)
        .map(|_| Blob {
            cx: rng.random_range(0.0..1.0),
            cy: rng.random_range(0.0..1.0),
            rx: rng.random_range(0.06..0.25),
            ry: rng.random_range(0.06..0.25),
            rot: rng.random_range(0.0..PI),
            color: color(&mut rng),
            bar: rng.random_bool(0.3),
        })
        .collect();

    RgbImage::from_fn(width, height, |x, y| {
        let u = (x as f64 + 0.5) / width as f64;
        let v = (y as f64 + 0.5) / height as f64;
        let field: f64 = waves.iter().map(|&(kx, ky, a, ph)| a * (TAU * (kx * u + ky * v) + ph).cos()).sum();
        let t = (0.5 + field / norm).clamp(0.0, 1.0);
        let mut px = [0.0; 3];
        for ch in 0..3 {
            px[ch] = c0[ch] * (1.0 - t) + c1[ch] * t;
        }
        for b in &blobs {
            let (s, c) = b.rot.sin_cos();
            let (dx, dy) = (u - b.cx, v - b.cy);
            let (lx, ly) = ((c * dx + s * dy) / b.rx, (-s * dx + c * dy) / b.ry);
            let r = if b.bar { lx.abs().max(ly.abs()) } else { (lx * lx + ly * ly).sqrt() };
            let weight = (1.0 - (r - 1.0) / 0.1).clamp(0.0, 1.0);
            for (p, bc) in px.iter_mut().zip(b.color) {
                *p = *p * (1.0 - weight) + bc * weight;
            }
        }
        px.map(to_u8)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hashing::{hamming, HashAlgo, Hasher};

    fn scene() -> RgbImage {
        synthetic_scene(1, 2, 64, 48)
    }

    #[test]
    fn identity_parameters() {
        let img = scene();
        let ops = [
            OpParams::ColorJitter { alpha: 1.0, beta: 0.0 },
            OpParams::Rotate { degrees: 0.0 },
            OpParams::ResizedCrop { area: 1.0, x: 0.3, y: 0.9 },
        ];
        for p in ops {
            let out = apply_op(&img, p).unwrap();
            assert_eq!(out, img, "{p:?}");
            for algo in HashAlgo::ALL {
                let h = Hasher::new(algo);
                assert_eq!(hamming(h.hash(&out), h.hash(&img)).unwrap(), 0);
            }
        }
    }

    #[test]
    fn rotate_keeps_size_and_fills_black() {
        let img = RgbImage::filled(40, 30, [200, 100, 50]);
        let out = apply_op(&img, OpParams::Rotate { degrees: 15.0 }).unwrap();
        assert_eq!((out.width(), out.height()), (40, 30));
        assert_eq!(out.pixel(0, 0), [0, 0, 0]);
        assert_eq!(out.pixel(20, 15), [200, 100, 50]);
    }

    #[test]
    fn crop_too_small_is_degenerate() {
        let img = RgbImage::filled(10, 10, [1, 2, 3]);
        let err = apply_op(&img, OpParams::ResizedCrop { area: 0.5, x: 0.0, y: 0.0 }).unwrap_err();
        assert!(matches!(err, AugmentError::DegenerateImage { width: 7, height: 7 }));
    }

    #[test]
    fn erase_is_bounded() {
        let img = RgbImage::filled(50, 40, [255; 3]);
        for (area, aspect) in [(0.2, 0.3), (0.2, 3.3), (0.05, 1.0), (0.2, 1.0)] {
            let out = apply_op(&img, OpParams::Erase { area, aspect, x: 0.5, y: 1.0 }).unwrap();
            let zeros = out.data().chunks(3).filter(|p| p == &[0, 0, 0]).count();
            assert!(zeros > 0 && zeros as f64 <= 0.2 * 2000.0, "{area} {aspect}: {zeros}");
        }
    }

    #[test]
    fn variants_are_deterministic_and_distinct() {
        let spec = AugmentSpec::new(42, AugmentOp::ALL.to_vec(), 4);
        let img = scene();
        let a = augment(&img, &spec, 7, 1).unwrap();
        assert_eq!(a, augment(&img, &spec, 7, 1).unwrap());
        assert_ne!(a, augment(&img, &spec, 7, 2).unwrap());
        assert_ne!(a, augment(&img, &spec, 8, 1).unwrap());
        assert_eq!((a.width(), a.height()), (64, 48));
    }

    #[test]
    fn params_stay_in_range() {
        let spec = AugmentSpec::new(9, AugmentOp::ALL.to_vec(), 1);
        for id in 0..200 {
            for p in variant_params(&spec, id, 1) {
                match p {
                    OpParams::ColorJitter { alpha, beta } => {
                        assert!((0.8..=1.2).contains(&alpha) && (-20.0..=20.0).contains(&beta))
                    }
                    OpParams::Rotate { degrees } => assert!((-15.0..=15.0).contains(&degrees)),
                    OpParams::ResizedCrop { area, .. } => assert!((0.7..=1.0).contains(&area)),
                    OpParams::Erase { area, .. } => assert!(area <= 0.2),
                }
            }
        }
    }

    #[test]
    fn spec_validation() {
        assert!(AugmentSpec::new(0, vec![], 1).validate().is_err());
        let mut s = AugmentSpec::new(0, vec![AugmentOp::Erase], 1);
        s.ranges.erase_area = (0.1, 0.3);
        assert!(s.validate().is_err());
        s.ranges.erase_area = (0.1, 0.2);
        assert!(s.validate().is_ok());
    }

    #[test]
    fn corpus_layout() {
        let sources: Vec<_> = (0..10).map(|i| (i, synthetic_scene(5, i, 32, 32))).collect();
        let spec = AugmentSpec::new(3, AugmentOp::ALL.to_vec(), 4);
        let corpus = augment_corpus(&sources, &spec).unwrap();
        assert_eq!(corpus.len(), 50);
        for (i, a) in corpus.iter().enumerate() {
            assert_eq!((a.source_id, a.variant), ((i / 5) as u64, (i % 5) as u64));
        }
        assert_eq!(corpus[5].image, sources[1].1);
        assert_eq!(corpus, augment_corpus(&sources, &spec).unwrap());

        let spec0 = AugmentSpec::new(3, AugmentOp::ALL.to_vec(), 0);
        assert_eq!(augment_corpus(&sources, &spec0).unwrap().len(), 10);
    }
}
