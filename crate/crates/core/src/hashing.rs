//! The four 64-bit perceptual hashes and hamming distance.
//!
//! Every hash thresholds an 8×8 grid of values into bits. Cell `(r, c)`
//! lands at bit position `63 − (8r + c)`, so the hex form reads the grid
//! row-major from the top-left corner. Comparisons are strict: ties give 0.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::imaging::{resize, to_grayscale, PixelGrid, RgbImage};
use crate::spectral::{haar_dwt2, DctBasis};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum HashError {
    #[error("cannot compare a {left} hash with a {right} hash")]
    AlgoMismatch { left: HashAlgo, right: HashAlgo },
    #[error("unknown hash algorithm {0:?}")]
    UnknownAlgo(String),
    #[error("unknown threshold statistic {0:?}")]
    UnknownStat(String),
    #[error("malformed hash {0:?}: expected <algo>:<16 hex digits>")]
    MalformedHash(String),
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HashAlgo {
    AHash,
    DHash,
    #[default]
    PHash,
    WHash,
}

impl HashAlgo {
    pub const ALL: [HashAlgo; 4] = [Self::AHash, Self::DHash, Self::PHash, Self::WHash];

    pub fn name(self) -> &'static str {
        match self {
            Self::AHash => "ahash",
            Self::DHash => "dhash",
            Self::PHash => "phash",
            Self::WHash => "whash",
        }
    }
}

impl fmt::Display for HashAlgo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for HashAlgo {
    type Err = HashError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|a| a.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| HashError::UnknownAlgo(s.to_string()))
    }
}

/// Statistic that splits the PHash and WHash coefficient blocks into bits.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ThresholdStat {
    #[default]
    Mean,
    Median,
}

impl FromStr for ThresholdStat {
    type Err = HashError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "mean" => Ok(Self::Mean),
            "median" => Ok(Self::Median),
            _ => Err(HashError::UnknownStat(s.to_string())),
        }
    }
}

impl fmt::Display for ThresholdStat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Mean => "mean",
            Self::Median => "median",
        })
    }
}

/// A 64-bit perceptual hash tagged with the algorithm that produced it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Hash64 {
    pub bits: u64,
    pub algo: HashAlgo,
}

impl Hash64 {
    pub fn new(algo: HashAlgo, bits: u64) -> Self {
        Self { bits, algo }
    }

    /// Sixteen lowercase hex digits.
    pub fn hex(&self) -> String {
        format!("{:016x}", self.bits)
    }

    /// Bit for grid cell `(r, c)`.
    pub fn cell(&self, r: usize, c: usize) -> bool {
        self.bits >> (63 - (8 * r + c)) & 1 == 1
    }
}

impl fmt::Display for Hash64 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{:016x}", self.algo, self.bits)
    }
}

impl FromStr for Hash64 {
    type Err = HashError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let malformed = || HashError::MalformedHash(s.to_string());
        let (algo, hex) = s.split_once(':').ok_or_else(malformed)?;
        if hex.len() != 16 || !hex.bytes().all(|b| b.is_ascii_digit() || (b'a'..=b'f').contains(&b)) {
            return Err(malformed());
        }
        let bits = u64::from_str_radix(hex, 16).map_err(|_| malformed())?;
        Ok(Self { bits, algo: algo.parse()? })
    }
}

/// Number of differing bits between two hashes of the same algorithm.
pub fn hamming(a: Hash64, b: Hash64) -> Result<u32, HashError> {
    if a.algo != b.algo {
        return Err(HashError::AlgoMismatch { left: a.algo, right: b.algo });
    }
    Ok((a.bits ^ b.bits).count_ones())
}

/// Packs 64 row-major predicates into the canonical bit layout.
fn pack(bits: impl IntoIterator<Item = bool>) -> u64 {
    bits.into_iter().take(64).fold(0u64, |acc, b| (acc << 1) | b as u64)
}

/// Mean accumulated relative to the first value, exact when all values
/// are equal.
fn mean(values: &[f64]) -> f64 {
    let base = values[0];
    base + values.iter().map(|v| v - base).sum::<f64>() / values.len() as f64
}

/// Median; the mean of the two middle values for even lengths.
fn median(values: &[f64]) -> f64 {
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len();
    if n % 2 == 1 {
        sorted[n / 2]
    } else {
        (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0
    }
}

fn threshold_bits(values: &[f64], stat: ThresholdStat) -> u64 {
    let t = match stat {
        ThresholdStat::Mean => mean(values),
        ThresholdStat::Median => median(values),
    };
    pack(values.iter().map(|v| *v > t))
}

fn resized(gray: &PixelGrid, w: usize, h: usize) -> PixelGrid {
    resize(gray, w, h).expect("hash grid sizes are non-zero")
}

/// Average hash of a grayscale grid: 8×8 downsample thresholded at its mean.
pub fn ahash_gray(gray: &PixelGrid) -> u64 {
    threshold_bits(resized(gray, 8, 8).data(), ThresholdStat::Mean)
}

/// Difference hash: 9 wide × 8 high downsample, bit set when a pixel is
/// brighter than its right-hand neighbour.
pub fn dhash_gray(gray: &PixelGrid) -> u64 {
    let g = resized(gray, 9, 8);
    pack((0..8).flat_map(|r| {
        let g = &g;
        (0..8).map(move |c| g.get(r, c) > g.get(r, c + 1))
    }))
}

fn dct32() -> &'static DctBasis {
    static BASIS: OnceLock<DctBasis> = OnceLock::new();
    BASIS.get_or_init(|| DctBasis::new(32))
}

/// DCT hash: 32×32 downsample, lowest 8×8 frequencies (DC included)
/// thresholded at `stat`.
pub fn phash_gray(gray: &PixelGrid, stat: ThresholdStat) -> u64 {
    let g = resized(gray, 32, 32);
    let low = dct32().forward_low(g.data(), 8);
    threshold_bits(&low, stat)
}

/// Wavelet hash: 64×64 downsample, three Haar levels, 8×8 LL band
/// thresholded at `stat`.
pub fn whash_gray(gray: &PixelGrid, stat: ThresholdStat) -> u64 {
    let g = resized(gray, 64, 64);
    let coeffs = haar_dwt2(&g, 3).expect("64 is divisible by 2^3");
    threshold_bits(&coeffs.top_left(8), stat)
}

/// Algorithm plus its threshold statistic. `stat` is ignored by AHash
/// (always the mean) and DHash (no threshold).
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Hasher {
    pub algo: HashAlgo,
    pub stat: ThresholdStat,
}

impl Hasher {
    pub fn new(algo: HashAlgo) -> Self {
        Self { algo, stat: ThresholdStat::Mean }
    }

    pub fn with_stat(mut self, stat: ThresholdStat) -> Self {
        self.stat = stat;
        self
    }

    pub fn hash_gray(&self, gray: &PixelGrid) -> Hash64 {
        let bits = match self.algo {
            HashAlgo::AHash => ahash_gray(gray),
            HashAlgo::DHash => dhash_gray(gray),
            HashAlgo::PHash => phash_gray(gray, self.stat),
            HashAlgo::WHash => whash_gray(gray, self.stat),
        };
        Hash64::new(self.algo, bits)
    }

    pub fn hash(&self, img: &RgbImage) -> Hash64 {
        self.hash_gray(&to_grayscale(img))
    }
}

pub fn ahash(img: &RgbImage) -> Hash64 {
    Hasher::new(HashAlgo::AHash).hash(img)
}

pub fn dhash(img: &RgbImage) -> Hash64 {
    Hasher::new(HashAlgo::DHash).hash(img)
}

pub fn phash(img: &RgbImage) -> Hash64 {
    Hasher::new(HashAlgo::PHash).hash(img)
}

pub fn whash(img: &RgbImage) -> Hash64 {
    Hasher::new(HashAlgo::WHash).hash(img)
}
