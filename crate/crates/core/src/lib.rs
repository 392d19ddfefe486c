//! Near-duplicate image deduplication with 64-bit perceptual hashes.
//!
//! Images are reduced to AHash, DHash, PHash or WHash fingerprints,
//! indexed in a BK-tree, and deduplicated in a single first-seen-kept pass
//! at a hamming-distance threshold. The crate also ingests image
//! directories and CIFAR binaries, generates seeded near-duplicate corpora,
//! and reports reduction, neighbourhood and threshold-sweep statistics.

pub mod augment;
pub mod dataset;
pub mod hashing;
pub mod imaging;
pub mod index;
pub mod metrics;
pub mod pipeline;
pub mod spectral;

pub use hashing::{hamming, Hash64, HashAlgo, Hasher, ThresholdStat};
pub use imaging::{PixelGrid, RgbImage};
pub use index::{dedup_stream, BkIndex, DedupOutcome, Threshold};
