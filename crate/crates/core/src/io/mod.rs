//! Tensor, manifest and result-table I/O.

pub mod manifest;
pub mod npy;
pub mod results;

pub use manifest::{load_manifest, Manifest, ManifestEntry, ManifestMetadata};
pub use npy::{read_tensor, write_tensor};
pub use results::{read_results, write_results, OutputFormat, ResultRow};
