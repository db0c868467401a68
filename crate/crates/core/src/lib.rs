//! Decoding binary labels from brain-scan feature vectors.
//!
//! The pipeline ranks voxels with ReliefF, keeps the top candidates, and
//! boosts single-voxel decision stumps over them. Around it sit the pieces
//! needed to trust the numbers: block- and participant-level splits that
//! keep test scans out of training, Monte Carlo cross-validation,
//! block-label permutation tests, selection-frequency histograms and the
//! smoothing / thresholding / cluster filtering used to render them as maps.
//!
//! ```no_run
//! use voxdecode::dataset::{generate_synthetic, SyntheticSpec};
//! use voxdecode::evaluation::{run_cv, PipelineConfig, Scheme};
//!
//! let spec = SyntheticSpec::with_blob(4, 6000, 40, 1.5, 7);
//! let (bundle, _planted) = generate_synthetic(&spec).unwrap();
//! let cfg = PipelineConfig { cycles: 5, ..PipelineConfig::within_default() };
//! let report = run_cv(&bundle, Scheme::Within(0), &cfg).unwrap();
//! println!("mean accuracy {:.3}", report.mean_accuracy);
//! ```

pub mod cli;
pub mod dataset;
pub mod ensemble;
mod error;
pub mod evaluation;
pub mod relieff;
mod rng;
pub mod stability;
pub mod stump;

pub use error::{Error, Result};
