//! Selection-frequency maps.
//!
//! Per participant, ReliefF selection is repeated over many block-level
//! splits and the number of times each voxel lands in the top-N is counted.
//! Counts from several participants are added on the common grid, smoothed
//! with a Gaussian kernel, thresholded to the highest voxels and stripped of
//! small connected clusters.

mod cluster;
mod export;
mod smooth;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dataset::{split_block_level, BrainMask, DatasetBundle, VolumeGrid};
use crate::evaluation::PipelineConfig;
use crate::relieff::{score_features, select_top, ReliefFConfig};
use crate::{Error, Result};

pub use cluster::{connected_components, remove_small_clusters, threshold_top, ClusterMask, Connectivity};
pub use export::{clusters_tsv, write_map, MapHeader};
pub use smooth::{fwhm_to_sigma_voxels, gaussian_kernel, smooth_map};

/// How often each feature entered the top-N over `n_folds` splits.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VoxelHistogram {
    pub counts: Vec<u32>,
    pub n_folds: usize,
    pub participant_id: Option<u32>,
}

/// Real value per grid voxel.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScalarMap {
    pub grid: VolumeGrid,
    pub values: Vec<f64>,
}

impl ScalarMap {
    pub fn zeros(grid: VolumeGrid) -> Self {
        let values = vec![0.0; grid.n_voxels()];
        ScalarMap { grid, values }
    }
}

/// Fold `f` splits with seed `cfg.seed + f` and scores the train side with
/// the same seed. `top_n` is capped at the number of features.
pub fn selection_histogram(
    bundle: &DatasetBundle,
    participant: u32,
    n_folds: usize,
    cfg: &PipelineConfig,
) -> Result<VoxelHistogram> {
    if n_folds == 0 {
        return Err(Error::InvalidConfig("n_folds must be >= 1".into()));
    }
    cfg.validate()?;
    let selections: Vec<Vec<usize>> = (0..n_folds as u64)
        .into_par_iter()
        .map(|f| {
            let seed = cfg.seed.wrapping_add(f);
            let split = split_block_level(bundle, participant, cfg.train_fraction, seed)?;
            let relieff = ReliefFConfig {
                seed,
                ..cfg.relieff.clone()
            };
            let scores = score_features(&split.train, &relieff)?;
            let n = relieff.top_n.min(scores.weights.len());
            Ok(select_top(&scores, n)?.indices())
        })
        .collect::<Result<_>>()?;
    let mut counts = vec![0u32; bundle.n_features()];
    for sel in selections {
        for i in sel {
            counts[i] += 1;
        }
    }
    Ok(VoxelHistogram {
        counts,
        n_folds,
        participant_id: Some(participant),
    })
}

/// Adds raw counts voxel-wise and places them on the mask's grid.
pub fn superimpose(mask: &BrainMask, histograms: &[VoxelHistogram]) -> Result<ScalarMap> {
    if histograms.is_empty() {
        return Err(Error::InvalidInput("no histograms to superimpose".into()));
    }
    let mut map = ScalarMap::zeros(mask.grid().clone());
    for h in histograms {
        if h.counts.len() != mask.n_features() {
            return Err(Error::DimensionMismatch {
                expected: mask.n_features(),
                found: h.counts.len(),
            });
        }
        for (f, &c) in h.counts.iter().enumerate() {
            map.values[mask.linear_of(f)] += c as f64;
        }
    }
    Ok(map)
}
