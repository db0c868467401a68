use std::collections::HashMap;

use rand::seq::SliceRandom;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{run_cv, PipelineConfig, Scheme, SchemeKind};
use crate::dataset::{DatasetBundle, Label};
use crate::rng::{seeded, Stream, PERMUTATION_SEED_OFFSET};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PermutationReport {
    pub scheme: SchemeKind,
    pub participant: Option<u32>,
    pub observed: f64,
    pub null_accuracies: Vec<f64>,
    pub n_perm: usize,
    pub p_value: f64,
}

/// `(#{null >= observed} + 1) / (n + 1)`.
pub fn p_value(observed: f64, null: &[f64]) -> f64 {
    let exceed = null.iter().filter(|&&v| v >= observed).count();
    (exceed + 1) as f64 / (null.len() + 1) as f64
}

/// Shuffles labels among whole blocks, keeping the number of blocks per
/// label. `Within(p)` permutes only participant `p`'s blocks; `Cross`
/// permutes across every block of the bundle.
pub fn permute_block_labels(bundle: &DatasetBundle, scheme: Scheme, seed: u64) -> DatasetBundle {
    let blocks: Vec<((u32, u32), Label)> = bundle
        .blocks()
        .into_iter()
        .filter(|((p, _), _)| scheme.participant().is_none_or(|q| *p == q))
        .collect();
    let mut labels: Vec<Label> = blocks.iter().map(|(_, l)| *l).collect();
    let mut rng = seeded(seed, Stream::Permutation);
    labels.shuffle(&mut rng);
    let map: HashMap<(u32, u32), Label> = blocks
        .iter()
        .zip(labels)
        .map(|((key, _), l)| (*key, l))
        .collect();
    bundle.relabel_blocks(&map)
}

/// Compares the cross-validated accuracy against the accuracies obtained
/// after block-label permutations. Permutation `i` is shuffled with seed
/// `cfg.seed + 2^32 + i` and then rerun with the unchanged configuration.
pub fn permutation_test(
    bundle: &DatasetBundle,
    scheme: Scheme,
    n_perm: usize,
    cfg: &PipelineConfig,
) -> Result<PermutationReport> {
    if n_perm == 0 {
        return Err(Error::InvalidConfig("n_perm must be >= 1".into()));
    }
    let data = match scheme {
        Scheme::Within(p) => bundle.filter(|s| s.participant_id == p),
        Scheme::Cross => bundle.clone(),
    };
    let observed = run_cv(&data, scheme, cfg)?.mean_accuracy;
    let null_accuracies: Vec<f64> = (0..n_perm as u64)
        .into_par_iter()
        .map(|i| {
            let seed = cfg
                .seed
                .wrapping_add(PERMUTATION_SEED_OFFSET)
                .wrapping_add(i);
            let permuted = permute_block_labels(&data, scheme, seed);
            run_cv(&permuted, scheme, cfg).map(|r| r.mean_accuracy)
        })
        .collect::<Result<_>>()?;
    Ok(PermutationReport {
        scheme: scheme.kind(),
        participant: scheme.participant(),
        observed,
        p_value: p_value(observed, &null_accuracies),
        null_accuracies,
        n_perm,
    })
}
