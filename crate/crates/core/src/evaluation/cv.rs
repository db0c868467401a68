use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{fit_pipeline, mean_std, ConfusionMatrix, PipelineConfig, Scheme, SchemeKind};
use crate::dataset::{split_block_level, split_participant_level, DatasetBundle};
use crate::Result;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CycleResult {
    pub cycle: usize,
    pub seed: u64,
    pub n_train: usize,
    pub n_test: usize,
    pub accuracy: f64,
    pub confusion: ConfusionMatrix,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CvReport {
    pub scheme: SchemeKind,
    pub participant: Option<u32>,
    pub cycles: Vec<CycleResult>,
    pub mean_accuracy: f64,
    /// Sample standard deviation of the per-cycle accuracies.
    pub std_accuracy: f64,
}

impl CvReport {
    pub fn accuracies(&self) -> Vec<f64> {
        self.cycles.iter().map(|c| c.accuracy).collect()
    }
}

/// Monte Carlo cross-validation. Cycle `c` uses seed `cfg.seed + c` for both
/// its split and its ReliefF sampling (on separate streams).
pub fn run_cv(bundle: &DatasetBundle, scheme: Scheme, cfg: &PipelineConfig) -> Result<CvReport> {
    cfg.validate()?;
    let cycles: Vec<CycleResult> = (0..cfg.cycles)
        .into_par_iter()
        .map(|cycle| {
            let seed = cfg.seed.wrapping_add(cycle as u64);
            let split = match scheme {
                Scheme::Within(p) => split_block_level(bundle, p, cfg.train_fraction, seed)?,
                Scheme::Cross => split_participant_level(bundle, cfg.train_fraction, seed)?,
            };
            let fitted = fit_pipeline(&split.train, cfg, seed)?;
            let mut confusion = ConfusionMatrix::default();
            for scan in &split.test {
                confusion.record(scan.label, fitted.ensemble.predict(&scan.features));
            }
            Ok(CycleResult {
                cycle,
                seed,
                n_train: split.train.len(),
                n_test: split.test.len(),
                accuracy: confusion.accuracy(),
                confusion,
            })
        })
        .collect::<Result<_>>()?;
    let (mean_accuracy, std_accuracy) =
        mean_std(&cycles.iter().map(|c| c.accuracy).collect::<Vec<_>>());
    Ok(CvReport {
        scheme: scheme.kind(),
        participant: scheme.participant(),
        cycles,
        mean_accuracy,
        std_accuracy,
    })
}
