//! Cross-validation, permutation testing and report emission.
//!
//! Two protocols are supported. [`Scheme::Within`] works on one
//! participant and holds out whole blocks; [`Scheme::Cross`] holds out
//! whole participants. In both, ReliefF scoring, candidate selection and
//! boosting see only the training side of each split.

mod confusion;
mod correlation;
mod cv;
mod permutation;
mod report;

use serde::{Deserialize, Serialize};

use crate::dataset::LabeledScan;
use crate::ensemble::{train_ensemble, BoostConfig, Ensemble, TrainReport};
use crate::relieff::{score_features, select_top, CandidateSet, ReliefFConfig};
use crate::{Error, Result};

pub use confusion::ConfusionMatrix;
pub use correlation::{correlate_behavior, Correlation};
pub use cv::{run_cv, CvReport, CycleResult};
pub use permutation::{p_value, permutation_test, permute_block_labels, PermutationReport};
pub use report::{confusion_tsv, table1_tsv, Table1Row};

/// Which cross-validation protocol to run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scheme {
    /// Block-level splits within one participant.
    Within(u32),
    /// Participant-level splits across the whole bundle.
    Cross,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum SchemeKind {
    Within,
    Cross,
}

impl Scheme {
    pub fn kind(self) -> SchemeKind {
        match self {
            Scheme::Within(_) => SchemeKind::Within,
            Scheme::Cross => SchemeKind::Cross,
        }
    }

    pub fn participant(self) -> Option<u32> {
        match self {
            Scheme::Within(p) => Some(p),
            Scheme::Cross => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    pub relieff: ReliefFConfig,
    pub boost: BoostConfig,
    pub train_fraction: f64,
    pub cycles: usize,
    pub seed: u64,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self::within_default()
    }
}

impl PipelineConfig {
    /// 100 block-level cycles with a 70/30 split.
    pub fn within_default() -> Self {
        PipelineConfig {
            relieff: ReliefFConfig::default(),
            boost: BoostConfig::default(),
            train_fraction: 0.7,
            cycles: 100,
            seed: 0,
        }
    }

    /// 20 participant-level cycles with a 70/30 split.
    pub fn cross_default() -> Self {
        PipelineConfig {
            cycles: 20,
            ..Self::within_default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.relieff.validate()?;
        self.boost.validate()?;
        if !(self.train_fraction > 0.0 && self.train_fraction < 1.0) {
            return Err(Error::InvalidConfig(format!(
                "train_fraction must lie in (0, 1), got {}",
                self.train_fraction
            )));
        }
        if self.cycles == 0 {
            return Err(Error::InvalidConfig("cycles must be >= 1".into()));
        }
        Ok(())
    }
}

/// Everything learned from one training set.
#[derive(Clone, Debug, PartialEq)]
pub struct TrainedPipeline {
    pub candidates: CandidateSet,
    pub ensemble: Ensemble,
    pub report: TrainReport,
}

/// ReliefF scoring, top-N selection and boosting on `train` only.
///
/// `seed` keys the ReliefF instance sampling; `top_n` is capped at the
/// number of features.
pub fn fit_pipeline(train: &[&LabeledScan], cfg: &PipelineConfig, seed: u64) -> Result<TrainedPipeline> {
    let relieff = ReliefFConfig {
        seed,
        ..cfg.relieff.clone()
    };
    let scores = score_features(train, &relieff)?;
    let n = relieff.top_n.min(scores.weights.len());
    let candidates = select_top(&scores, n)?;
    let (ensemble, report) = train_ensemble(train, &candidates, &cfg.boost)?;
    Ok(TrainedPipeline {
        candidates,
        ensemble,
        report,
    })
}

pub(crate) fn mean_std(values: &[f64]) -> (f64, f64) {
    if values.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}
