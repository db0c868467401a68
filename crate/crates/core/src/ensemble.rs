//! Discrete AdaBoost over single-voxel stumps.
//!
//! The classifier is `P(x) = sum_t w_t f_t(x)` with `f_t(x) in {-1, +1}`
//! and the label is POS iff `P(x) > 0`. Each round trains a stump on every
//! candidate voxel not yet in the ensemble, keeps the one with the lowest
//! weighted error `e`, gives it weight `0.5 ln((1 - e) / e)` and reweights
//! the samples by `exp(-w y f(x))`. A voxel enters the ensemble at most
//! once, so training stops early when the candidates run out.

use std::fs;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dataset::{BrainMask, Label, LabeledScan};
use crate::relieff::CandidateSet;
use crate::stump::{
    approx_min_error, check_weighted_labels, fit_sorted, SortedFeature, Stump, StumpCriterion,
    StumpFit, WeightedLabels,
};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BoostConfig {
    pub rounds: usize,
    /// Weighted errors are clamped to `[floor, 1 - floor]` before weighting.
    pub epsilon_floor: f64,
    pub criterion: StumpCriterion,
}

impl Default for BoostConfig {
    fn default() -> Self {
        BoostConfig {
            rounds: 260,
            epsilon_floor: 1e-10,
            criterion: StumpCriterion::WeightedError,
        }
    }
}

impl BoostConfig {
    pub fn validate(&self) -> Result<()> {
        if self.rounds == 0 {
            return Err(Error::InvalidConfig("rounds must be >= 1".into()));
        }
        if !(self.epsilon_floor > 0.0 && self.epsilon_floor < 0.5) {
            return Err(Error::InvalidConfig(format!(
                "epsilon_floor must lie in (0, 0.5), got {}",
                self.epsilon_floor
            )));
        }
        Ok(())
    }
}

/// `0.5 ln((1 - e) / e)` with `e` clamped to `[floor, 1 - floor]`.
pub fn member_weight(weighted_error: f64, epsilon_floor: f64) -> f64 {
    let e = weighted_error.clamp(epsilon_floor, 1.0 - epsilon_floor);
    0.5 * ((1.0 - e) / e).ln()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Member {
    #[serde(flatten)]
    pub stump: Stump,
    pub weight: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Ensemble {
    pub members: Vec<Member>,
    /// Candidate voxels the ensemble was trained from.
    pub candidates: CandidateSet,
}

impl Ensemble {
    /// `sum_t w_t f_t(x)`, summed in member order.
    pub fn decision_value(&self, features: &[f32]) -> f64 {
        self.members
            .iter()
            .fold(0.0, |acc, m| acc + m.weight * m.stump.vote(features))
    }

    /// POS iff the decision value is strictly positive.
    pub fn predict(&self, features: &[f32]) -> Label {
        if self.decision_value(features) > 0.0 {
            Label::Pos
        } else {
            Label::Neg
        }
    }

    pub fn feature_indices(&self) -> Vec<usize> {
        self.members.iter().map(|m| m.stump.feature_index).collect()
    }
}

pub fn decision_value(ensemble: &Ensemble, scan: &LabeledScan) -> f64 {
    ensemble.decision_value(&scan.features)
}

pub fn predict(ensemble: &Ensemble, scan: &LabeledScan) -> Label {
    ensemble.predict(&scan.features)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RoundRecord {
    pub feature_index: usize,
    /// Unclamped weighted error of the chosen stump.
    pub weighted_error: f64,
    pub gain: f64,
    pub member_weight: f64,
    /// `sum_i exp(-y_i P_t(x_i))` over the training scans after this round.
    pub exp_loss: f64,
    pub train_accuracy: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct TrainReport {
    pub rounds: Vec<RoundRecord>,
}

impl TrainReport {
    /// `prod_t 2 sqrt(e_t (1 - e_t))`, the classic bound on training error.
    pub fn training_error_bound(&self) -> f64 {
        self.rounds
            .iter()
            .map(|r| 2.0 * (r.weighted_error * (1.0 - r.weighted_error)).sqrt())
            .product()
    }
}

fn pick(a: &StumpFit, b: &StumpFit) -> bool {
    // true when `a` beats `b`
    a.weighted_error < b.weighted_error
        || (a.weighted_error == b.weighted_error
            && (a.gain > b.gain
                || (a.gain == b.gain && a.stump.feature_index < b.stump.feature_index)))
}

/// Boosts stumps over `candidates` on `train`.
pub fn train_ensemble(
    train: &[&LabeledScan],
    candidates: &CandidateSet,
    cfg: &BoostConfig,
) -> Result<(Ensemble, TrainReport)> {
    cfg.validate()?;
    if candidates.is_empty() {
        return Err(Error::InvalidInput("no candidate features".into()));
    }
    let first = train
        .first()
        .ok_or_else(|| Error::InvalidInput("empty training set".into()))?;
    let p = first.features.len();
    if let Some(s) = train.iter().find(|s| s.features.len() != p) {
        return Err(Error::DimensionMismatch {
            expected: p,
            found: s.features.len(),
        });
    }
    let mut features = Vec::with_capacity(candidates.len());
    for f in candidates.indices() {
        if f >= p {
            return Err(Error::InvalidInput(format!("candidate {f} out of range for {p} features")));
        }
        if !features.contains(&f) {
            features.push(f);
        }
    }

    let n = train.len();
    let labels: Vec<Label> = train.iter().map(|s| s.label).collect();
    let y: Vec<f64> = labels.iter().map(|l| l.sign()).collect();
    let mut weights = vec![1.0 / n as f64; n];
    check_weighted_labels(&labels, &weights)?;

    let sorted: Vec<SortedFeature> = features
        .par_iter()
        .map(|&f| SortedFeature::new(train.iter().map(|s| s.features[f] as f64).collect()))
        .collect();

    let mut remaining: Vec<usize> = (0..features.len()).collect();
    let mut margin = vec![0.0f64; n];
    let mut members = Vec::new();
    let mut report = TrainReport::default();

    while members.len() < cfg.rounds && !remaining.is_empty() {
        let wl = WeightedLabels::new(&labels, &weights);
        let shortlist: Vec<usize> = match cfg.criterion {
            StumpCriterion::WeightedError => {
                let approx: Vec<f64> = remaining
                    .par_iter()
                    .map(|&c| approx_min_error(&sorted[c], &wl))
                    .collect();
                let min = approx.iter().copied().fold(f64::INFINITY, f64::min);
                let limit = min + 1e-9 * (wl.pos + wl.neg);
                remaining
                    .iter()
                    .zip(&approx)
                    .filter(|(_, &a)| a <= limit)
                    .map(|(&c, _)| c)
                    .collect()
            }
            StumpCriterion::Gain => remaining.clone(),
        };
        let fits: Vec<(usize, StumpFit)> = shortlist
            .par_iter()
            .map(|&c| (c, fit_sorted(features[c], &sorted[c], &wl, cfg.criterion)))
            .collect();
        let (chosen, fit) = fits
            .into_iter()
            .reduce(|best, cand| if pick(&cand.1, &best.1) { cand } else { best })
            .expect("shortlist is never empty");

        let total = wl.pos + wl.neg;
        let eps = fit.weighted_error / total;
        let alpha = member_weight(eps, cfg.epsilon_floor);
        let column = &sorted[chosen].values;
        for i in 0..n {
            let vote = fit.stump.predict_value(column[i]).sign();
            margin[i] += alpha * vote;
            weights[i] *= (-alpha * y[i] * vote).exp();
        }
        let sum: f64 = weights.iter().sum();
        weights.iter_mut().for_each(|w| *w /= sum);

        let exp_loss: f64 = margin.iter().zip(&y).map(|(m, yi)| (-yi * m).exp()).sum();
        let correct = margin
            .iter()
            .zip(&labels)
            .filter(|(&m, &l)| (if m > 0.0 { Label::Pos } else { Label::Neg }) == l)
            .count();
        report.rounds.push(RoundRecord {
            feature_index: fit.stump.feature_index,
            weighted_error: eps,
            gain: fit.gain,
            member_weight: alpha,
            exp_loss,
            train_accuracy: correct as f64 / n as f64,
        });
        members.push(Member {
            stump: fit.stump,
            weight: alpha,
        });
        remaining.retain(|&c| c != chosen);
    }

    Ok((
        Ensemble {
            members,
            candidates: candidates.clone(),
        },
        report,
    ))
}

/// Identifies the grid and mask a model was trained on.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MaskFingerprint {
    pub dims: [usize; 3],
    pub n_features: usize,
    pub mask_sha256: String,
}

impl MaskFingerprint {
    pub fn of(mask: &BrainMask) -> Self {
        MaskFingerprint {
            dims: mask.grid().dims,
            n_features: mask.n_features(),
            mask_sha256: mask.checksum(),
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelFile {
    fingerprint: MaskFingerprint,
    members: Vec<Member>,
}

pub fn save_model(path: impl AsRef<Path>, ensemble: &Ensemble, mask: &BrainMask) -> Result<()> {
    let path = path.as_ref();
    let file = ModelFile {
        fingerprint: MaskFingerprint::of(mask),
        members: ensemble.members.clone(),
    };
    let mut json = serde_json::to_vec_pretty(&file)?;
    json.push(b'\n');
    fs::write(path, json).map_err(|e| Error::io(path, e))
}

/// Loads a model, refusing it unless it was trained on `mask`.
pub fn load_model(path: impl AsRef<Path>, mask: &BrainMask) -> Result<Ensemble> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    let file: ModelFile = serde_json::from_slice(&bytes)?;
    let expected = MaskFingerprint::of(mask);
    if file.fingerprint != expected {
        return Err(Error::Model(format!(
            "model fingerprint {:?} does not match mask {:?}",
            file.fingerprint, expected
        )));
    }
    if let Some(m) = file
        .members
        .iter()
        .find(|m| m.stump.feature_index >= expected.n_features || !m.weight.is_finite())
    {
        return Err(Error::Model(format!("invalid member {m:?}")));
    }
    Ok(Ensemble {
        candidates: CandidateSet::from_indices(file.members.iter().map(|m| m.stump.feature_index)),
        members: file.members,
    })
}
