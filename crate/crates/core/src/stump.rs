//! Single-voxel decision stumps.
//!
//! A stump labels a scan POS when `polarity * (value - threshold) > 0` and
//! NEG otherwise, so a value equal to the threshold is always NEG.
//! Candidate thresholds are one sentinel below the smallest value plus the
//! midpoint between each pair of consecutive distinct values.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::dataset::Label;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Polarity {
    /// POS above the threshold.
    Positive,
    /// POS below the threshold.
    Negative,
}

impl Polarity {
    pub fn sign(self) -> f64 {
        match self {
            Polarity::Positive => 1.0,
            Polarity::Negative => -1.0,
        }
    }

    pub fn flipped(self) -> Polarity {
        match self {
            Polarity::Positive => Polarity::Negative,
            Polarity::Negative => Polarity::Positive,
        }
    }
}

impl Serialize for Polarity {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_i8(self.sign() as i8)
    }
}

impl<'de> Deserialize<'de> for Polarity {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        match i8::deserialize(d)? {
            1 => Ok(Polarity::Positive),
            -1 => Ok(Polarity::Negative),
            other => Err(serde::de::Error::custom(format!(
                "polarity must be 1 or -1, got {other}"
            ))),
        }
    }
}

impl fmt::Display for Polarity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Polarity::Positive => "+1",
            Polarity::Negative => "-1",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Stump {
    pub feature_index: usize,
    pub threshold: f64,
    pub polarity: Polarity,
}

impl Stump {
    pub fn predict_value(&self, value: f64) -> Label {
        if self.polarity.sign() * (value - self.threshold) > 0.0 {
            Label::Pos
        } else {
            Label::Neg
        }
    }

    /// Label for a full scan feature vector.
    pub fn predict(&self, features: &[f32]) -> Label {
        self.predict_value(features[self.feature_index] as f64)
    }

    /// `+1` / `-1` vote for a full scan feature vector.
    pub fn vote(&self, features: &[f32]) -> f64 {
        self.predict(features).sign()
    }
}

/// How a stump picks its threshold on one feature.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StumpCriterion {
    /// Minimum weighted error; ties go to higher gain, then smaller
    /// threshold, then polarity +1.
    #[default]
    WeightedError,
    /// Maximum cross-entropy gain; ties go to the smaller threshold. The
    /// polarity is the one with lower weighted error (+1 on ties).
    Gain,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StumpFit {
    pub stump: Stump,
    /// Total weight of misclassified samples.
    pub weighted_error: f64,
    /// Decrease in weighted binary entropy (bits) produced by the split.
    pub gain: f64,
}

fn entropy(pos: f64, neg: f64) -> f64 {
    let total = pos + neg;
    if total <= 0.0 {
        return 0.0;
    }
    [pos, neg]
        .iter()
        .filter(|&&w| w > 0.0)
        .map(|&w| {
            let p = w / total;
            -p * p.log2()
        })
        .sum()
}

/// Cross-entropy gain of splitting `(pos, neg)` weight into a left part
/// `(left_pos, left_neg)` and the remainder.
pub fn split_gain(pos: f64, neg: f64, left_pos: f64, left_neg: f64) -> f64 {
    let total = pos + neg;
    if total <= 0.0 {
        return 0.0;
    }
    let (right_pos, right_neg) = ((pos - left_pos).max(0.0), (neg - left_neg).max(0.0));
    let left = left_pos + left_neg;
    let right = right_pos + right_neg;
    let g = entropy(pos, neg)
        - (left / total) * entropy(left_pos, left_neg)
        - (right / total) * entropy(right_pos, right_neg);
    g.max(0.0)
}

/// One feature's values with the ascending order of the samples.
#[derive(Clone, Debug)]
pub(crate) struct SortedFeature {
    pub values: Vec<f64>,
    pub order: Vec<u32>,
    /// `boundary[k]`: value at sorted position `k` < value at `k + 1`.
    pub boundary: Vec<bool>,
}

impl SortedFeature {
    pub fn new(values: Vec<f64>) -> Self {
        let mut order: Vec<u32> = (0..values.len() as u32).collect();
        order.sort_by(|&a, &b| {
            values[a as usize]
                .total_cmp(&values[b as usize])
                .then(a.cmp(&b))
        });
        let boundary = order
            .windows(2)
            .map(|w| values[w[0] as usize] < values[w[1] as usize])
            .collect();
        SortedFeature {
            values,
            order,
            boundary,
        }
    }

    fn sorted_value(&self, k: usize) -> f64 {
        self.values[self.order[k] as usize]
    }

    fn sentinel(&self) -> f64 {
        let min = self.sorted_value(0);
        let s = min - 1.0;
        if s < min {
            s
        } else {
            min - min.abs()
        }
    }

    /// Threshold of the cut after sorted position `k` (`None` = sentinel).
    fn threshold(&self, cut: Option<usize>) -> f64 {
        match cut {
            None => self.sentinel(),
            Some(k) => {
                let (a, b) = (self.sorted_value(k), self.sorted_value(k + 1));
                let mid = 0.5 * (a + b);
                if mid < b {
                    mid
                } else {
                    a
                }
            }
        }
    }
}

/// Sample weights split by label, with the signed weights used by the
/// cumulative scan (`+w` for POS, `-w` for NEG).
#[derive(Clone, Debug)]
pub(crate) struct WeightedLabels<'a> {
    pub labels: &'a [Label],
    pub weights: &'a [f64],
    pub signed: Vec<f64>,
    pub pos: f64,
    pub neg: f64,
}

impl<'a> WeightedLabels<'a> {
    pub fn new(labels: &'a [Label], weights: &'a [f64]) -> Self {
        let signed = labels
            .iter()
            .zip(weights)
            .map(|(l, &w)| l.sign() * w)
            .collect();
        let (mut pos, mut neg) = (0.0, 0.0);
        for (l, &w) in labels.iter().zip(weights) {
            match l {
                Label::Pos => pos += w,
                Label::Neg => neg += w,
            }
        }
        WeightedLabels {
            labels,
            weights,
            signed,
            pos,
            neg,
        }
    }

    fn total(&self) -> f64 {
        self.pos + self.neg
    }
}

/// Tolerance on cumulative-sum errors when shortlisting cuts for exact
/// evaluation.
fn shortlist_tol(total: f64) -> f64 {
    1e-10 * total.max(f64::MIN_POSITIVE)
}

/// Approximate minimum weighted error over every cut and polarity, from
/// one cumulative pass.
pub(crate) fn approx_min_error(feature: &SortedFeature, wl: &WeightedLabels<'_>) -> f64 {
    let (mut lo, mut hi) = (0.0f64, 0.0f64);
    let mut s = 0.0;
    let n = feature.order.len();
    let signed = &wl.signed[..];
    for (&i, &b) in feature.order[..n - 1].iter().zip(&feature.boundary) {
        s += signed[i as usize];
        if b {
            lo = if s < lo { s } else { lo };
            hi = if s > hi { s } else { hi };
        }
    }
    (wl.neg + lo).min(wl.total() - (wl.neg + hi))
}

fn direct_error(values: &[f64], stump: &Stump, wl: &WeightedLabels<'_>) -> f64 {
    let mut err = 0.0;
    for ((&v, &l), &w) in values.iter().zip(wl.labels).zip(wl.weights) {
        if stump.predict_value(v) != l {
            err += w;
        }
    }
    err
}

struct Cut {
    cut: Option<usize>,
    left_pos: f64,
    left_neg: f64,
}

fn cuts<'f>(feature: &'f SortedFeature, wl: &'f WeightedLabels<'_>) -> impl Iterator<Item = Cut> + 'f {
    let n = feature.order.len();
    let first = Cut {
        cut: None,
        left_pos: 0.0,
        left_neg: 0.0,
    };
    let mut lp = 0.0;
    let mut ln = 0.0;
    std::iter::once(first).chain((0..n - 1).filter_map(move |k| {
        let i = feature.order[k] as usize;
        match wl.labels[i] {
            Label::Pos => lp += wl.weights[i],
            Label::Neg => ln += wl.weights[i],
        }
        feature.boundary[k].then_some(Cut {
            cut: Some(k),
            left_pos: lp,
            left_neg: ln,
        })
    }))
}

/// Best stump on a presorted feature.
pub(crate) fn fit_sorted(
    feature_index: usize,
    feature: &SortedFeature,
    wl: &WeightedLabels<'_>,
    criterion: StumpCriterion,
) -> StumpFit {
    match criterion {
        StumpCriterion::WeightedError => fit_by_error(feature_index, feature, wl),
        StumpCriterion::Gain => fit_by_gain(feature_index, feature, wl),
    }
}

fn fit_by_error(feature_index: usize, feature: &SortedFeature, wl: &WeightedLabels<'_>) -> StumpFit {
    let limit = approx_min_error(feature, wl) + shortlist_tol(wl.total());
    let mut best: Option<StumpFit> = None;
    for c in cuts(feature, wl) {
        let e_plus = c.left_pos + (wl.neg - c.left_neg);
        let e_minus = c.left_neg + (wl.pos - c.left_pos);
        for (approx, polarity) in [(e_plus, Polarity::Positive), (e_minus, Polarity::Negative)] {
            if approx > limit {
                continue;
            }
            let stump = Stump {
                feature_index,
                threshold: feature.threshold(c.cut),
                polarity,
            };
            let fit = StumpFit {
                stump,
                weighted_error: direct_error(&feature.values, &stump, wl),
                gain: split_gain(wl.pos, wl.neg, c.left_pos, c.left_neg),
            };
            // cuts arrive by increasing threshold and +1 before -1, so only
            // a strictly better (error, gain) pair replaces the incumbent
            let better = match &best {
                None => true,
                Some(b) => {
                    fit.weighted_error < b.weighted_error
                        || (fit.weighted_error == b.weighted_error && fit.gain > b.gain)
                }
            };
            if better {
                best = Some(fit);
            }
        }
    }
    best.expect("the sentinel cut is always within the shortlist")
}

fn fit_by_gain(feature_index: usize, feature: &SortedFeature, wl: &WeightedLabels<'_>) -> StumpFit {
    let mut best: Option<(f64, Option<usize>)> = None;
    for c in cuts(feature, wl) {
        let g = split_gain(wl.pos, wl.neg, c.left_pos, c.left_neg);
        if best.is_none_or(|(bg, _)| g > bg) {
            best = Some((g, c.cut));
        }
    }
    let (gain, cut) = best.expect("at least the sentinel cut");
    let threshold = feature.threshold(cut);
    let plus = Stump {
        feature_index,
        threshold,
        polarity: Polarity::Positive,
    };
    let minus = Stump {
        polarity: Polarity::Negative,
        ..plus
    };
    let (ep, em) = (
        direct_error(&feature.values, &plus, wl),
        direct_error(&feature.values, &minus, wl),
    );
    let (stump, weighted_error) = if em < ep { (minus, em) } else { (plus, ep) };
    StumpFit {
        stump,
        weighted_error,
        gain,
    }
}

pub(crate) fn check_weighted_labels(labels: &[Label], weights: &[f64]) -> Result<()> {
    if weights.iter().any(|w| !(w.is_finite() && *w >= 0.0)) {
        return Err(Error::InvalidInput("sample weights must be finite and >= 0".into()));
    }
    for label in Label::ALL {
        let mass: f64 = labels
            .iter()
            .zip(weights)
            .filter(|(l, _)| **l == label)
            .map(|(_, w)| w)
            .sum();
        if mass <= 0.0 {
            return Err(Error::InvalidInput(format!(
                "no {label} samples with positive weight"
            )));
        }
    }
    Ok(())
}

/// Trains a stump on one feature's values.
///
/// `feature_index` is recorded in the returned stump so it can be applied
/// to full feature vectors.
pub fn train_stump(
    feature_index: usize,
    values: &[f64],
    labels: &[Label],
    weights: &[f64],
    criterion: StumpCriterion,
) -> Result<StumpFit> {
    if values.len() != labels.len() || values.len() != weights.len() {
        return Err(Error::InvalidInput(format!(
            "length mismatch: {} values, {} labels, {} weights",
            values.len(),
            labels.len(),
            weights.len()
        )));
    }
    if values.len() < 2 {
        return Err(Error::InvalidInput("a stump needs at least 2 samples".into()));
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidInput("non-finite feature value".into()));
    }
    check_weighted_labels(labels, weights)?;
    let feature = SortedFeature::new(values.to_vec());
    let wl = WeightedLabels::new(labels, weights);
    Ok(fit_sorted(feature_index, &feature, &wl, criterion))
}
