//! ReliefF feature relevance.
//!
//! For each sampled training instance the `K` nearest same-class scans
//! (hits) and `K` nearest opposite-class scans (misses) are located by the
//! Manhattan distance over range-normalised features. Each feature's weight
//! then moves down by its mean normalised difference to the hits and up by
//! its mean normalised difference to the misses:
//!
//! ```text
//! W_i <- W_i - sum_k diff_i(x, H_k) / (n K) + sum_k diff_i(x, M_k) / (n K)
//! diff_i(a, b) = |a_i - b_i| / (max_i - min_i)
//! ```
//!
//! with `n` the number of sampled instances. Features with zero range over
//! the training set contribute `diff = 0` and keep weight 0.

use rand::seq::index;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dataset::{Label, LabeledScan};
use crate::rng::{seeded, Stream};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ReliefFConfig {
    pub k_neighbors: usize,
    /// Fraction of training scans sampled as instances, in (0, 1].
    pub sample_fraction: f64,
    pub seed: u64,
    pub top_n: usize,
}

impl Default for ReliefFConfig {
    fn default() -> Self {
        ReliefFConfig {
            k_neighbors: 3,
            sample_fraction: 0.10,
            seed: 0,
            top_n: 2500,
        }
    }
}

impl ReliefFConfig {
    pub fn validate(&self) -> Result<()> {
        if self.k_neighbors == 0 {
            return Err(Error::InvalidConfig("k_neighbors must be >= 1".into()));
        }
        if !(self.sample_fraction > 0.0 && self.sample_fraction <= 1.0) {
            return Err(Error::InvalidConfig(format!(
                "sample_fraction must lie in (0, 1], got {}",
                self.sample_fraction
            )));
        }
        if self.top_n == 0 {
            return Err(Error::InvalidConfig("top_n must be >= 1".into()));
        }
        Ok(())
    }

    /// Number of instances drawn from `n_train` scans.
    pub fn n_sampled(&self, n_train: usize) -> usize {
        ((self.sample_fraction * n_train as f64).round() as usize).clamp(1, n_train.max(1))
    }
}

/// Nearest hits and misses of one sampled instance, as positions in the
/// training list, nearest first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NeighborSets {
    pub instance: usize,
    pub hits: Vec<usize>,
    pub misses: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FeatureScores {
    pub weights: Vec<f64>,
    pub n_sampled: usize,
    /// Feature indices by weight descending, index ascending on ties.
    pub ranking: Vec<usize>,
}

impl FeatureScores {
    pub fn from_weights(weights: Vec<f64>, n_sampled: usize) -> Self {
        let mut ranking: Vec<usize> = (0..weights.len()).collect();
        ranking.sort_by(|&a, &b| weights[b].total_cmp(&weights[a]).then(a.cmp(&b)));
        FeatureScores {
            weights,
            n_sampled,
            ranking,
        }
    }

    /// `feature_index\tweight` lines in ranking order, with a header.
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("feature_index\tweight\n");
        for &i in &self.ranking {
            out.push_str(&format!("{i}\t{}\n", self.weights[i]));
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Candidate {
    pub feature_index: usize,
    pub weight: f64,
}

/// The top-ranked features handed to the classifier, best first.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct CandidateSet(pub Vec<Candidate>);

impl CandidateSet {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn indices(&self) -> Vec<usize> {
        self.0.iter().map(|c| c.feature_index).collect()
    }

    /// Candidate set of the given features with zero weights.
    pub fn from_indices(indices: impl IntoIterator<Item = usize>) -> Self {
        CandidateSet(
            indices
                .into_iter()
                .map(|feature_index| Candidate {
                    feature_index,
                    weight: 0.0,
                })
                .collect(),
        )
    }
}

/// First `n` features of the ranking.
pub fn select_top(scores: &FeatureScores, n: usize) -> Result<CandidateSet> {
    let p = scores.weights.len();
    if n == 0 || n > p {
        return Err(Error::InvalidConfig(format!(
            "cannot select {n} of {p} features"
        )));
    }
    Ok(CandidateSet(
        scores.ranking[..n]
            .iter()
            .map(|&i| Candidate {
                feature_index: i,
                weight: scores.weights[i],
            })
            .collect(),
    ))
}

/// Training features rescaled to [0, 1] per feature, row-major.
struct Normalized {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Normalized {
    fn new(train: &[&LabeledScan], cols: usize) -> Self {
        let mut lo = vec![f64::INFINITY; cols];
        let mut hi = vec![f64::NEG_INFINITY; cols];
        for s in train {
            for (i, &v) in s.features.iter().enumerate() {
                let v = v as f64;
                lo[i] = lo[i].min(v);
                hi[i] = hi[i].max(v);
            }
        }
        let inv_range: Vec<f64> = lo
            .iter()
            .zip(&hi)
            .map(|(l, h)| if h > l { 1.0 / (h - l) } else { 0.0 })
            .collect();
        let mut data = Vec::with_capacity(train.len() * cols);
        for s in train {
            data.extend(
                s.features
                    .iter()
                    .enumerate()
                    .map(|(i, &v)| (v as f64 - lo[i]) * inv_range[i]),
            );
        }
        Normalized {
            rows: train.len(),
            cols,
            data,
        }
    }

    fn row(&self, r: usize) -> &[f64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }
}

fn manhattan(a: &[f64], b: &[f64]) -> f64 {
    let mut acc = [0.0f64; 8];
    let ca = a.chunks_exact(8);
    let cb = b.chunks_exact(8);
    let tail: f64 = ca
        .remainder()
        .iter()
        .zip(cb.remainder())
        .map(|(x, y)| (x - y).abs())
        .sum();
    for (x, y) in ca.zip(cb) {
        for l in 0..8 {
            acc[l] += (x[l] - y[l]).abs();
        }
    }
    ((acc[0] + acc[1]) + (acc[2] + acc[3])) + ((acc[4] + acc[5]) + (acc[6] + acc[7])) + tail
}

fn check_train(train: &[&LabeledScan], k: usize) -> Result<usize> {
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
    for label in Label::ALL {
        let n = train.iter().filter(|s| s.label == label).count();
        if n <= k {
            return Err(Error::InvalidInput(format!(
                "{n} {label} scans in training set, ReliefF with K={k} needs at least {}",
                k + 1
            )));
        }
    }
    Ok(p)
}

/// Sampled instance positions, ascending.
fn sample_instances(n_train: usize, cfg: &ReliefFConfig) -> Vec<usize> {
    let n = cfg.n_sampled(n_train);
    if n == n_train {
        return (0..n_train).collect();
    }
    let mut rng = seeded(cfg.seed, Stream::Relieff);
    let mut picked = index::sample(&mut rng, n_train, n).into_vec();
    picked.sort_unstable();
    picked
}

/// `k` entries with the smallest (distance, position).
fn nearest(mut cands: Vec<(f64, usize)>, k: usize) -> Vec<usize> {
    let cmp = |a: &(f64, usize), b: &(f64, usize)| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1));
    if cands.len() > k {
        cands.select_nth_unstable_by(k - 1, cmp);
        cands.truncate(k);
    }
    cands.sort_by(cmp);
    cands.into_iter().map(|(_, j)| j).collect()
}

const DISTANCE_BLOCK: usize = 8;

fn neighbors_of(
    norm: &Normalized,
    labels: &[Label],
    instances: &[usize],
    k: usize,
) -> Vec<NeighborSets> {
    instances
        .par_chunks(DISTANCE_BLOCK)
        .flat_map_iter(|chunk| {
            // Rows are streamed once per block of instances.
            let mut dist = vec![vec![0.0; norm.rows]; chunk.len()];
            for j in 0..norm.rows {
                let row_j = norm.row(j);
                for (c, &r) in chunk.iter().enumerate() {
                    dist[c][j] = manhattan(norm.row(r), row_j);
                }
            }
            chunk
                .iter()
                .zip(dist)
                .map(|(&r, d)| {
                    let mut same = Vec::new();
                    let mut other = Vec::new();
                    for (j, &dj) in d.iter().enumerate() {
                        if j == r {
                            continue;
                        }
                        if labels[j] == labels[r] {
                            same.push((dj, j));
                        } else {
                            other.push((dj, j));
                        }
                    }
                    NeighborSets {
                        instance: r,
                        hits: nearest(same, k),
                        misses: nearest(other, k),
                    }
                })
                .collect::<Vec<_>>()
        })
        .collect()
}

/// Hits and misses for every sampled instance, in instance order.
pub fn sampled_neighbors(train: &[&LabeledScan], cfg: &ReliefFConfig) -> Result<Vec<NeighborSets>> {
    cfg.validate()?;
    let p = check_train(train, cfg.k_neighbors)?;
    let norm = Normalized::new(train, p);
    let labels: Vec<Label> = train.iter().map(|s| s.label).collect();
    let instances = sample_instances(train.len(), cfg);
    Ok(neighbors_of(&norm, &labels, &instances, cfg.k_neighbors))
}

/// ReliefF weights for every feature of `train`.
///
/// Instances are drawn without replacement from a stream keyed by
/// `cfg.seed`; with `sample_fraction = 1` every scan is an instance and the
/// result does not depend on the seed. Neighbour ties go to the lower
/// training position.
pub fn score_features(train: &[&LabeledScan], cfg: &ReliefFConfig) -> Result<FeatureScores> {
    cfg.validate()?;
    let p = check_train(train, cfg.k_neighbors)?;
    let norm = Normalized::new(train, p);
    let labels: Vec<Label> = train.iter().map(|s| s.label).collect();
    let instances = sample_instances(train.len(), cfg);
    let neighbors = neighbors_of(&norm, &labels, &instances, cfg.k_neighbors);

    let scale = (instances.len() * cfg.k_neighbors) as f64;
    let mut weights = vec![0.0f64; p];
    for set in &neighbors {
        let x = norm.row(set.instance);
        let hits: Vec<&[f64]> = set.hits.iter().map(|&h| norm.row(h)).collect();
        let misses: Vec<&[f64]> = set.misses.iter().map(|&m| norm.row(m)).collect();
        for (i, w) in weights.iter_mut().enumerate() {
            let hit_sum: f64 = hits.iter().map(|h| (x[i] - h[i]).abs()).sum();
            let miss_sum: f64 = misses.iter().map(|m| (x[i] - m[i]).abs()).sum();
            *w = *w - hit_sum / scale + miss_sum / scale;
        }
    }
    Ok(FeatureScores::from_weights(weights, instances.len()))
}
