//! Synthetic datasets with a planted class signal.
//!
//! The layout mirrors a block-design recording: each participant has a run
//! of sessions, each session a few single-label blocks, each block a fixed
//! number of consecutive scans. Rest and control-task scans are not
//! generated.

use std::collections::BTreeSet;

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::{default_label_names, BrainMask, DatasetBundle, Label, LabeledScan, VolumeGrid};
use crate::rng::{seeded, Stream};
use crate::{Error, Result};

/// How labels are assigned to sessions.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LabelLayout {
    /// First half of the sessions NEG, second half POS.
    #[default]
    SessionHalves,
    /// Even sessions NEG, odd sessions POS.
    AlternatingSessions,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SyntheticSpec {
    pub n_participants: u32,
    pub sessions_per_participant: u32,
    /// Blocks each session contributes for its label.
    pub blocks_per_session_per_label: u32,
    pub scans_per_block: u32,
    pub n_features: usize,
    /// Feature indices carrying the class signal.
    pub planted: Vec<usize>,
    /// Class mean separation at planted features, in units of `noise_sigma`.
    pub effect_size: f64,
    /// Standard deviation of the per-participant shift added to every feature.
    pub participant_offset_sigma: f64,
    pub noise_sigma: f64,
    pub seed: u64,
    pub label_layout: LabelLayout,
}

impl Default for SyntheticSpec {
    fn default() -> Self {
        SyntheticSpec {
            n_participants: 4,
            sessions_per_participant: 12,
            blocks_per_session_per_label: 3,
            scans_per_block: 16,
            n_features: 6000,
            planted: Vec::new(),
            effect_size: 1.0,
            participant_offset_sigma: 0.5,
            noise_sigma: 1.0,
            seed: 0,
            label_layout: LabelLayout::SessionHalves,
        }
    }
}

impl SyntheticSpec {
    /// Defaults with `n_planted` features planted as one compact blob at the
    /// centre of the synthetic mask.
    pub fn with_blob(
        n_participants: u32,
        n_features: usize,
        n_planted: usize,
        effect_size: f64,
        seed: u64,
    ) -> Self {
        let planted = blob_indices(&synthetic_mask(n_features), n_planted);
        SyntheticSpec {
            n_participants,
            n_features,
            planted,
            effect_size,
            seed,
            ..SyntheticSpec::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidConfig(m));
        if self.n_features == 0 {
            return bad("n_features must be >= 1".into());
        }
        if self.sessions_per_participant == 0
            || self.blocks_per_session_per_label == 0
            || self.scans_per_block == 0
        {
            return bad("sessions, blocks and scans per block must be >= 1".into());
        }
        if !(self.effect_size >= 0.0 && self.effect_size.is_finite()) {
            return bad(format!("effect_size must be >= 0, got {}", self.effect_size));
        }
        for (name, v) in [
            ("participant_offset_sigma", self.participant_offset_sigma),
            ("noise_sigma", self.noise_sigma),
        ] {
            if !(v >= 0.0 && v.is_finite()) {
                return bad(format!("{name} must be >= 0, got {v}"));
            }
        }
        let mut seen = BTreeSet::new();
        for &i in &self.planted {
            if i >= self.n_features {
                return bad(format!("planted index {i} >= n_features {}", self.n_features));
            }
            if !seen.insert(i) {
                return bad(format!("planted index {i} repeated"));
            }
        }
        Ok(())
    }

    fn session_label(&self, session: u32) -> Label {
        match self.label_layout {
            LabelLayout::SessionHalves => {
                if session < self.sessions_per_participant / 2 {
                    Label::Neg
                } else {
                    Label::Pos
                }
            }
            LabelLayout::AlternatingSessions => {
                if session.is_multiple_of(2) {
                    Label::Neg
                } else {
                    Label::Pos
                }
            }
        }
    }
}

/// Mask of `n_features` voxels: the voxels closest (in millimetres) to the
/// centre of a cubic grid with 3 x 3 x 4 mm voxels.
pub fn synthetic_mask(n_features: usize) -> BrainMask {
    let side = (n_features as f64).cbrt().ceil() as usize + 2;
    let vs = VolumeGrid::DEFAULT_VOXEL_SIZE_MM;
    let origin = std::array::from_fn(|a| -((side - 1) as f64) * vs[a] / 2.0);
    let grid = VolumeGrid::new([side; 3], vs, origin).expect("synthetic grid is valid");
    let chosen = nearest_voxels(&grid, [0.0; 3], (0..grid.n_voxels()).collect(), n_features);
    let mut in_mask = vec![false; grid.n_voxels()];
    for linear in chosen {
        in_mask[linear] = true;
    }
    BrainMask::new(grid, in_mask).expect("mask length matches grid")
}

/// Feature indices of the `count` in-mask voxels nearest the grid centre,
/// ascending. Ties are broken by linear index.
pub fn blob_indices(mask: &BrainMask, count: usize) -> Vec<usize> {
    let grid = mask.grid();
    let centre = std::array::from_fn(|a| {
        grid.origin_mm[a] + (grid.dims[a] - 1) as f64 * grid.voxel_size_mm[a] / 2.0
    });
    let candidates = (0..mask.n_features()).map(|f| mask.linear_of(f)).collect();
    let mut out: Vec<usize> = nearest_voxels(grid, centre, candidates, count)
        .into_iter()
        .filter_map(|l| mask.feature_of(l))
        .collect();
    out.sort_unstable();
    out
}

fn nearest_voxels(grid: &VolumeGrid, centre: [f64; 3], mut linear: Vec<usize>, count: usize) -> Vec<usize> {
    let d2 = |l: usize| {
        let w = grid.world_mm(l);
        (0..3).map(|a| (w[a] - centre[a]).powi(2)).sum::<f64>()
    };
    linear.sort_by(|&a, &b| d2(a).total_cmp(&d2(b)).then(a.cmp(&b)));
    linear.truncate(count);
    linear
}

/// Generates a bundle on [`synthetic_mask`] and returns it with the planted
/// indices.
///
/// Per scan and feature: `noise_sigma * z + offset_p`, plus
/// `±effect_size / 2 * noise_sigma` (sign by label) at planted features,
/// where `offset_p ~ N(0, participant_offset_sigma²)` is drawn once per
/// participant. Each participant draws from its own seeded stream.
pub fn generate_synthetic(spec: &SyntheticSpec) -> Result<(DatasetBundle, Vec<usize>)> {
    spec.validate()?;
    let mask = synthetic_mask(spec.n_features);
    let p = spec.n_features;
    let mut is_planted = vec![false; p];
    for &i in &spec.planted {
        is_planted[i] = true;
    }
    let shift = spec.effect_size / 2.0 * spec.noise_sigma;

    let mut scans = Vec::new();
    for participant in 0..spec.n_participants {
        let mut rng = seeded(spec.seed, Stream::Synthetic(participant as u64));
        let z: f64 = rng.sample(StandardNormal);
        let offset = spec.participant_offset_sigma * z;
        for session in 0..spec.sessions_per_participant {
            let label = spec.session_label(session);
            for b in 0..spec.blocks_per_session_per_label {
                let block_id = session * spec.blocks_per_session_per_label + b;
                for scan_index in 0..spec.scans_per_block {
                    let features: Vec<f32> = (0..p)
                        .map(|i| {
                            let z: f64 = rng.sample(StandardNormal);
                            let mut v = spec.noise_sigma * z + offset;
                            if is_planted[i] {
                                v += label.sign() * shift;
                            }
                            v as f32
                        })
                        .collect();
                    scans.push(LabeledScan {
                        features: features.into(),
                        label,
                        participant_id: participant,
                        session_id: session,
                        block_id,
                        scan_index,
                    });
                }
            }
        }
    }
    let bundle = DatasetBundle::new(mask, scans, default_label_names())?;
    let mut planted = spec.planted.clone();
    planted.sort_unstable();
    Ok((bundle, planted))
}
