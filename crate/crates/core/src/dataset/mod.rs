//! Data model for labeled scans on a voxel grid.
//!
//! A [`DatasetBundle`] holds the grid, the brain mask that maps grid voxels
//! to dense feature indices, and the scans themselves. Scans carry their
//! participant / session / block provenance because every split and
//! permutation in the crate operates on whole blocks or whole participants.

mod io;
mod split;
mod synth;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::{Error, Result};

pub use io::{load_dataset, save_dataset, scan_payload_bytes};
pub use split::{held_out_count, split_block_level, split_participant_level, Split};
pub use synth::{blob_indices, generate_synthetic, synthetic_mask, LabelLayout, SyntheticSpec};

/// Binary class label.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Label {
    Neg,
    Pos,
}

impl Label {
    pub const ALL: [Label; 2] = [Label::Neg, Label::Pos];

    /// `-1` for NEG, `+1` for POS.
    pub fn sign(self) -> f64 {
        match self {
            Label::Neg => -1.0,
            Label::Pos => 1.0,
        }
    }

    pub fn index(self) -> usize {
        match self {
            Label::Neg => 0,
            Label::Pos => 1,
        }
    }

    pub fn from_index(i: usize) -> Option<Label> {
        match i {
            0 => Some(Label::Neg),
            1 => Some(Label::Pos),
            _ => None,
        }
    }

    pub fn flipped(self) -> Label {
        match self {
            Label::Neg => Label::Pos,
            Label::Pos => Label::Neg,
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Label::Neg => "NEG",
            Label::Pos => "POS",
        })
    }
}

/// Regular voxel grid with physical spacing.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VolumeGrid {
    pub dims: [usize; 3],
    pub voxel_size_mm: [f64; 3],
    pub origin_mm: [f64; 3],
}

impl VolumeGrid {
    pub const DEFAULT_VOXEL_SIZE_MM: [f64; 3] = [3.0, 3.0, 4.0];

    pub fn new(dims: [usize; 3], voxel_size_mm: [f64; 3], origin_mm: [f64; 3]) -> Result<Self> {
        let grid = VolumeGrid {
            dims,
            voxel_size_mm,
            origin_mm,
        };
        grid.validate()?;
        Ok(grid)
    }

    pub fn validate(&self) -> Result<()> {
        if self.dims.contains(&0) {
            return Err(Error::InvalidInput(format!(
                "grid dims must be >= 1, got {:?}",
                self.dims
            )));
        }
        if self.voxel_size_mm.iter().any(|&s| !(s > 0.0 && s.is_finite())) {
            return Err(Error::InvalidInput(format!(
                "voxel sizes must be positive, got {:?}",
                self.voxel_size_mm
            )));
        }
        if self.origin_mm.iter().any(|o| !o.is_finite()) {
            return Err(Error::InvalidInput("grid origin must be finite".into()));
        }
        Ok(())
    }

    pub fn n_voxels(&self) -> usize {
        self.dims[0] * self.dims[1] * self.dims[2]
    }

    /// Linear index with x varying fastest.
    pub fn linear_index(&self, [x, y, z]: [usize; 3]) -> usize {
        debug_assert!(x < self.dims[0] && y < self.dims[1] && z < self.dims[2]);
        x + self.dims[0] * (y + self.dims[1] * z)
    }

    pub fn coords(&self, linear: usize) -> [usize; 3] {
        let [nx, ny, _] = self.dims;
        [linear % nx, (linear / nx) % ny, linear / (nx * ny)]
    }

    /// World position of a voxel centre in millimetres.
    pub fn world_mm(&self, linear: usize) -> [f64; 3] {
        let c = self.coords(linear);
        std::array::from_fn(|a| self.origin_mm[a] + c[a] as f64 * self.voxel_size_mm[a])
    }
}

/// Which grid voxels are features, and in which order.
///
/// Feature indices are assigned to in-mask voxels in ascending linear-index
/// order, so the mapping is fully determined by the boolean mask.
#[derive(Clone, Debug, PartialEq)]
pub struct BrainMask {
    grid: VolumeGrid,
    in_mask: Vec<bool>,
    feature_to_linear: Vec<usize>,
    linear_to_feature: Vec<Option<usize>>,
}

impl BrainMask {
    pub fn new(grid: VolumeGrid, in_mask: Vec<bool>) -> Result<Self> {
        grid.validate()?;
        if in_mask.len() != grid.n_voxels() {
            return Err(Error::DimensionMismatch {
                expected: grid.n_voxels(),
                found: in_mask.len(),
            });
        }
        let mut feature_to_linear = Vec::new();
        let mut linear_to_feature = vec![None; in_mask.len()];
        for (linear, &inside) in in_mask.iter().enumerate() {
            if inside {
                linear_to_feature[linear] = Some(feature_to_linear.len());
                feature_to_linear.push(linear);
            }
        }
        Ok(BrainMask {
            grid,
            in_mask,
            feature_to_linear,
            linear_to_feature,
        })
    }

    /// Every voxel of the grid is a feature.
    pub fn full(grid: VolumeGrid) -> Result<Self> {
        let n = grid.n_voxels();
        Self::new(grid, vec![true; n])
    }

    pub fn grid(&self) -> &VolumeGrid {
        &self.grid
    }

    pub fn in_mask(&self) -> &[bool] {
        &self.in_mask
    }

    /// Number of features `P`.
    pub fn n_features(&self) -> usize {
        self.feature_to_linear.len()
    }

    pub fn linear_of(&self, feature: usize) -> usize {
        self.feature_to_linear[feature]
    }

    pub fn feature_of(&self, linear: usize) -> Option<usize> {
        self.linear_to_feature.get(linear).copied().flatten()
    }

    pub fn feature_coords(&self, feature: usize) -> [usize; 3] {
        self.grid.coords(self.linear_of(feature))
    }

    /// Mask as one byte per voxel (0/1), linear order.
    pub fn to_bytes(&self) -> Vec<u8> {
        self.in_mask.iter().map(|&b| b as u8).collect()
    }

    /// SHA-256 of [`to_bytes`](Self::to_bytes), hex encoded.
    pub fn checksum(&self) -> String {
        hex::encode(Sha256::digest(self.to_bytes()))
    }
}

/// One scan: in-mask feature values plus label and provenance.
#[derive(Clone, Debug, PartialEq)]
pub struct LabeledScan {
    pub features: Arc<[f32]>,
    pub label: Label,
    pub participant_id: u32,
    pub session_id: u32,
    /// Unique per participant, not per session.
    pub block_id: u32,
    pub scan_index: u32,
}

impl LabeledScan {
    pub fn key(&self) -> (u32, u32, u32, u32) {
        (
            self.participant_id,
            self.session_id,
            self.block_id,
            self.scan_index,
        )
    }

    pub fn block_key(&self) -> (u32, u32) {
        (self.participant_id, self.block_id)
    }
}

pub fn default_label_names() -> BTreeMap<Label, String> {
    Label::ALL.iter().map(|&l| (l, l.to_string())).collect()
}

/// A validated collection of scans on a common mask.
#[derive(Clone, Debug, PartialEq)]
pub struct DatasetBundle {
    mask: BrainMask,
    scans: Vec<LabeledScan>,
    label_names: BTreeMap<Label, String>,
}

impl DatasetBundle {
    /// Builds a bundle, checking feature lengths, finiteness, key uniqueness
    /// and single-label blocks.
    pub fn new(
        mask: BrainMask,
        scans: Vec<LabeledScan>,
        label_names: BTreeMap<Label, String>,
    ) -> Result<Self> {
        let p = mask.n_features();
        let mut keys = HashMap::with_capacity(scans.len());
        let mut block_labels: HashMap<(u32, u32), Label> = HashMap::new();
        for (i, scan) in scans.iter().enumerate() {
            if scan.features.len() != p {
                return Err(Error::DimensionMismatch {
                    expected: p,
                    found: scan.features.len(),
                });
            }
            if let Some(j) = scan.features.iter().position(|v| !v.is_finite()) {
                return Err(Error::Dataset(format!(
                    "scan {i} has a non-finite value at feature {j}"
                )));
            }
            if let Some(prev) = keys.insert(scan.key(), i) {
                return Err(Error::Dataset(format!(
                    "scans {prev} and {i} share key (participant, session, block, scan) = {:?}",
                    scan.key()
                )));
            }
            match block_labels.insert(scan.block_key(), scan.label) {
                Some(l) if l != scan.label => {
                    return Err(Error::Dataset(format!(
                        "block {} of participant {} mixes labels",
                        scan.block_id, scan.participant_id
                    )));
                }
                _ => {}
            }
        }
        Ok(DatasetBundle {
            mask,
            scans,
            label_names,
        })
    }

    pub fn grid(&self) -> &VolumeGrid {
        self.mask.grid()
    }

    pub fn mask(&self) -> &BrainMask {
        &self.mask
    }

    pub fn scans(&self) -> &[LabeledScan] {
        &self.scans
    }

    pub fn label_names(&self) -> &BTreeMap<Label, String> {
        &self.label_names
    }

    pub fn label_name(&self, label: Label) -> String {
        self.label_names
            .get(&label)
            .cloned()
            .unwrap_or_else(|| label.to_string())
    }

    pub fn n_features(&self) -> usize {
        self.mask.n_features()
    }

    /// Sorted participant ids.
    pub fn participants(&self) -> Vec<u32> {
        self.scans
            .iter()
            .map(|s| s.participant_id)
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect()
    }

    pub fn scans_of(&self, participant: u32) -> Vec<&LabeledScan> {
        self.scans
            .iter()
            .filter(|s| s.participant_id == participant)
            .collect()
    }

    /// Blocks of one participant as `(block_id, label)`, sorted by id.
    pub fn blocks_of(&self, participant: u32) -> Vec<(u32, Label)> {
        self.scans
            .iter()
            .filter(|s| s.participant_id == participant)
            .map(|s| (s.block_id, s.label))
            .collect::<BTreeMap<_, _>>()
            .into_iter()
            .collect()
    }

    /// All `(participant, block)` keys with their labels, sorted.
    pub fn blocks(&self) -> Vec<((u32, u32), Label)> {
        self.scans
            .iter()
            .map(|s| (s.block_key(), s.label))
            .collect::<BTreeMap<_, _>>()
            .into_iter()
            .collect()
    }

    /// Copy with labels reassigned per block. Blocks missing from the map
    /// keep their label. Feature payloads are shared, not copied.
    pub fn relabel_blocks(&self, labels: &HashMap<(u32, u32), Label>) -> DatasetBundle {
        let scans = self
            .scans
            .iter()
            .map(|s| LabeledScan {
                label: labels.get(&s.block_key()).copied().unwrap_or(s.label),
                ..s.clone()
            })
            .collect();
        DatasetBundle {
            mask: self.mask.clone(),
            scans,
            label_names: self.label_names.clone(),
        }
    }

    /// Copy restricted to scans matching `keep`.
    pub fn filter(&self, keep: impl Fn(&LabeledScan) -> bool) -> DatasetBundle {
        DatasetBundle {
            mask: self.mask.clone(),
            scans: self.scans.iter().filter(|s| keep(s)).cloned().collect(),
            label_names: self.label_names.clone(),
        }
    }
}
