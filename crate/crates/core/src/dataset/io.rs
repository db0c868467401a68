//! On-disk dataset layout: `manifest.json`, `mask.bin` and `scans.bin`.
//!
//! `mask.bin` holds one 0/1 byte per grid voxel (x fastest). `scans.bin`
//! holds each scan's `P` in-mask values as little-endian `f32`, at the byte
//! offset recorded for that scan in the manifest.

use std::collections::BTreeMap;
use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{BrainMask, DatasetBundle, Label, LabeledScan, VolumeGrid};
use crate::{Error, Result};

pub const MANIFEST_FILE: &str = "manifest.json";
pub const MASK_FILE: &str = "mask.bin";
pub const SCANS_FILE: &str = "scans.bin";

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Manifest {
    grid: VolumeGrid,
    label_names: BTreeMap<String, String>,
    scans: Vec<ScanEntry>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScanEntry {
    participant: u32,
    session: u32,
    block: u32,
    scan_index: u32,
    label: u8,
    offset: u64,
}

/// Size of `scans.bin` for `n_scans` scans of `n_features` values.
pub fn scan_payload_bytes(n_features: usize, n_scans: usize) -> u64 {
    n_features as u64 * n_scans as u64 * 4
}

/// Writes the bundle into `dir` (created if needed) and returns the
/// manifest path.
pub fn save_dataset(bundle: &DatasetBundle, dir: impl AsRef<Path>) -> Result<PathBuf> {
    let dir = dir.as_ref();
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;

    let mask_path = dir.join(MASK_FILE);
    fs::write(&mask_path, bundle.mask().to_bytes()).map_err(|e| Error::io(&mask_path, e))?;

    let scans_path = dir.join(SCANS_FILE);
    let file = fs::File::create(&scans_path).map_err(|e| Error::io(&scans_path, e))?;
    let mut out = BufWriter::new(file);
    let stride = scan_payload_bytes(bundle.n_features(), 1);
    let mut entries = Vec::with_capacity(bundle.scans().len());
    for (i, scan) in bundle.scans().iter().enumerate() {
        for v in scan.features.iter() {
            out.write_all(&v.to_le_bytes())
                .map_err(|e| Error::io(&scans_path, e))?;
        }
        entries.push(ScanEntry {
            participant: scan.participant_id,
            session: scan.session_id,
            block: scan.block_id,
            scan_index: scan.scan_index,
            label: scan.label.index() as u8,
            offset: i as u64 * stride,
        });
    }
    out.flush().map_err(|e| Error::io(&scans_path, e))?;

    let manifest = Manifest {
        grid: bundle.grid().clone(),
        label_names: bundle
            .label_names()
            .iter()
            .map(|(l, n)| (l.index().to_string(), n.clone()))
            .collect(),
        scans: entries,
    };
    let manifest_path = dir.join(MANIFEST_FILE);
    let mut json = serde_json::to_vec_pretty(&manifest)?;
    json.push(b'\n');
    fs::write(&manifest_path, json).map_err(|e| Error::io(&manifest_path, e))?;
    Ok(manifest_path)
}

fn read_file(path: &Path) -> Result<Vec<u8>> {
    fs::read(path).map_err(|e| match e.kind() {
        std::io::ErrorKind::NotFound => {
            Error::Dataset(format!("missing file {}", path.display()))
        }
        _ => Error::io(path, e),
    })
}

/// Loads a bundle from its manifest. `manifest_path` may also name the
/// dataset directory.
pub fn load_dataset(manifest_path: impl AsRef<Path>) -> Result<DatasetBundle> {
    let mut manifest_path = manifest_path.as_ref().to_path_buf();
    if manifest_path.is_dir() {
        manifest_path.push(MANIFEST_FILE);
    }
    let dir = manifest_path
        .parent()
        .map(Path::to_path_buf)
        .unwrap_or_default();

    let manifest: Manifest = serde_json::from_slice(&read_file(&manifest_path)?)
        .map_err(|e| Error::Dataset(format!("{}: {e}", manifest_path.display())))?;
    manifest
        .grid
        .validate()
        .map_err(|e| Error::Dataset(e.to_string()))?;

    let mask_bytes = read_file(&dir.join(MASK_FILE))?;
    if mask_bytes.len() != manifest.grid.n_voxels() {
        return Err(Error::Dataset(format!(
            "mask.bin has {} bytes, grid has {} voxels",
            mask_bytes.len(),
            manifest.grid.n_voxels()
        )));
    }
    if let Some(b) = mask_bytes.iter().find(|&&b| b > 1) {
        return Err(Error::Dataset(format!("mask.bin contains byte {b}, expected 0/1")));
    }
    let mask = BrainMask::new(manifest.grid, mask_bytes.iter().map(|&b| b == 1).collect())?;
    let p = mask.n_features();

    let mut label_names = BTreeMap::new();
    for (k, v) in manifest.label_names {
        let label = k
            .parse::<usize>()
            .ok()
            .and_then(Label::from_index)
            .ok_or_else(|| Error::Dataset(format!("unknown label key {k:?}")))?;
        label_names.insert(label, v);
    }

    let payload = read_file(&dir.join(SCANS_FILE))?;
    let stride = scan_payload_bytes(p, 1);
    let mut scans = Vec::with_capacity(manifest.scans.len());
    for (i, entry) in manifest.scans.iter().enumerate() {
        let start = entry.offset;
        let end = start + stride;
        if end > payload.len() as u64 {
            return Err(Error::Dataset(format!(
                "scan {i}: payload [{start}, {end}) exceeds scans.bin length {} (mask has {p} features)",
                payload.len()
            )));
        }
        let bytes = &payload[start as usize..end as usize];
        let features: Vec<f32> = bytes
            .chunks_exact(4)
            .map(|c| f32::from_le_bytes([c[0], c[1], c[2], c[3]]))
            .collect();
        let label = Label::from_index(entry.label as usize)
            .ok_or_else(|| Error::Dataset(format!("scan {i}: label {} not in {{0,1}}", entry.label)))?;
        scans.push(LabeledScan {
            features: features.into(),
            label,
            participant_id: entry.participant,
            session_id: entry.session,
            block_id: entry.block,
            scan_index: entry.scan_index,
        });
    }
    let expected_len = scan_payload_bytes(p, scans.len());
    if payload.len() as u64 != expected_len && manifest.scans.iter().all(|e| e.offset % stride == 0) {
        // Trailing bytes usually mean the mask and payload disagree on P.
        return Err(Error::Dataset(format!(
            "scans.bin has {} bytes, expected {expected_len} for {} scans of {p} features",
            payload.len(),
            scans.len()
        )));
    }
    DatasetBundle::new(mask, scans, label_names).map_err(|e| match e {
        Error::Dataset(_) | Error::DimensionMismatch { .. } => e,
        other => Error::Dataset(other.to_string()),
    })
}
