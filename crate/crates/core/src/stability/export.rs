use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{ClusterMask, ScalarMap};
use crate::{Error, Result};

/// Sidecar describing a raw `.vol` volume.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MapHeader {
    pub dims: [usize; 3],
    pub voxel_size_mm: [f64; 3],
    pub origin_mm: [f64; 3],
    pub dtype: String,
    pub byte_order: String,
    /// Axis that varies fastest in the file.
    pub fastest_axis: String,
}

/// Writes `values` as little-endian f32 to `vol_path` and the header as JSON
/// to `header_path`.
pub fn write_map(map: &ScalarMap, vol_path: &Path, header_path: &Path) -> Result<()> {
    let file = File::create(vol_path).map_err(|e| Error::io(vol_path, e))?;
    let mut w = BufWriter::new(file);
    for &v in &map.values {
        w.write_all(&(v as f32).to_le_bytes()).map_err(|e| Error::io(vol_path, e))?;
    }
    w.flush().map_err(|e| Error::io(vol_path, e))?;
    let header = MapHeader {
        dims: map.grid.dims,
        voxel_size_mm: map.grid.voxel_size_mm,
        origin_mm: map.grid.origin_mm,
        dtype: "float32".into(),
        byte_order: "little".into(),
        fastest_axis: "x".into(),
    };
    let mut text = serde_json::to_string_pretty(&header)?;
    text.push('\n');
    std::fs::write(header_path, text).map_err(|e| Error::io(header_path, e))
}

/// `cluster_id\tsize\tpeak_value\tpeak_x_mm\tpeak_y_mm\tpeak_z_mm`, ids from
/// 1 in cluster order. The peak is the highest value, lowest index on ties.
pub fn clusters_tsv(mask: &ClusterMask, map: &ScalarMap) -> String {
    let mut out = String::from("cluster_id\tsize\tpeak_value\tpeak_x_mm\tpeak_y_mm\tpeak_z_mm\n");
    for (id, cluster) in mask.clusters.iter().enumerate() {
        let peak = cluster
            .iter()
            .copied()
            .reduce(|a, b| if map.values[b] > map.values[a] { b } else { a })
            .expect("clusters are non-empty");
        let [x, y, z] = mask.grid.world_mm(peak);
        out.push_str(&format!(
            "{}\t{}\t{:.6}\t{:.1}\t{:.1}\t{:.1}\n",
            id + 1,
            cluster.len(),
            map.values[peak],
            x,
            y,
            z
        ));
    }
    out
}
