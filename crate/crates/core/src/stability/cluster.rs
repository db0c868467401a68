use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use super::ScalarMap;
use crate::dataset::VolumeGrid;

/// Voxel adjacency used for connected components.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Connectivity {
    /// Shared face.
    #[default]
    Face6,
    /// Shared face or edge.
    Edge18,
    /// Shared face, edge or corner.
    Vertex26,
}

impl Connectivity {
    pub fn from_count(n: u32) -> Option<Self> {
        match n {
            6 => Some(Connectivity::Face6),
            18 => Some(Connectivity::Edge18),
            26 => Some(Connectivity::Vertex26),
            _ => None,
        }
    }

    pub fn count(self) -> u32 {
        match self {
            Connectivity::Face6 => 6,
            Connectivity::Edge18 => 18,
            Connectivity::Vertex26 => 26,
        }
    }

    fn offsets(self) -> Vec<[i64; 3]> {
        let max_nonzero = match self {
            Connectivity::Face6 => 1,
            Connectivity::Edge18 => 2,
            Connectivity::Vertex26 => 3,
        };
        let mut out = Vec::new();
        for dz in -1..=1i64 {
            for dy in -1..=1i64 {
                for dx in -1..=1i64 {
                    let nz = [dx, dy, dz].iter().filter(|&&d| d != 0).count();
                    if nz >= 1 && nz <= max_nonzero {
                        out.push([dx, dy, dz]);
                    }
                }
            }
        }
        out
    }
}

/// Selected voxels and their connected components.
///
/// `clusters` partitions the selected voxels; each cluster lists linear
/// indices in ascending order and clusters are ordered by their smallest
/// voxel.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClusterMask {
    pub grid: VolumeGrid,
    pub member: Vec<bool>,
    pub clusters: Vec<Vec<usize>>,
    pub connectivity: Connectivity,
}

impl ClusterMask {
    pub fn from_member(grid: VolumeGrid, member: Vec<bool>, connectivity: Connectivity) -> Self {
        let clusters = connected_components(&grid, &member, connectivity);
        ClusterMask {
            grid,
            member,
            clusters,
            connectivity,
        }
    }

    pub fn n_selected(&self) -> usize {
        self.member.iter().filter(|&&m| m).count()
    }
}

/// Breadth-first labelling of the true voxels in `member`.
pub fn connected_components(grid: &VolumeGrid, member: &[bool], connectivity: Connectivity) -> Vec<Vec<usize>> {
    assert_eq!(member.len(), grid.n_voxels(), "member length must match the grid");
    let offsets = connectivity.offsets();
    let dims = grid.dims.map(|d| d as i64);
    let mut seen = vec![false; member.len()];
    let mut clusters = Vec::new();
    let mut queue = VecDeque::new();
    for start in 0..member.len() {
        if !member[start] || seen[start] {
            continue;
        }
        seen[start] = true;
        queue.push_back(start);
        let mut cluster = Vec::new();
        while let Some(v) = queue.pop_front() {
            cluster.push(v);
            let c = grid.coords(v).map(|x| x as i64);
            for o in &offsets {
                let n = [c[0] + o[0], c[1] + o[1], c[2] + o[2]];
                if (0..3).any(|a| n[a] < 0 || n[a] >= dims[a]) {
                    continue;
                }
                let l = grid.linear_index(n.map(|x| x as usize));
                if member[l] && !seen[l] {
                    seen[l] = true;
                    queue.push_back(l);
                }
            }
        }
        cluster.sort_unstable();
        clusters.push(cluster);
    }
    clusters
}

/// Selects the `top_n` highest nonzero voxels, including every voxel tied
/// with the value at the cut. With fewer nonzero voxels than `top_n`, all
/// nonzero voxels are selected.
pub fn threshold_top(map: &ScalarMap, top_n: usize, connectivity: Connectivity) -> ClusterMask {
    let mut nonzero: Vec<f64> = map.values.iter().copied().filter(|&v| v != 0.0).collect();
    let member = if top_n == 0 {
        vec![false; map.values.len()]
    } else if top_n >= nonzero.len() {
        map.values.iter().map(|&v| v != 0.0).collect()
    } else {
        nonzero.sort_by(|a, b| b.total_cmp(a));
        let cut = nonzero[top_n - 1];
        map.values.iter().map(|&v| v != 0.0 && v >= cut).collect()
    };
    ClusterMask::from_member(map.grid.clone(), member, connectivity)
}

/// Drops clusters with fewer than `min_size` voxels.
pub fn remove_small_clusters(mask: &ClusterMask, min_size: usize) -> ClusterMask {
    let mut member = vec![false; mask.member.len()];
    let clusters: Vec<Vec<usize>> = mask
        .clusters
        .iter()
        .filter(|c| c.len() >= min_size)
        .cloned()
        .collect();
    for c in &clusters {
        for &v in c {
            member[v] = true;
        }
    }
    ClusterMask {
        grid: mask.grid.clone(),
        member,
        clusters,
        connectivity: mask.connectivity,
    }
}
