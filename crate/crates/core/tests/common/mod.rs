//! Independent reference implementations shared by the integration tests
//! and the acceptance runner. They favour obviousness over speed.
#![allow(dead_code)]

use std::sync::Arc;

use rand::Rng;
use voxdecode::dataset::{Label, LabeledScan};

pub fn scan(features: Vec<f32>, label: Label, block: u32, index: u32) -> LabeledScan {
    LabeledScan {
        features: Arc::from(features),
        label,
        participant_id: 0,
        session_id: 0,
        block_id: block,
        scan_index: index,
    }
}

/// `n` scans of `p` random features with at least `min_per_class` of each
/// label. Each scan is its own block.
pub fn random_scans(rng: &mut impl Rng, n: usize, p: usize, min_per_class: usize) -> Vec<LabeledScan> {
    loop {
        let labels: Vec<Label> = (0..n)
            .map(|_| if rng.random_bool(0.5) { Label::Pos } else { Label::Neg })
            .collect();
        let pos = labels.iter().filter(|&&l| l == Label::Pos).count();
        if pos < min_per_class || n - pos < min_per_class {
            continue;
        }
        return labels
            .into_iter()
            .enumerate()
            .map(|(i, l)| {
                let f = (0..p).map(|_| rng.random_range(0.0f32..10.0)).collect();
                scan(f, l, i as u32, 0)
            })
            .collect();
    }
}

/// Lowest weighted error of any single-feature threshold rule, found by
/// trying every partition `value > t` (t below the minimum and at every
/// observed value) with both orientations.
pub fn brute_force_stump_error(values: &[f64], labels: &[Label], weights: &[f64]) -> f64 {
    let mut thresholds: Vec<f64> = values.to_vec();
    thresholds.push(f64::NEG_INFINITY);
    let mut best = f64::INFINITY;
    for &t in &thresholds {
        for orient in [1.0, -1.0] {
            let mut err = 0.0;
            for i in 0..values.len() {
                // t = -inf gives +-inf, so the sign still decides
                let predicted_pos = orient * (values[i] - t) > 0.0;
                let truth_pos = labels[i] == Label::Pos;
                if predicted_pos != truth_pos {
                    err += weights[i];
                }
            }
            best = best.min(err);
        }
    }
    best
}

/// ReliefF weights with every instance sampled, written as the textbook
/// double sum over instances and neighbours.
pub fn relieff_oracle(x: &[Vec<f64>], labels: &[Label], k: usize) -> Vec<f64> {
    let n = x.len();
    let p = x[0].len();
    let range: Vec<f64> = (0..p)
        .map(|a| {
            let hi = x.iter().map(|r| r[a]).fold(f64::NEG_INFINITY, f64::max);
            let lo = x.iter().map(|r| r[a]).fold(f64::INFINITY, f64::min);
            hi - lo
        })
        .collect();
    let diff = |a: usize, i: usize, j: usize| {
        if range[a] == 0.0 {
            0.0
        } else {
            (x[i][a] - x[j][a]).abs() / range[a]
        }
    };
    let dist = |i: usize, j: usize| (0..p).map(|a| diff(a, i, j)).sum::<f64>();
    let nearest = |i: usize, same: bool| {
        let mut c: Vec<usize> = (0..n)
            .filter(|&j| j != i && (labels[j] == labels[i]) == same)
            .collect();
        c.sort_by(|&a, &b| dist(i, a).partial_cmp(&dist(i, b)).unwrap().then(a.cmp(&b)));
        c.truncate(k);
        c
    };
    let mut w = vec![0.0; p];
    for i in 0..n {
        let hits = nearest(i, true);
        let misses = nearest(i, false);
        for a in 0..p {
            for &h in &hits {
                w[a] -= diff(a, i, h) / (n * k) as f64;
            }
            for &m in &misses {
                w[a] += diff(a, i, m) / (n * k) as f64;
            }
        }
    }
    w
}

/// Connected components by depth-first flood fill; each component sorted,
/// components sorted by first element.
pub fn flood_fill(dims: [usize; 3], member: &[bool], reach: i64) -> Vec<Vec<usize>> {
    let idx = |x: i64, y: i64, z: i64| (x + dims[0] as i64 * (y + dims[1] as i64 * z)) as usize;
    let mut label = vec![usize::MAX; member.len()];
    let mut comps: Vec<Vec<usize>> = Vec::new();
    for z in 0..dims[2] as i64 {
        for y in 0..dims[1] as i64 {
            for x in 0..dims[0] as i64 {
                let s = idx(x, y, z);
                if !member[s] || label[s] != usize::MAX {
                    continue;
                }
                let id = comps.len();
                let mut comp = Vec::new();
                let mut stack = vec![(x, y, z)];
                label[s] = id;
                while let Some((cx, cy, cz)) = stack.pop() {
                    comp.push(idx(cx, cy, cz));
                    for dz in -1..=1i64 {
                        for dy in -1..=1i64 {
                            for dx in -1..=1i64 {
                                let manhattan = dx.abs() + dy.abs() + dz.abs();
                                if manhattan == 0 || manhattan > reach {
                                    continue;
                                }
                                let (nx, ny, nz) = (cx + dx, cy + dy, cz + dz);
                                if nx < 0 || ny < 0 || nz < 0 {
                                    continue;
                                }
                                if nx >= dims[0] as i64 || ny >= dims[1] as i64 || nz >= dims[2] as i64 {
                                    continue;
                                }
                                let t = idx(nx, ny, nz);
                                if member[t] && label[t] == usize::MAX {
                                    label[t] = id;
                                    stack.push((nx, ny, nz));
                                }
                            }
                        }
                    }
                }
                comp.sort_unstable();
                comps.push(comp);
            }
        }
    }
    comps.sort();
    comps
}
