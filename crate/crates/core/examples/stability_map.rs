//! Builds a selection-frequency map: per-participant ReliefF top-N counts
//! over repeated splits, summed on the common grid, smoothed, thresholded
//! and cleaned of small clusters. Writes `map.vol`, `map.json` and
//! `clusters.tsv` into the output directory.
//!
//! `cargo run --release --example stability_map -- <out_dir> [folds]`

use std::path::PathBuf;

use voxdecode::dataset::{generate_synthetic, SyntheticSpec};
use voxdecode::evaluation::PipelineConfig;
use voxdecode::stability::{
    clusters_tsv, remove_small_clusters, selection_histogram, smooth_map, superimpose, threshold_top, write_map,
    Connectivity,
};

fn main() -> voxdecode::Result<()> {
    let out = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "stability-map".into()));
    let folds = std::env::args().nth(2).map_or(20, |s| s.parse().expect("folds"));
    std::fs::create_dir_all(&out).expect("output directory");

    let (bundle, planted) = generate_synthetic(&SyntheticSpec::with_blob(4, 6000, 40, 1.0, 5))?;
    let mut cfg = PipelineConfig::within_default();
    cfg.relieff.top_n = 300;
    let histograms = bundle
        .participants()
        .into_iter()
        .map(|p| selection_histogram(&bundle, p, folds, &cfg))
        .collect::<voxdecode::Result<Vec<_>>>()?;
    let raw = superimpose(bundle.mask(), &histograms)?;
    let smoothed = smooth_map(&raw, 6.0)?;
    let selected = threshold_top(&smoothed, 150, Connectivity::Face6);
    let kept = remove_small_clusters(&selected, 5);

    let planted_linear: Vec<usize> = planted.iter().map(|&f| bundle.mask().linear_of(f)).collect();
    for (i, c) in kept.clusters.iter().enumerate() {
        let overlap = c.iter().filter(|v| planted_linear.contains(v)).count();
        println!("cluster {}: {} voxels, {} planted", i + 1, c.len(), overlap);
    }
    println!("{} of {} thresholded voxels survive", kept.n_selected(), selected.n_selected());

    write_map(&smoothed, &out.join("map.vol"), &out.join("map.json"))?;
    std::fs::write(out.join("clusters.tsv"), clusters_tsv(&kept, &smoothed)).expect("write clusters");
    Ok(())
}
