//! Scores every voxel of one participant with ReliefF and shows how many of
//! the planted voxels land among the highest-ranked candidates.
//!
//! `cargo run --release --example relieff_ranking`

use voxdecode::dataset::{generate_synthetic, SyntheticSpec};
use voxdecode::relieff::{score_features, select_top, ReliefFConfig};

fn main() -> voxdecode::Result<()> {
    let (bundle, planted) = generate_synthetic(&SyntheticSpec::with_blob(1, 6000, 40, 1.0, 3))?;
    let train = bundle.scans_of(0);
    for k in [1, 3, 10] {
        let cfg = ReliefFConfig {
            k_neighbors: k,
            ..ReliefFConfig::default()
        };
        let scores = score_features(&train, &cfg)?;
        for n in [40, 300, 2500] {
            let top = select_top(&scores, n)?.indices();
            let hits = planted.iter().filter(|i| top.contains(i)).count();
            println!("K={k:<2} top-{n:<4}: {hits}/{} planted voxels", planted.len());
        }
        if k == 3 {
            let head: String = scores.to_tsv().lines().take(6).collect::<Vec<_>>().join("\n");
            println!("{head}\n...");
        }
    }
    Ok(())
}
