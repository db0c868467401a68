//! Block-label permutation test for one participant, once on a planted
//! bundle and once on a bundle without signal.
//!
//! `cargo run --release --example permutation_significance -- [n_perm]`

use voxdecode::dataset::{generate_synthetic, SyntheticSpec};
use voxdecode::evaluation::{permutation_test, table1_tsv, PipelineConfig, Scheme, Table1Row};

fn main() -> voxdecode::Result<()> {
    let n_perm = std::env::args().nth(1).map_or(99, |s| s.parse().expect("n_perm"));
    // a reduced pipeline keeps 2 x (n_perm + 1) cross-validations affordable
    let mut cfg = PipelineConfig::within_default();
    cfg.cycles = 1;
    cfg.relieff.top_n = 300;
    cfg.boost.rounds = 30;

    let mut rows = Vec::new();
    for (id, effect) in [(1u32, 1.5), (2, 0.0)] {
        let (bundle, _) = generate_synthetic(&SyntheticSpec::with_blob(1, 6000, 40, effect, 40 + u64::from(id)))?;
        let report = permutation_test(&bundle, Scheme::Within(0), n_perm, &cfg)?;
        let null_max = report.null_accuracies.iter().copied().fold(0.0, f64::max);
        eprintln!("effect {effect}: observed {:.3}, null max {null_max:.3}", report.observed);
        rows.push(Table1Row {
            participant: id,
            accuracy: report.observed,
            p_value: Some(report.p_value),
        });
    }
    print!("{}", table1_tsv(&rows));
    Ok(())
}
