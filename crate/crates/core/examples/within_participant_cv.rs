//! Block-level Monte Carlo cross-validation for each participant of a
//! planted synthetic bundle, printed as a per-participant accuracy table.
//!
//! `cargo run --release --example within_participant_cv -- [cycles]`

use std::time::Instant;

use voxdecode::dataset::{generate_synthetic, SyntheticSpec};
use voxdecode::evaluation::{confusion_tsv, run_cv, table1_tsv, PipelineConfig, Scheme, Table1Row};

fn main() -> voxdecode::Result<()> {
    let cycles = std::env::args().nth(1).map_or(20, |s| s.parse().expect("cycles"));
    let (bundle, _) = generate_synthetic(&SyntheticSpec::with_blob(4, 6000, 40, 1.5, 7))?;
    let cfg = PipelineConfig {
        cycles,
        ..PipelineConfig::within_default()
    };
    let mut rows = Vec::new();
    for p in bundle.participants() {
        let t = Instant::now();
        let report = run_cv(&bundle, Scheme::Within(p), &cfg)?;
        eprintln!("participant {p}: {:.1}s", t.elapsed().as_secs_f64());
        if p == 0 {
            print!("{}", confusion_tsv(&report, |l| bundle.label_name(l)));
        }
        rows.push(Table1Row {
            participant: p,
            accuracy: report.mean_accuracy,
            p_value: None,
        });
    }
    print!("{}", table1_tsv(&rows));
    Ok(())
}
