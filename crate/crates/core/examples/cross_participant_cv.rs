//! Participant-level Monte Carlo cross-validation: whole participants are
//! held out, so a model must generalise to people it never saw.
//!
//! `cargo run --release --example cross_participant_cv -- [cycles]`

use voxdecode::dataset::{generate_synthetic, SyntheticSpec};
use voxdecode::evaluation::{confusion_tsv, run_cv, PipelineConfig, Scheme};

fn main() -> voxdecode::Result<()> {
    let cycles = std::env::args().nth(1).map_or(10, |s| s.parse().expect("cycles"));
    let (bundle, _) = generate_synthetic(&SyntheticSpec::with_blob(4, 6000, 40, 1.5, 7))?;
    let cfg = PipelineConfig {
        cycles,
        ..PipelineConfig::cross_default()
    };
    let report = run_cv(&bundle, Scheme::Cross, &cfg)?;
    for c in &report.cycles {
        println!("cycle {:>2}: train {:>4} test {:>4} accuracy {:.3}", c.cycle, c.n_train, c.n_test, c.accuracy);
    }
    print!("{}", confusion_tsv(&report, |l| bundle.label_name(l)));
    Ok(())
}
