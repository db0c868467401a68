//! Trains boosted decision stumps on ReliefF candidates and prints the
//! per-round training trace, then saves and reloads the model.
//!
//! `cargo run --release --example boosted_stumps -- [model.json]`

use voxdecode::dataset::{generate_synthetic, split_block_level, SyntheticSpec};
use voxdecode::ensemble::{load_model, save_model, train_ensemble, BoostConfig};
use voxdecode::relieff::{score_features, select_top, ReliefFConfig};

fn main() -> voxdecode::Result<()> {
    let path = std::env::args().nth(1).unwrap_or_else(|| "model.json".into());
    let (bundle, _) = generate_synthetic(&SyntheticSpec::with_blob(1, 6000, 40, 0.8, 11))?;
    let split = split_block_level(&bundle, 0, 0.7, 0)?;
    let scores = score_features(&split.train, &ReliefFConfig::default())?;
    let candidates = select_top(&scores, 2500)?;
    let (ensemble, report) = train_ensemble(&split.train, &candidates, &BoostConfig::default())?;

    println!("round\tfeature\terror\tweight\texp_loss\ttrain_acc");
    for (t, r) in report.rounds.iter().enumerate().filter(|(t, _)| t % 20 == 0) {
        println!(
            "{t}\t{}\t{:.4}\t{:.4}\t{:.2}\t{:.3}",
            r.feature_index, r.weighted_error, r.member_weight, r.exp_loss, r.train_accuracy
        );
    }
    println!("training error bound {:.3e}", report.training_error_bound());

    let correct = split.test.iter().filter(|s| ensemble.predict(&s.features) == s.label).count();
    println!("held-out accuracy {:.3} on {} scans", correct as f64 / split.test.len() as f64, split.test.len());

    save_model(&path, &ensemble, bundle.mask())?;
    let reloaded = load_model(&path, bundle.mask())?;
    assert_eq!(reloaded.members, ensemble.members);
    println!("model with {} stumps written to {path}", reloaded.members.len());
    Ok(())
}
