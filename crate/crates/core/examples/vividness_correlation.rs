//! Correlates per-participant decoding accuracy with a self-reported
//! 0-10 score, with and without leaving one participant out.
//!
//! `cargo run --release --example vividness_correlation`

use voxdecode::evaluation::correlate_behavior;

fn main() -> voxdecode::Result<()> {
    let accuracy = [0.71, 0.64, 0.88, 0.93, 0.62, 0.79, 0.97, 0.68, 0.75, 0.83, 0.66];
    let vividness = [6.0, 5.5, 7.5, 8.0, 5.0, 6.5, 8.5, 9.5, 6.0, 7.0, 5.5];

    let all = correlate_behavior(&accuracy, &vividness, &[])?;
    println!("all participants: r = {:.3}", all.r);

    let outlier = 7;
    let trimmed = correlate_behavior(&accuracy, &vividness, &[outlier])?;
    println!("without participant {}: r = {:.3}", outlier + 1, trimmed.r);
    for (i, a, v) in &trimmed.pairs {
        println!("{}\t{a:.2}\t{v:.1}", i + 1);
    }
    Ok(())
}
