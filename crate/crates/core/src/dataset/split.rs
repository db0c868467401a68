//! Train/test splits that never cut through a block or a participant.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;

use super::{DatasetBundle, Label, LabeledScan};
use crate::rng::{seeded, Stream};
use crate::{Error, Result};

/// Scans on each side of a split, in bundle order.
#[derive(Clone, Debug)]
pub struct Split<'a> {
    pub train: Vec<&'a LabeledScan>,
    pub test: Vec<&'a LabeledScan>,
}

/// Number of units held out: `(1 - train_fraction) * n` rounded half up,
/// at least 1.
pub fn held_out_count(n: usize, train_fraction: f64) -> usize {
    let raw = (1.0 - train_fraction) * n as f64;
    // the epsilon absorbs representation error such as 0.3 * 5 = 1.4999...
    ((raw + 0.5 + 1e-9).floor() as usize).max(1)
}

fn check_fraction(train_fraction: f64) -> Result<()> {
    if !(train_fraction > 0.0 && train_fraction < 1.0) {
        return Err(Error::InvalidConfig(format!(
            "train_fraction must lie in (0, 1), got {train_fraction}"
        )));
    }
    Ok(())
}

/// Randomly partitions one participant's blocks. Train always holds both
/// labels; draws that would leave train single-label are redrawn.
pub fn split_block_level(
    bundle: &DatasetBundle,
    participant: u32,
    train_fraction: f64,
    seed: u64,
) -> Result<Split<'_>> {
    check_fraction(train_fraction)?;
    let mut blocks = bundle.blocks_of(participant);
    if blocks.is_empty() {
        return Err(Error::InvalidInput(format!("participant {participant} not in dataset")));
    }
    for label in Label::ALL {
        let n = blocks.iter().filter(|(_, l)| *l == label).count();
        if n < 2 {
            return Err(Error::InvalidInput(format!(
                "participant {participant} has {n} {label} blocks, need at least 2 per label"
            )));
        }
    }
    let n_test = held_out_count(blocks.len(), train_fraction);
    if n_test + 2 > blocks.len() {
        return Err(Error::InvalidConfig(format!(
            "holding out {n_test} of {} blocks leaves too few to train on both labels",
            blocks.len()
        )));
    }

    let mut rng = seeded(seed, Stream::Split);
    let test_blocks: BTreeSet<u32> = loop {
        blocks.shuffle(&mut rng);
        let train = &blocks[n_test..];
        if Label::ALL
            .iter()
            .all(|l| train.iter().any(|(_, bl)| bl == l))
        {
            break blocks[..n_test].iter().map(|(b, _)| *b).collect();
        }
    };

    let (test, train) = bundle
        .scans()
        .iter()
        .filter(|s| s.participant_id == participant)
        .partition(|s| test_blocks.contains(&s.block_id));
    Ok(Split { train, test })
}

/// Randomly partitions participants; every scan of a participant lands on
/// one side.
pub fn split_participant_level(
    bundle: &DatasetBundle,
    train_fraction: f64,
    seed: u64,
) -> Result<Split<'_>> {
    check_fraction(train_fraction)?;
    let mut participants = bundle.participants();
    if participants.len() < 2 {
        return Err(Error::InvalidInput(format!(
            "participant-level split needs at least 2 participants, found {}",
            participants.len()
        )));
    }
    let n_test = held_out_count(participants.len(), train_fraction).min(participants.len() - 1);
    let mut rng = seeded(seed, Stream::Split);
    participants.shuffle(&mut rng);
    let test_ids: BTreeSet<u32> = participants[..n_test].iter().copied().collect();
    let (test, train) = bundle
        .scans()
        .iter()
        .partition(|s| test_ids.contains(&s.participant_id));
    Ok(Split { train, test })
}
