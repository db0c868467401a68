use serde::{Deserialize, Serialize};

use crate::dataset::Label;

/// 2x2 counts indexed `[true label][predicted label]`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    pub counts: [[u64; 2]; 2],
}

impl ConfusionMatrix {
    pub fn record(&mut self, truth: Label, predicted: Label) {
        self.counts[truth.index()][predicted.index()] += 1;
    }

    pub fn row_total(&self, truth: Label) -> u64 {
        self.counts[truth.index()].iter().sum()
    }

    /// Row-normalised rates, `None` for an empty row.
    pub fn row_rates(&self, truth: Label) -> Option<[f64; 2]> {
        let total = self.row_total(truth);
        (total > 0).then(|| {
            let row = self.counts[truth.index()];
            [row[0] as f64 / total as f64, row[1] as f64 / total as f64]
        })
    }

    /// Mean of the diagonal rates over non-empty rows.
    pub fn accuracy(&self) -> f64 {
        let diag: Vec<f64> = Label::ALL
            .iter()
            .filter_map(|&l| self.row_rates(l).map(|r| r[l.index()]))
            .collect();
        if diag.is_empty() {
            return f64::NAN;
        }
        diag.iter().sum::<f64>() / diag.len() as f64
    }

    pub fn merge(&mut self, other: &ConfusionMatrix) {
        for t in 0..2 {
            for p in 0..2 {
                self.counts[t][p] += other.counts[t][p];
            }
        }
    }
}
