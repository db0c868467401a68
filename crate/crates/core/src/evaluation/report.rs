use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::{mean_std, CvReport, SchemeKind};
use crate::dataset::Label;

/// One participant line of the per-participant accuracy table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Table1Row {
    pub participant: u32,
    pub accuracy: f64,
    pub p_value: Option<f64>,
}

/// `participant\taccuracy\tp_value`, accuracy to 3 decimals; a missing
/// p-value prints as `NA`.
pub fn table1_tsv(rows: &[Table1Row]) -> String {
    let mut out = String::from("participant\taccuracy\tp_value\n");
    for r in rows {
        let p = r.p_value.map_or_else(|| "NA".to_string(), |p| format!("{p:.3}"));
        let _ = writeln!(out, "{}\t{:.3}\t{}", r.participant, r.accuracy, p);
    }
    out
}

/// Row-normalised confusion table averaged over cycles.
///
/// The corner cell names the scheme and carries the mean accuracy; each
/// cell is `mean±std` of that rate across cycles with a non-empty row.
/// Predicted columns carry a trailing `'`.
pub fn confusion_tsv(report: &CvReport, label_name: impl Fn(Label) -> String) -> String {
    let title = match (report.scheme, report.participant) {
        (SchemeKind::Cross, _) | (_, None) => "Cross Participants".to_string(),
        (SchemeKind::Within, Some(p)) => format!("Participant {p}"),
    };
    let mut out = format!("{title} ({:.3})", report.mean_accuracy);
    for l in Label::ALL {
        let _ = write!(out, "\t{}'", label_name(l));
    }
    out.push('\n');
    for truth in Label::ALL {
        out.push_str(&label_name(truth));
        let rates: Vec<[f64; 2]> = report
            .cycles
            .iter()
            .filter_map(|c| c.confusion.row_rates(truth))
            .collect();
        for pred in Label::ALL {
            let col: Vec<f64> = rates.iter().map(|r| r[pred.index()]).collect();
            if col.is_empty() {
                out.push_str("\tNA");
            } else {
                let (m, s) = mean_std(&col);
                let _ = write!(out, "\t{m:.3}±{s:.3}");
            }
        }
        out.push('\n');
    }
    out
}
