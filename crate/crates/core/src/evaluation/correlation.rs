use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Correlation {
    /// Pearson coefficient over the retained pairs.
    pub r: f64,
    /// `(position, accuracy, behaviour)` for every retained pair.
    pub pairs: Vec<(usize, f64, f64)>,
}

/// Pearson correlation between per-participant accuracy and a behavioural
/// score, after dropping the positions listed in `omit`.
pub fn correlate_behavior(accuracy: &[f64], behavior: &[f64], omit: &[usize]) -> Result<Correlation> {
    if accuracy.len() != behavior.len() {
        return Err(Error::InvalidInput(format!(
            "{} accuracies but {} behaviour scores",
            accuracy.len(),
            behavior.len()
        )));
    }
    if let Some(&i) = omit.iter().find(|&&i| i >= accuracy.len()) {
        return Err(Error::InvalidInput(format!("omitted position {i} out of range")));
    }
    let pairs: Vec<(usize, f64, f64)> = accuracy
        .iter()
        .zip(behavior)
        .enumerate()
        .filter(|(i, _)| !omit.contains(i))
        .map(|(i, (&a, &b))| (i, a, b))
        .collect();
    if pairs.len() < 3 {
        return Err(Error::InvalidInput(format!(
            "correlation needs at least 3 pairs, {} retained",
            pairs.len()
        )));
    }
    if pairs.iter().any(|(_, a, b)| !a.is_finite() || !b.is_finite()) {
        return Err(Error::InvalidInput("non-finite value".into()));
    }
    let n = pairs.len() as f64;
    let ma = pairs.iter().map(|p| p.1).sum::<f64>() / n;
    let mb = pairs.iter().map(|p| p.2).sum::<f64>() / n;
    let (mut sab, mut saa, mut sbb) = (0.0, 0.0, 0.0);
    for &(_, a, b) in &pairs {
        sab += (a - ma) * (b - mb);
        saa += (a - ma).powi(2);
        sbb += (b - mb).powi(2);
    }
    if saa == 0.0 || sbb == 0.0 {
        return Err(Error::InvalidInput("zero variance in correlation input".into()));
    }
    let r = (sab / (saa.sqrt() * sbb.sqrt())).clamp(-1.0, 1.0);
    Ok(Correlation { r, pairs })
}
