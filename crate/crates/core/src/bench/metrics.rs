use serde::{Deserialize, Serialize};

use crate::classifier::Prediction;
use crate::error::{Error, Result};
use crate::labels::{Label, LabeledNodes};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct F1Scores {
    /// Unweighted mean of the per-class scores over classes present in the
    /// ground truth.
    pub macro_f1: f64,
    /// F1 of every class `1..=K`; 0 where precision and recall are both 0/0.
    pub per_class: Vec<f64>,
    /// Whether each class occurs in the ground truth.
    pub present: Vec<bool>,
}

pub fn macro_f1(truth: &LabeledNodes, pred: &Prediction) -> Result<F1Scores> {
    macro_f1_labels(truth, pred.as_slice())
}

/// Scores every node that has a ground-truth label. A node without a
/// predicted label counts as a miss for its true class.
pub fn macro_f1_labels(truth: &LabeledNodes, pred: &[Option<Label>]) -> Result<F1Scores> {
    if truth.node_count() != pred.len() {
        return Err(Error::Evaluation(format!(
            "ground truth covers {} nodes, prediction {}",
            truth.node_count(),
            pred.len()
        )));
    }
    let k = truth.num_labels().max(
        pred.iter()
            .flatten()
            .map(|l| l.index() + 1)
            .max()
            .unwrap_or(0),
    );
    let mut tp = vec![0usize; k];
    let mut fp = vec![0usize; k];
    let mut fn_ = vec![0usize; k];
    let mut present = vec![false; k];
    let mut overlap = 0;
    for (node, t) in truth.iter() {
        present[t.index()] = true;
        match pred[node] {
            Some(p) => {
                overlap += 1;
                if p == t {
                    tp[t.index()] += 1;
                } else {
                    fp[p.index()] += 1;
                    fn_[t.index()] += 1;
                }
            }
            None => fn_[t.index()] += 1,
        }
    }
    if overlap == 0 {
        return Err(Error::Evaluation(
            "no node has both a ground-truth and a predicted label".into(),
        ));
    }

    let per_class: Vec<f64> = (0..k)
        .map(|c| {
            let denom = 2 * tp[c] + fp[c] + fn_[c];
            if denom == 0 {
                0.0
            } else {
                2.0 * tp[c] as f64 / denom as f64
            }
        })
        .collect();
    let classes = present.iter().filter(|&&p| p).count();
    let macro_f1 = per_class
        .iter()
        .zip(&present)
        .filter(|(_, &p)| p)
        .map(|(f, _)| f)
        .sum::<f64>()
        / classes as f64;
    Ok(F1Scores {
        macro_f1,
        per_class,
        present,
    })
}
