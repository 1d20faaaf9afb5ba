use serde::{Deserialize, Serialize};

use super::metrics::predict_proba;
use crate::datagen::Dataset;
use crate::nn::Mlp;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RocPoint {
    pub fpr: f64,
    pub tpr: f64,
    /// Samples with score strictly above `alpha` are called positive.
    pub alpha: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RocCurve {
    pub points: Vec<RocPoint>,
    pub auc: f64,
}

/// Trapezoidal area under a polyline of (fpr, tpr) points.
pub fn trapezoid(points: &[RocPoint]) -> f64 {
    points
        .windows(2)
        .map(|w| (w[1].fpr - w[0].fpr) * (w[1].tpr + w[0].tpr) / 2.0)
        .sum()
}

/// ROC staircase and AUC for binary labels (1 = positive).
///
/// Thresholds run from the largest distinct score down to a sentinel one
/// below the smallest; tied scores enter in a single step, which makes the
/// trapezoidal AUC equal to the Mann–Whitney statistic.
pub fn roc_auc(scores: &[f64], labels: &[bool]) -> Result<RocCurve> {
    if scores.len() != labels.len() {
        return Err(Error::Dimension(format!(
            "{} scores for {} labels",
            scores.len(),
            labels.len()
        )));
    }
    if scores.iter().any(|s| !s.is_finite()) {
        return Err(Error::NonFinite("ROC scores".into()));
    }
    let pos = labels.iter().filter(|&&l| l).count();
    let neg = labels.len() - pos;
    if pos == 0 || neg == 0 {
        return Err(Error::InvalidArgument("ROC needs both classes present".into()));
    }
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]));

    let mut points = vec![RocPoint {
        fpr: 0.0,
        tpr: 0.0,
        alpha: scores[order[0]],
    }];
    let (mut tp, mut fp) = (0usize, 0usize);
    // twice the area in units of 1/(pos·neg), kept integral so perfect and
    // chance-level curves come out exact
    let mut area2: u128 = 0;
    let mut i = 0;
    while i < order.len() {
        let s = scores[order[i]];
        let (tp0, fp0) = (tp, fp);
        while i < order.len() && scores[order[i]] == s {
            if labels[order[i]] {
                tp += 1;
            } else {
                fp += 1;
            }
            i += 1;
        }
        area2 += ((fp - fp0) * (tp + tp0)) as u128;
        let alpha = if i < order.len() { scores[order[i]] } else { s - 1.0 };
        points.push(RocPoint {
            fpr: fp as f64 / neg as f64,
            tpr: tp as f64 / pos as f64,
            alpha,
        });
    }
    let auc = area2 as f64 / (2 * pos * neg) as f64;
    Ok(RocCurve { points, auc })
}

/// Micro-averaged ROC: one-vs-rest (probability, is-true-class) pairs of all
/// classes pooled into a single curve. For two classes this is the ROC of
/// the class-1 probability.
pub fn micro_roc_from(probs: &[Vec<f64>], labels: &[usize]) -> Result<RocCurve> {
    let classes = probs.first().map_or(0, Vec::len);
    if classes < 2 {
        return Err(Error::InvalidArgument("micro ROC needs at least two classes".into()));
    }
    if classes == 2 {
        let scores: Vec<f64> = probs.iter().map(|p| p[1]).collect();
        let pos: Vec<bool> = labels.iter().map(|&l| l == 1).collect();
        return roc_auc(&scores, &pos);
    }
    let mut scores = Vec::with_capacity(probs.len() * classes);
    let mut pos = Vec::with_capacity(probs.len() * classes);
    for (p, &l) in probs.iter().zip(labels) {
        for (c, &v) in p.iter().enumerate() {
            scores.push(v);
            pos.push(c == l);
        }
    }
    roc_auc(&scores, &pos)
}

fn labels_of(test: &Dataset) -> Result<Vec<usize>> {
    test.samples
        .iter()
        .enumerate()
        .map(|(i, s)| s.label.ok_or_else(|| Error::InvalidArgument(format!("test sample {i} is unlabeled"))))
        .collect()
}

pub fn micro_roc(m: &Mlp, test: &Dataset) -> Result<RocCurve> {
    micro_roc_from(&predict_proba(m, test)?, &labels_of(test)?)
}

/// One-vs-rest ROC for a single class.
pub fn class_roc(m: &Mlp, test: &Dataset, class: usize) -> Result<RocCurve> {
    let probs = predict_proba(m, test)?;
    let labels = labels_of(test)?;
    let scores: Vec<f64> = probs.iter().map(|p| p[class]).collect();
    let pos: Vec<bool> = labels.iter().map(|&l| l == class).collect();
    roc_auc(&scores, &pos)
}

/// `alpha,fpr,tpr` rows.
pub fn roc_csv(curve: &RocCurve) -> String {
    let mut out = String::from("alpha,fpr,tpr\n");
    for p in &curve.points {
        out.push_str(&format!("{},{},{}\n", p.alpha, p.fpr, p.tpr));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_aucs() {
        let s = [0.9, 0.8, 0.4, 0.3];
        assert_eq!(roc_auc(&s, &[true, true, false, false]).unwrap().auc, 1.0);
        assert!((roc_auc(&s, &[true, false, true, false]).unwrap().auc - 0.75).abs() < 1e-15);
        let flat = roc_auc(&[0.5; 6], &[true, false, true, false, false, true]).unwrap();
        assert_eq!(flat.auc, 0.5);
        assert_eq!(flat.points.len(), 2);
        assert!(roc_auc(&s, &[true; 4]).is_err());
    }

    #[test]
    fn staircase_is_anchored() {
        let c = roc_auc(&[0.1, 0.7, 0.7, 0.2, 0.9], &[false, true, false, true, true]).unwrap();
        let first = c.points[0];
        let last = *c.points.last().unwrap();
        assert_eq!((first.fpr, first.tpr), (0.0, 0.0));
        assert_eq!((last.fpr, last.tpr), (1.0, 1.0));
        for w in c.points.windows(2) {
            assert!(w[1].fpr >= w[0].fpr && w[1].tpr >= w[0].tpr);
            assert!(w[1].alpha < w[0].alpha);
        }
    }

    #[test]
    fn perfect_three_class_micro_roc() {
        let probs = vec![vec![0.8, 0.1, 0.1], vec![0.1, 0.7, 0.2], vec![0.0, 0.3, 0.7]];
        assert_eq!(micro_roc_from(&probs, &[0, 1, 2]).unwrap().auc, 1.0);
    }
}
