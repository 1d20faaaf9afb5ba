use ndarray::Axis;
use serde::{Deserialize, Serialize};

use crate::datagen::Dataset;
use crate::nn::{argmax, Mlp, TrainSet};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Accuracy {
    pub overall: f64,
    /// Accuracy within each true class; `None` for classes absent from the
    /// test set.
    pub per_class: Vec<Option<f64>>,
}

fn check_model(m: &Mlp, ds: &Dataset) -> Result<()> {
    if m.input_dim() != ds.feature_dim || m.class_count() != ds.class_count {
        return Err(Error::Dimension(format!(
            "model expects {} features / {} classes, dataset has {} / {}",
            m.input_dim(),
            m.class_count(),
            ds.feature_dim,
            ds.class_count
        )));
    }
    Ok(())
}

/// Class probabilities for every sample, one row each.
pub fn predict_proba(m: &Mlp, ds: &Dataset) -> Result<Vec<Vec<f64>>> {
    check_model(m, ds)?;
    let probs = m.forward_batch(TrainSet::features(ds).view())?;
    Ok(probs.axis_iter(Axis(0)).map(|r| r.to_vec()).collect())
}

/// Argmax class per sample, ties to the smallest index.
pub fn predict_classes(m: &Mlp, ds: &Dataset) -> Result<Vec<usize>> {
    Ok(predict_proba(m, ds)?.iter().map(|p| argmax(p)).collect())
}

/// Accuracy of predicted classes against the labels of `test`.
pub fn accuracy_of(predicted: &[usize], test: &Dataset) -> Result<Accuracy> {
    if test.is_empty() {
        return Err(Error::InvalidArgument("accuracy on an empty test set".into()));
    }
    let mut hits = vec![0usize; test.class_count];
    let mut totals = vec![0usize; test.class_count];
    for (i, (s, &pred)) in test.samples.iter().zip(predicted).enumerate() {
        let label = s
            .label
            .ok_or_else(|| Error::InvalidArgument(format!("test sample {i} is unlabeled")))?;
        totals[label] += 1;
        hits[label] += usize::from(pred == label);
    }
    Ok(Accuracy {
        overall: hits.iter().sum::<usize>() as f64 / test.len() as f64,
        per_class: hits
            .iter()
            .zip(&totals)
            .map(|(&h, &t)| (t > 0).then(|| h as f64 / t as f64))
            .collect(),
    })
}

pub fn accuracy(m: &Mlp, test: &Dataset) -> Result<Accuracy> {
    if test.is_empty() {
        return Err(Error::InvalidArgument("accuracy on an empty test set".into()));
    }
    accuracy_of(&predict_classes(m, test)?, test)
}

/// Arithmetic mean and population standard deviation.
pub fn mean_std(values: &[f64]) -> (f64, f64) {
    if values.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
    (mean, var.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datagen::{DatasetMeta, Sample, Source};
    use crate::qstate::FeatureScheme;

    fn balanced(n: usize) -> Dataset {
        let mut ds = Dataset::new(
            1,
            2,
            DatasetMeta {
                family: "t".into(),
                scheme: FeatureScheme::Ghz,
                seed: 0,
                augmentations: 0,
            },
        );
        for i in 0..n {
            ds.push(Sample {
                features: vec![i as f64],
                label: Some(i % 2),
                source: Source::Labeled,
                params: None,
            })
            .unwrap();
        }
        ds
    }

    #[test]
    fn accuracy_identities() {
        let ds = balanced(10);
        let perfect: Vec<usize> = (0..10).map(|i| i % 2).collect();
        let a = accuracy_of(&perfect, &ds).unwrap();
        assert_eq!(a.overall, 1.0);
        assert_eq!(a.per_class, vec![Some(1.0), Some(1.0)]);
        let constant = accuracy_of(&[0; 10], &ds).unwrap();
        assert_eq!(constant.overall, 0.5);
        assert_eq!(constant.per_class, vec![Some(1.0), Some(0.0)]);
        let zero = Mlp::zeros(&[1, 2]).unwrap();
        assert_eq!(accuracy(&zero, &ds).unwrap(), constant);
        assert!(accuracy(&zero, &balanced(0)).is_err());
    }
}
