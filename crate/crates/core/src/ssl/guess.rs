use ndarray::{Array2, Axis};

use crate::datagen::{Dataset, Source};
use crate::nn::{argmax, Mlp, TrainSet};
use crate::{Error, Result};

/// Mean of the model's predictions over the views of one sample (view 0 is
/// the original).
pub fn average_predict(m: &Mlp, views: &[Vec<f64>]) -> Result<Vec<f64>> {
    if views.is_empty() {
        return Err(Error::InvalidArgument("no views to average".into()));
    }
    let mut x = Array2::zeros((views.len(), m.input_dim()));
    for (i, v) in views.iter().enumerate() {
        if v.len() != m.input_dim() {
            return Err(Error::Dimension(format!("view of width {} for input {}", v.len(), m.input_dim())));
        }
        x.row_mut(i).assign(&ndarray::aview1(v));
    }
    Ok(group_means(&m.forward_batch(x.view())?, views.len()).remove(0))
}

/// Row means of consecutive groups of `group` rows, summed in row order.
fn group_means(probs: &Array2<f64>, group: usize) -> Vec<Vec<f64>> {
    probs
        .axis_chunks_iter(Axis(0), group)
        .map(|chunk| {
            let mut mean = vec![0.0; probs.ncols()];
            for row in chunk.axis_iter(Axis(0)) {
                mean.iter_mut().zip(row).for_each(|(a, &b)| *a += b);
            }
            mean.iter_mut().for_each(|a| *a /= group as f64);
            mean
        })
        .collect()
}

/// Outcome of one guess-labeling pass over a parent-major augmented set.
#[derive(Debug, Clone, PartialEq)]
pub struct Guesses {
    /// Averaged prediction y′ of every parent.
    pub averaged: Vec<Vec<f64>>,
    /// Retained parents and their guessed class.
    pub retained: Vec<(usize, usize)>,
    pub views_per_parent: usize,
}

impl Guesses {
    /// Pseudo-labeled training rows: every view of every retained parent with
    /// a one-hot target at the guessed class.
    pub fn train_set(&self, features: &Array2<f64>) -> TrainSet {
        let k = self.views_per_parent;
        let classes = self.averaged.first().map_or(0, Vec::len);
        let rows: Vec<usize> = self
            .retained
            .iter()
            .flat_map(|&(parent, _)| parent * k..(parent + 1) * k)
            .collect();
        let mut y = Array2::zeros((rows.len(), classes));
        for (i, &(_, class)) in self.retained.iter().enumerate() {
            for v in 0..k {
                y[[i * k + v, class]] = 1.0;
            }
        }
        TrainSet {
            x: features.select(Axis(0), &rows),
            y,
        }
    }
}

/// Averages predictions over each group of `views_per_parent` rows of
/// `features` and keeps a parent when its largest averaged probability is
/// strictly above `tau`. Ties in the argmax go to the smaller class.
pub fn guess_from_features(m: &Mlp, features: &Array2<f64>, views_per_parent: usize, tau: f64) -> Result<Guesses> {
    if views_per_parent == 0 || features.nrows() % views_per_parent != 0 {
        return Err(Error::InvalidArgument(format!(
            "{} rows do not split into groups of {views_per_parent}",
            features.nrows()
        )));
    }
    let probs = m.forward_batch(features.view())?;
    let averaged = group_means(&probs, views_per_parent);
    let retained = confident(&averaged, tau);
    Ok(Guesses {
        averaged,
        retained,
        views_per_parent,
    })
}

/// `(parent, class)` for every averaged prediction whose top probability is
/// strictly above `tau`.
pub fn confident(averaged: &[Vec<f64>], tau: f64) -> Vec<(usize, usize)> {
    averaged
        .iter()
        .enumerate()
        .filter_map(|(j, y)| {
            let c = argmax(y);
            (y[c] > tau).then_some((j, c))
        })
        .collect()
}

/// Û: all views of every confidently predicted parent, labeled with the
/// parent's guess.
pub fn guess_labels(m: &Mlp, unlabeled_aug: &Dataset, tau: f64) -> Result<(Dataset, Guesses)> {
    let k = unlabeled_aug.views_per_parent();
    let guesses = guess_from_features(m, &TrainSet::features(unlabeled_aug), k, tau)?;
    let mut out = Dataset::new(unlabeled_aug.feature_dim, unlabeled_aug.class_count, unlabeled_aug.meta.clone());
    for &(parent, class) in &guesses.retained {
        for s in &unlabeled_aug.samples[parent * k..(parent + 1) * k] {
            let mut s = s.clone();
            s.label = Some(class);
            s.source = Source::GuessLabeled;
            out.push(s)?;
        }
    }
    Ok((out, guesses))
}
