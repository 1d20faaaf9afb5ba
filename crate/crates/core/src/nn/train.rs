use ndarray::{Array2, Axis};
use rand::seq::SliceRandom;
use rand::Rng;

use super::adam::AdamState;
use super::loss::{loss_and_grad, Batch, LossReport};
use super::mlp::Mlp;
use crate::datagen::Dataset;
use crate::{Error, Result};

/// Mini-batch size; sets smaller than this are used whole.
pub const BATCH_SIZE: usize = 64;

/// A dataset flattened into an input matrix and a target matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainSet {
    pub x: Array2<f64>,
    pub y: Array2<f64>,
}

impl TrainSet {
    pub fn empty(input_dim: usize, classes: usize) -> Self {
        Self {
            x: Array2::zeros((0, input_dim)),
            y: Array2::zeros((0, classes)),
        }
    }

    /// One-hot targets from labels; every sample must be labeled.
    pub fn from_dataset(ds: &Dataset) -> Result<Self> {
        let mut out = Self::empty(ds.feature_dim, ds.class_count);
        out.x = Array2::zeros((ds.len(), ds.feature_dim));
        out.y = Array2::zeros((ds.len(), ds.class_count));
        for (i, s) in ds.samples.iter().enumerate() {
            let c = s.label.ok_or_else(|| {
                Error::InvalidArgument(format!("sample {i} has no label for supervised training"))
            })?;
            out.x.row_mut(i).assign(&ndarray::aview1(&s.features));
            out.y[[i, c]] = 1.0;
        }
        Ok(out)
    }

    /// Inputs only, for prediction.
    pub fn features(ds: &Dataset) -> Array2<f64> {
        let mut x = Array2::zeros((ds.len(), ds.feature_dim));
        for (i, s) in ds.samples.iter().enumerate() {
            x.row_mut(i).assign(&ndarray::aview1(&s.features));
        }
        x
    }

    pub fn len(&self) -> usize {
        self.x.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.x.nrows() == 0
    }

    pub fn batch(&self) -> Batch<'_> {
        Batch {
            x: self.x.view(),
            y: self.y.view(),
        }
    }

    fn select(&self, idx: &[usize]) -> Self {
        Self {
            x: self.x.select(Axis(0), idx),
            y: self.y.select(Axis(0), idx),
        }
    }
}

/// Mini-batch steps per epoch when both sets are walked together.
pub fn steps_per_epoch(labeled: usize, pseudo: usize, batch: usize) -> usize {
    labeled.max(pseudo).div_ceil(batch.max(1)).max(1)
}

/// A model together with its optimizer state and shuffle stream, so that
/// training can be continued across calls exactly as if it had never
/// stopped.
#[derive(Debug, Clone)]
pub struct Trainer<R> {
    pub model: Mlp,
    pub adam: AdamState,
    pub rng: R,
    pub lr: f64,
    pub batch: usize,
}

impl<R: Rng> Trainer<R> {
    pub fn new(model: Mlp, lr: f64, batch: usize, rng: R) -> Self {
        let adam = AdamState::new(&model);
        Self {
            model,
            adam,
            rng,
            lr,
            batch,
        }
    }

    /// Runs `epochs` passes over both sets.
    ///
    /// Each epoch shuffles both sets and takes `steps_per_epoch` steps; step
    /// `s` uses the `s`-th equal slice of each shuffled set, so the larger set
    /// is cut into batches of at most `batch` and the smaller one is spread
    /// evenly across the same steps. Every sample is visited exactly once per
    /// epoch.
    pub fn run(&mut self, labeled: &TrainSet, pseudo: &TrainSet, lambda_u: f64, epochs: usize) -> Result<()> {
        if epochs == 0 {
            return Err(Error::InvalidArgument("epochs must be at least 1".into()));
        }
        if labeled.is_empty() && pseudo.is_empty() {
            return Err(Error::InvalidArgument("nothing to train on".into()));
        }
        let (nl, np) = (labeled.len(), pseudo.len());
        let steps = steps_per_epoch(nl, np, self.batch);
        let mut li: Vec<usize> = (0..nl).collect();
        let mut pi: Vec<usize> = (0..np).collect();
        for _ in 0..epochs {
            li.shuffle(&mut self.rng);
            pi.shuffle(&mut self.rng);
            for s in 0..steps {
                let lb = labeled.select(&li[s * nl / steps..(s + 1) * nl / steps]);
                let pb = pseudo.select(&pi[s * np / steps..(s + 1) * np / steps]);
                if lb.is_empty() && pb.is_empty() {
                    continue;
                }
                let (_, g) = loss_and_grad(&self.model, lb.batch(), pb.batch(), lambda_u)?;
                self.adam.step(&mut self.model, &g, self.lr)?;
            }
        }
        Ok(())
    }
}

/// Trains a copy of `model` for `epochs` epochs with fresh Adam moments and
/// batches of [`BATCH_SIZE`]; see [`Trainer::run`].
pub fn train_epochs<R: Rng + ?Sized>(
    model: &Mlp,
    labeled: &TrainSet,
    pseudo: &TrainSet,
    lambda_u: f64,
    epochs: usize,
    lr: f64,
    rng: &mut R,
) -> Result<Mlp> {
    train_epochs_batched(model, labeled, pseudo, lambda_u, epochs, lr, BATCH_SIZE, rng)
}

/// [`train_epochs`] with an explicit batch size.
#[allow(clippy::too_many_arguments)]
pub fn train_epochs_batched<R: Rng + ?Sized>(
    model: &Mlp,
    labeled: &TrainSet,
    pseudo: &TrainSet,
    lambda_u: f64,
    epochs: usize,
    lr: f64,
    batch: usize,
    rng: &mut R,
) -> Result<Mlp> {
    let mut t = Trainer::new(model.clone(), lr, batch, rng);
    t.run(labeled, pseudo, lambda_u, epochs)?;
    Ok(t.model)
}

/// Full-set loss of `model`.
pub fn evaluate_loss(model: &Mlp, labeled: &TrainSet, pseudo: &TrainSet, lambda_u: f64) -> Result<LossReport> {
    Ok(loss_and_grad(model, labeled.batch(), pseudo.batch(), lambda_u)?.0)
}
