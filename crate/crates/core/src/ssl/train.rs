use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::config::TrainConfig;
use super::guess::guess_from_features;
use crate::datagen::{augment_unitary, Dataset};
use crate::eval::accuracy;
use crate::nn::{Mlp, TrainSet, Trainer};
use crate::rng::{self, Stream};
use crate::{Error, Result};

const LABELED_AUGMENT: u64 = 1;
const UNLABELED_AUGMENT: u64 = 2;
const INIT: u64 = 3;

/// All models of one semi-supervised run; index 0 is the warm start.
#[derive(Debug, Clone, PartialEq)]
pub struct SslRun {
    pub models: Vec<Mlp>,
    pub validation_accuracy: Vec<f64>,
    pub selected: usize,
    /// Retained unlabeled parents per model (0 for the warm start).
    pub pseudo_counts: Vec<usize>,
    pub lambda_u: Vec<f64>,
    /// Wall-clock seconds spent producing each model.
    pub seconds: Vec<f64>,
}

/// The deterministic part of an [`SslRun`], for reports.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SslRecord {
    pub validation_accuracy: Vec<f64>,
    pub pseudo_counts: Vec<usize>,
    pub lambda_u: Vec<f64>,
    pub selected: usize,
}

impl SslRun {
    pub fn best(&self) -> &Mlp {
        &self.models[self.selected]
    }

    pub fn record(&self) -> SslRecord {
        SslRecord {
            validation_accuracy: self.validation_accuracy.clone(),
            pseudo_counts: self.pseudo_counts.clone(),
            lambda_u: self.lambda_u.clone(),
            selected: self.selected,
        }
    }
}

/// Index of the largest value, ties to the smallest index.
fn select_best(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate() {
        if v > values[best] {
            best = i;
        }
    }
    best
}

fn check_inputs(ds: &Dataset, cfg: &TrainConfig, what: &str) -> Result<()> {
    if ds.is_empty() {
        return Err(Error::InvalidArgument(format!("{what} set is empty")));
    }
    if ds.meta.scheme != cfg.feature_scheme {
        return Err(Error::Config(format!(
            "{what} set uses {:?} features, config asks for {:?}",
            ds.meta.scheme, cfg.feature_scheme
        )));
    }
    Ok(())
}

/// X′: the labeled set with `k_labeled` local-unitary views per state.
pub fn augment_labeled(labeled: &Dataset, cfg: &TrainConfig) -> Result<Dataset> {
    augment_unitary(labeled, cfg.k_labeled, rng::subseed(cfg.seed, LABELED_AUGMENT), cfg.feature_scheme)
}

/// U′: the unlabeled set with `k_unlabeled` views per state.
pub fn augment_unlabeled(unlabeled: &Dataset, cfg: &TrainConfig) -> Result<Dataset> {
    augment_unitary(
        &unlabeled.without_labels(),
        cfg.k_unlabeled,
        rng::subseed(cfg.seed, UNLABELED_AUGMENT),
        cfg.feature_scheme,
    )
}

/// Freshly initialised network for this config and data shape.
pub fn init_model(cfg: &TrainConfig, input: usize, classes: usize) -> Result<Mlp> {
    Mlp::new(&cfg.layer_dims(input, classes), rng::subseed(cfg.seed, INIT))
}

fn trainer(cfg: &TrainConfig, input: usize, classes: usize) -> Result<Trainer<rng::Rng>> {
    let init = init_model(cfg, input, classes)?;
    Ok(Trainer::new(init, cfg.lr, cfg.batch, rng::stream(cfg.seed, Stream::Shuffle, 0)))
}

fn supervised(cfg: &TrainConfig, set: &TrainSet, epochs: usize) -> Result<Mlp> {
    let mut t = trainer(cfg, set.x.ncols(), set.y.ncols())?;
    t.run(set, &TrainSet::empty(set.x.ncols(), set.y.ncols()), 0.0, epochs)?;
    Ok(t.model)
}

/// Supervised model trained on X′ for `epochs_warm` epochs (λ_u = 0).
pub fn warm_start(labeled_aug: &Dataset, cfg: &TrainConfig) -> Result<Mlp> {
    cfg.validate()?;
    supervised(cfg, &TrainSet::from_dataset(labeled_aug)?, cfg.epochs_warm)
}

/// The full semi-supervised loop.
///
/// Builds X′ and U′ once, warm-starts, then for t = 1..=T guesses labels on
/// U′ with model_{t−1} and continues training it on (X′, Û) with λ_u(t) for
/// `epochs_update` epochs. One optimizer state and one shuffle stream run
/// through the whole loop, so with nothing pseudo-labeled the run is exactly
/// one supervised run of `epochs_warm + T·epochs_update` epochs. The selected
/// model maximises validation accuracy over the warm start and all updates.
pub fn ssl_train(labeled: &Dataset, unlabeled: &Dataset, validation: &Dataset, cfg: &TrainConfig) -> Result<SslRun> {
    cfg.validate()?;
    check_inputs(labeled, cfg, "labeled")?;
    check_inputs(unlabeled, cfg, "unlabeled")?;
    check_inputs(validation, cfg, "validation")?;

    let start = Instant::now();
    let x_lab = TrainSet::from_dataset(&augment_labeled(labeled, cfg)?)?;
    let u_aug = augment_unlabeled(unlabeled, cfg)?;
    let u_features = TrainSet::features(&u_aug);
    let views = u_aug.views_per_parent();

    let mut tr = trainer(cfg, labeled.feature_dim, labeled.class_count)?;
    let empty = TrainSet::empty(labeled.feature_dim, labeled.class_count);
    tr.run(&x_lab, &empty, 0.0, cfg.epochs_warm)?;
    let mut run = SslRun {
        validation_accuracy: vec![accuracy(&tr.model, validation)?.overall],
        models: vec![tr.model.clone()],
        selected: 0,
        pseudo_counts: vec![0],
        lambda_u: vec![0.0],
        seconds: vec![start.elapsed().as_secs_f64()],
    };

    for t in 1..=cfg.outer_steps {
        let step_start = Instant::now();
        let guesses = guess_from_features(&tr.model, &u_features, views, cfg.tau)?;
        let pseudo = guesses.train_set(&u_features);
        let lambda = cfg.lambda_u(t)?;
        tr.run(&x_lab, &pseudo, lambda, cfg.epochs_update)?;
        run.validation_accuracy.push(accuracy(&tr.model, validation)?.overall);
        run.pseudo_counts.push(guesses.retained.len());
        run.lambda_u.push(lambda);
        run.models.push(tr.model.clone());
        run.seconds.push(step_start.elapsed().as_secs_f64());
    }
    run.selected = select_best(&run.validation_accuracy);
    Ok(run)
}

/// Supervised baseline on the raw labeled set, with the SSL epoch budget.
pub fn sl_train(labeled: &Dataset, cfg: &TrainConfig) -> Result<Mlp> {
    cfg.validate()?;
    check_inputs(labeled, cfg, "labeled")?;
    supervised(cfg, &TrainSet::from_dataset(labeled)?, cfg.baseline_epochs())
}

/// Supervised baseline on X′, with the SSL epoch budget.
pub fn slk_train(labeled: &Dataset, cfg: &TrainConfig) -> Result<Mlp> {
    cfg.validate()?;
    check_inputs(labeled, cfg, "labeled")?;
    sl_train(&augment_labeled(labeled, cfg)?, cfg)
}

/// The models the SSL loop passes through when nothing is ever
/// pseudo-labeled: one supervised run on X′, snapshotted after the warm start
/// and after every further `epochs_update` epochs.
pub fn supervised_continuation(labeled: &Dataset, cfg: &TrainConfig) -> Result<Vec<Mlp>> {
    cfg.validate()?;
    let x_lab = TrainSet::from_dataset(&augment_labeled(labeled, cfg)?)?;
    let empty = TrainSet::empty(labeled.feature_dim, labeled.class_count);
    let mut tr = trainer(cfg, labeled.feature_dim, labeled.class_count)?;
    tr.run(&x_lab, &empty, 0.0, cfg.epochs_warm)?;
    let mut models = vec![tr.model.clone()];
    for _ in 0..cfg.outer_steps {
        tr.run(&x_lab, &empty, 0.0, cfg.epochs_update)?;
        models.push(tr.model.clone());
    }
    Ok(models)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn selection_prefers_earliest_maximum() {
        assert_eq!(select_best(&[0.5, 0.9, 0.9, 0.1]), 1);
        assert_eq!(select_best(&[0.7]), 0);
    }
}
