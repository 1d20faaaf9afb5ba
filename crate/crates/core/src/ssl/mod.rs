//! The semi-supervised training loop (warm start, averaged guess-labels with
//! a confidence threshold, scheduled unsupervised weight, validation-based
//! model selection) and the SL / SLK baselines.

mod config;
mod guess;
mod train;

pub use config::{lambda_u, TrainConfig, DEFAULT_HIDDEN};
pub use guess::{average_predict, confident, guess_from_features, guess_labels, Guesses};
pub use train::{
    augment_labeled, augment_unlabeled, init_model, sl_train, slk_train, ssl_train,
    supervised_continuation, warm_start, SslRecord, SslRun,
};
