//! Accuracy, ROC/AUC (binary and micro-averaged) and the noisy-GHZ
//! separability-bound sweep.

mod bound;
mod metrics;
mod roc;

pub use bound::{
    bound_csv, bound_interval, bound_sweep_set, estimate_bound, estimate_bound_with,
    estimate_from_predictions, interval_counts, relative_error, BoundEstimate, BoundReading,
    DEFAULT_STEP, INTERVAL_QUORUM, INTERVAL_SIZE,
};
pub use metrics::{accuracy, accuracy_of, mean_std, predict_classes, predict_proba, Accuracy};
pub use roc::{class_roc, micro_roc, micro_roc_from, roc_auc, roc_csv, trapezoid, RocCurve, RocPoint};
