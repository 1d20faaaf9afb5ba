//! ROC staircases, AUC and micro-averaging, first on hand-made scores and
//! then on a trained three-class GHZ classifier.
//!
//! cargo run --release --example roc_auc

use entangle_ssl::datagen::{gen_ghz_labeled, GhzMode, GhzTask};
use entangle_ssl::eval::{class_roc, micro_roc, roc_auc, roc_csv};
use entangle_ssl::rng::Stream;
use entangle_ssl::ssl::{slk_train, TrainConfig};
use entangle_ssl::qstate::FeatureScheme;
use entangle_ssl::Result;

fn main() -> Result<()> {
    let scores = [0.9, 0.8, 0.8, 0.6, 0.4, 0.3, 0.3, 0.1];
    let labels = [true, true, false, true, false, true, false, false];
    let curve = roc_auc(&scores, &labels)?;
    // tied scores enter together, so the area is the Mann–Whitney statistic
    println!("AUC {:.4}\n{}", curve.auc, roc_csv(&curve));

    let task = GhzTask::new(3, GhzMode::ThreeClass)?;
    let train = gen_ghz_labeled(&task, 60, 1, Stream::Labeled)?;
    let test = gen_ghz_labeled(&task, 600, 1, Stream::Test)?;
    let cfg = TrainConfig {
        k_labeled: 2,
        // SL/SLK train for epochs_warm + outer_steps · epochs_update epochs
        epochs_warm: 100,
        outer_steps: 2,
        epochs_update: 50,
        feature_scheme: FeatureScheme::Full,
        seed: 1,
        hidden: vec![64, 64],
        ..TrainConfig::default()
    };
    let model = slk_train(&train, &cfg)?;
    let micro = micro_roc(&model, &test)?;
    println!("three-qubit GHZ, micro-averaged AUC {:.4} ({} points)", micro.auc, micro.points.len());
    for class in 0..3 {
        println!("  class {class} one-vs-rest AUC {:.4}", class_roc(&model, &test, class)?.auc);
    }
    Ok(())
}
