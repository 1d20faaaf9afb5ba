use serde::{Deserialize, Serialize};

use crate::qstate::FeatureScheme;
use crate::{Error, Result};

/// Hidden stack of the standard network.
pub const DEFAULT_HIDDEN: [usize; 4] = [512, 256, 128, 16];

/// Hyperparameters of one semi-supervised (or baseline) training run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TrainConfig {
    /// Confidence threshold; a guess is kept only when its averaged
    /// probability is strictly above it.
    pub tau: f64,
    /// Number of outer updates T.
    pub outer_steps: usize,
    /// Augmented views per labeled state (K₁).
    pub k_labeled: usize,
    /// Augmented views per unlabeled state (K₂).
    pub k_unlabeled: usize,
    pub schedule_a: f64,
    pub schedule_b: f64,
    pub lr: f64,
    pub epochs_warm: usize,
    pub epochs_update: usize,
    pub batch: usize,
    pub seed: u64,
    pub feature_scheme: FeatureScheme,
    pub validation_size: usize,
    /// Hidden layer widths between the feature input and the class output.
    pub hidden: Vec<usize>,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            tau: 0.95,
            outer_steps: 30,
            k_labeled: 4,
            k_unlabeled: 4,
            schedule_a: -1.0,
            schedule_b: 1.0,
            lr: 0.003,
            epochs_warm: 100,
            epochs_update: 100,
            batch: 64,
            seed: 0,
            feature_scheme: FeatureScheme::Full,
            validation_size: 200,
            hidden: DEFAULT_HIDDEN.to_vec(),
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        if !(0.9..=1.0).contains(&self.tau) {
            return bad(format!("tau = {} outside [0.9, 1]", self.tau));
        }
        if self.outer_steps == 0 {
            return bad("outer_steps must be at least 1".into());
        }
        if !(self.lr > 0.0 && self.lr.is_finite()) {
            return bad(format!("lr = {} must be positive", self.lr));
        }
        if self.epochs_warm == 0 || self.epochs_update == 0 {
            return bad("epoch counts must be at least 1".into());
        }
        if self.batch == 0 {
            return bad("batch must be at least 1".into());
        }
        if self.hidden.contains(&0) {
            return bad("hidden layers must be non-empty".into());
        }
        if !(self.schedule_a.is_finite() && self.schedule_b.is_finite()) {
            return bad("schedule endpoints must be finite".into());
        }
        Ok(())
    }

    /// Layer widths for `input` features and `classes` outputs.
    pub fn layer_dims(&self, input: usize, classes: usize) -> Vec<usize> {
        let mut dims = vec![input];
        dims.extend(&self.hidden);
        dims.push(classes);
        dims
    }

    /// Epochs given to the supervised baselines: the SSL total.
    pub fn baseline_epochs(&self) -> usize {
        self.epochs_warm + self.outer_steps * self.epochs_update
    }

    pub fn lambda_u(&self, t: usize) -> Result<f64> {
        lambda_u(t, self.outer_steps, self.schedule_a, self.schedule_b)
    }
}

/// Unsupervised weight at outer step `t` of `T`:
/// `exp(−(t·|a − b|/T)²) / (2π)`.
pub fn lambda_u(t: usize, outer_steps: usize, a: f64, b: f64) -> Result<f64> {
    if t == 0 || t > outer_steps {
        return Err(Error::InvalidArgument(format!("step {t} outside 1..={outer_steps}")));
    }
    let s = t as f64 * (a - b).abs() / outer_steps as f64;
    Ok((-s * s).exp() / (2.0 * std::f64::consts::PI))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn schedule_values() {
        let l = |t| lambda_u(t, 30, -1.0, 1.0).unwrap();
        assert!((l(1) - 0.158_449_157).abs() < 1e-9);
        assert!((l(30) - 0.002_915_0).abs() < 5e-8);
        assert!((l(15) - 0.058_550).abs() < 5e-7);
        assert!((1..30).all(|t| l(t + 1) < l(t)));
        assert!(lambda_u(0, 30, -1.0, 1.0).is_err());
        assert!(lambda_u(31, 30, -1.0, 1.0).is_err());
    }

    #[test]
    fn config_round_trips_with_defaults() {
        let cfg: TrainConfig = serde_json::from_str(r#"{"tau": 0.97, "seed": 4}"#).unwrap();
        assert_eq!(cfg.tau, 0.97);
        assert_eq!(cfg.outer_steps, 30);
        let back: TrainConfig = serde_json::from_str(&serde_json::to_string(&cfg).unwrap()).unwrap();
        assert_eq!(back, cfg);
        assert!(TrainConfig { tau: 0.8, ..cfg.clone() }.validate().is_err());
        assert!(serde_json::from_str::<TrainConfig>(r#"{"tua": 1}"#).is_err());
    }
}
