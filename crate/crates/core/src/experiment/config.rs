use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use super::presets::preset;
use crate::datagen::{GhzMode, GhzTask};
use crate::eval::{BoundReading, DEFAULT_STEP};
use crate::qstate::FeatureScheme;
use crate::ssl::TrainConfig;
use crate::{Error, Result};

/// State family an experiment trains and tests on.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum FamilySpec {
    /// Random two-qubit states labeled by PPT.
    TwoQubit,
    /// Labeled random two-qubit states; unlabeled, validation and test sets
    /// from the ρ_s line.
    RhoS,
    /// Three-class noisy GHZ on three qubits, with a second, locally
    /// transformed test set.
    Ghz3,
    /// k-separable vs k-nonseparable noisy GHZ on n qubits.
    GhzBinary { n: usize, k: usize },
    /// Fuzzy-interval 3-separability training on n qubits; the test set uses
    /// exact 3-separability labels.
    Fuzzy {
        n: usize,
        a: f64,
        #[serde(default)]
        unlabeled: FuzzyPool,
    },
}

/// Where the unlabeled states of a fuzzy experiment come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FuzzyPool {
    /// The union of the two fuzzy training intervals.
    #[default]
    Intervals,
    /// p uniform on [0, 1], balanced in exact 3-separability.
    Full,
}

impl FamilySpec {
    /// GHZ task used for training data, if any.
    pub fn ghz_task(&self) -> Result<Option<GhzTask>> {
        Ok(Some(match *self {
            FamilySpec::TwoQubit | FamilySpec::RhoS => return Ok(None),
            FamilySpec::Ghz3 => GhzTask::new(3, GhzMode::ThreeClass)?,
            FamilySpec::GhzBinary { n, k } => GhzTask::new(n, GhzMode::BinaryK(k))?,
            FamilySpec::Fuzzy { n, a, .. } => GhzTask::new(n, GhzMode::Fuzzy3Sep(a))?,
        }))
    }

    pub fn class_count(&self) -> usize {
        match self {
            FamilySpec::Ghz3 => 3,
            _ => 2,
        }
    }

    /// `(n, k)` of the separability bound a bound sweep reads off.
    pub fn sweep_target(&self) -> Option<(usize, usize)> {
        match *self {
            FamilySpec::GhzBinary { n, k } if n > 3 => Some((n, k)),
            FamilySpec::Fuzzy { n, .. } => Some((n, 3)),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BoundSpec {
    pub step: f64,
    pub reading: BoundReading,
}

impl Default for BoundSpec {
    fn default() -> Self {
        Self {
            step: DEFAULT_STEP,
            reading: BoundReading::Persistent,
        }
    }
}

/// A fully explicit experiment: data family and sizes, training
/// hyperparameters and the seeds to run.
///
/// `train.seed` is ignored; every run uses its entry of `seeds` as both the
/// data seed and the training seed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub name: String,
    pub family: FamilySpec,
    /// Labeled set size l.
    pub labeled: usize,
    /// Unlabeled set size u.
    pub unlabeled: usize,
    /// Size of each test set.
    pub test: usize,
    pub train: TrainConfig,
    pub seeds: Vec<u64>,
    #[serde(default)]
    pub bound: BoundSpec,
    /// Marks presets expected to take hours.
    #[serde(default)]
    pub long_running: bool,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        if self.seeds.is_empty() {
            return bad("seed list is empty".into());
        }
        let mut sorted = self.seeds.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != self.seeds.len() {
            return bad("seed list has duplicates".into());
        }
        self.train.validate()?;
        let c = self.family.class_count();
        // two-qubit generators split exactly in half; GHZ ones interleave
        let even = matches!(self.family, FamilySpec::TwoQubit | FamilySpec::RhoS);
        for (what, size) in [
            ("labeled", self.labeled),
            ("test", self.test),
            ("validation", self.train.validation_size),
        ] {
            if size < c || (even && size % 2 != 0) {
                return bad(format!("{what} size {size} does not split into {c} classes"));
            }
        }
        if self.unlabeled < c {
            return bad(format!("unlabeled size {} below {c} classes", self.unlabeled));
        }
        let scheme = self.train.feature_scheme;
        match self.family.ghz_task()? {
            Some(task) if task.scheme() != scheme => {
                return bad(format!(
                    "{} uses {:?} features, config asks for {scheme:?}",
                    task.family_tag(),
                    task.scheme()
                ))
            }
            None if scheme == FeatureScheme::Ghz => {
                return bad("two-qubit families take F, F1 or F2 features".into())
            }
            _ => {}
        }
        Ok(())
    }

    /// The config without its seed list, as JSON; this is what the digest
    /// covers, so subsets of seeds can be generated, trained and evaluated
    /// separately.
    pub fn digest_view(&self) -> Value {
        let mut v = serde_json::to_value(self).expect("config serializes");
        if let Value::Object(map) = &mut v {
            map.remove("seeds");
            if let Some(Value::Object(train)) = map.get_mut("train") {
                train.remove("seed");
            }
        }
        v
    }

    /// Hex sha256 of the canonical JSON of [`Self::digest_view`].
    pub fn digest(&self) -> String {
        let text = serde_json::to_string(&self.digest_view()).expect("json value serializes");
        hex::encode(Sha256::digest(text.as_bytes()))
    }

    /// Training hyperparameters for one seed.
    pub fn train_for(&self, seed: u64) -> TrainConfig {
        TrainConfig {
            seed,
            ..self.train.clone()
        }
    }
}

/// Recursively overlays `top` onto `base`; objects merge key by key,
/// everything else is replaced.
pub fn merge_json(base: &mut Value, top: Value) {
    match (base, top) {
        (Value::Object(b), Value::Object(t)) => {
            for (k, v) in t {
                match b.get_mut(&k) {
                    Some(slot) => merge_json(slot, v),
                    None => {
                        b.insert(k, v);
                    }
                }
            }
        }
        (slot, v) => *slot = v,
    }
}

/// Resolves a JSON config document into an explicit experiment.
///
/// The document may name a `"preset"`; `preset_override` (the command-line
/// `--preset`) takes precedence over it. Fields present in the document
/// override the preset's. Without any preset the document must be complete.
pub fn resolve_config(doc: Value, preset_override: Option<&str>) -> Result<ExperimentConfig> {
    let Value::Object(mut fields) = doc else {
        return Err(Error::Config("config must be a JSON object".into()));
    };
    let named = match fields.remove("preset") {
        Some(Value::String(s)) => Some(s),
        Some(other) => return Err(Error::Config(format!("preset must be a string, got {other}"))),
        None => None,
    };
    let name = preset_override.map(str::to_owned).or(named);
    let merged = match name {
        Some(name) => {
            let mut base = serde_json::to_value(preset(&name)?)?;
            merge_json(&mut base, Value::Object(fields));
            base
        }
        None => Value::Object(fields),
    };
    let cfg: ExperimentConfig =
        serde_json::from_value(merged).map_err(|e| Error::Config(format!("bad experiment config: {e}")))?;
    cfg.validate()?;
    Ok(cfg)
}

/// Reads and resolves a config file.
pub fn load_config(path: &Path, preset_override: Option<&str>) -> Result<ExperimentConfig> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
    let doc: Value = serde_json::from_str(&text)
        .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
    resolve_config(doc, preset_override)
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn file_fields_override_the_preset() {
        let cfg = resolve_config(json!({"preset": "rho-s-30", "train": {"tau": 0.97}}), None).unwrap();
        assert_eq!(cfg.name, "rho-s-30");
        assert_eq!(cfg.train.tau, 0.97);
        assert_eq!(cfg.train.outer_steps, 30);
        let cli = resolve_config(json!({"preset": "rho-s-30"}), Some("rho-s-100")).unwrap();
        assert_eq!(cli.labeled, 100);
    }

    #[test]
    fn digest_ignores_seeds_only() {
        let a = preset("rho-s-30").unwrap();
        let b = ExperimentConfig {
            seeds: vec![9],
            ..a.clone()
        };
        assert_eq!(a.digest(), b.digest());
        let mut c = a.clone();
        c.train.tau = 0.99;
        assert_ne!(a.digest(), c.digest());
    }

    #[test]
    fn rejects_inconsistent_configs() {
        assert!(resolve_config(json!({"preset": "rho-s-30", "seeds": []}), None).is_err());
        assert!(resolve_config(json!({"preset": "rho-s-30", "labled": 3}), None).is_err());
        assert!(resolve_config(json!({"preset": "ghz3-20", "labeled": 2}), None).is_err());
        assert!(resolve_config(json!({"preset": "rho-s-30", "labeled": 31}), None).is_err());
        assert!(resolve_config(json!({"labeled": 10}), None).is_err());
        assert!(resolve_config(json!({"preset": "nope"}), None).is_err());
    }
}
