use serde::{Deserialize, Serialize};

use super::metrics::predict_classes;
use crate::datagen::{conjugate_once, Dataset, DatasetMeta, Provenance, Sample, Source};
use crate::nn::Mlp;
use crate::qstate::{bound_k_separable, featurize, ghz_noisy, FeatureScheme};
use crate::{Error, Result};

/// States per interval of the sweep.
pub const INTERVAL_SIZE: usize = 10;
/// Nonseparable predictions an interval needs to count as "above the bound".
pub const INTERVAL_QUORUM: usize = 5;
pub const DEFAULT_STEP: f64 = 0.0005;

/// Which interval index the estimate is read from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum BoundReading {
    /// First interval from which every later interval also reaches the quorum.
    #[default]
    Persistent,
    /// First interval reaching the quorum.
    Transient,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundEstimate {
    pub n: usize,
    pub k: usize,
    pub h: f64,
    pub reading: BoundReading,
    pub b_hat: f64,
    pub interval_index: usize,
    pub counts: Vec<usize>,
    pub reference: Option<f64>,
    pub relative_error: Option<f64>,
}

/// `|b̂ − b| / b`.
pub fn relative_error(b_hat: f64, b_ref: f64) -> Result<f64> {
    if !(b_ref > 0.0) {
        return Err(Error::InvalidArgument(format!("reference bound {b_ref} must be positive")));
    }
    Ok((b_hat - b_ref).abs() / b_ref)
}

fn sweep_len(h: f64) -> Result<usize> {
    let steps = (1.0 / h).round();
    if !(h > 0.0) || (steps * h - 1.0).abs() > 1e-9 || steps as usize % INTERVAL_SIZE != 0 {
        return Err(Error::InvalidArgument(format!(
            "step {h} must divide 1 into a multiple of {INTERVAL_SIZE} points"
        )));
    }
    Ok(steps as usize)
}

/// Noisy-GHZ states at p = h, 2h, …, 1, each locally transformed once before
/// featurization.
pub fn bound_sweep_set(n: usize, h: f64, seed: u64) -> Result<Dataset> {
    let len = sweep_len(h)?;
    let scheme = if n == 3 { FeatureScheme::Full } else { FeatureScheme::Ghz };
    let mut plain = Dataset::new(
        scheme.dim(n),
        2,
        DatasetMeta {
            family: format!("ghz{n}-sweep"),
            scheme,
            seed,
            augmentations: 0,
        },
    );
    for j in 1..=len {
        let p = j as f64 * h;
        let p = p.min(1.0);
        let rho = ghz_noisy(n, p)?;
        plain.push(Sample {
            features: featurize(&rho, scheme)?,
            label: None,
            source: Source::Unlabeled,
            params: Some(Provenance::ghz(n, p)),
        })?;
    }
    conjugate_once(&plain, seed)
}

/// Nonseparable (class 1) predictions per interval of consecutive states.
pub fn interval_counts(predicted: &[usize]) -> Vec<usize> {
    predicted
        .chunks(INTERVAL_SIZE)
        .map(|c| c.iter().filter(|&&p| p == 1).count())
        .collect()
}

/// Interval index n₁ under the chosen reading.
pub fn bound_interval(counts: &[usize], reading: BoundReading) -> Option<usize> {
    match reading {
        BoundReading::Transient => counts.iter().position(|&c| c >= INTERVAL_QUORUM),
        BoundReading::Persistent => {
            let tail = counts.iter().rev().take_while(|&&c| c >= INTERVAL_QUORUM).count();
            (tail > 0).then(|| counts.len() - tail)
        }
    }
}

/// Bound estimate from class predictions over a sweep with step `h`.
pub fn estimate_from_predictions(
    predicted: &[usize],
    n: usize,
    k: usize,
    h: f64,
    reading: BoundReading,
) -> Result<BoundEstimate> {
    if predicted.len() != sweep_len(h)? {
        return Err(Error::Dimension(format!(
            "{} predictions for a sweep of {}",
            predicted.len(),
            sweep_len(h)?
        )));
    }
    let counts = interval_counts(predicted);
    let n1 = bound_interval(&counts, reading).ok_or(Error::NoBoundFound)?;
    let width = INTERVAL_SIZE as f64 * h;
    let b_hat = (width * n1 as f64 + width * (n1 + 1) as f64) / 2.0;
    let reference = bound_k_separable(n, k).ok().map(|b| b.value);
    let relative_error = reference.map(|r| relative_error(b_hat, r)).transpose()?;
    Ok(BoundEstimate {
        n,
        k,
        h,
        reading,
        b_hat,
        interval_index: n1,
        counts,
        reference,
        relative_error,
    })
}

/// Sweeps ρ_ng(n, p) and reads the k-separability bound off `classify`.
pub fn estimate_bound_with<F>(
    n: usize,
    k: usize,
    h: f64,
    seed: u64,
    reading: BoundReading,
    classify: F,
) -> Result<BoundEstimate>
where
    F: FnOnce(&Dataset) -> Result<Vec<usize>>,
{
    let sweep = bound_sweep_set(n, h, seed)?;
    let predicted = classify(&sweep)?;
    estimate_from_predictions(&predicted, n, k, h, reading)
}

/// Sweep estimate for a trained binary model (argmax classification).
pub fn estimate_bound(
    m: &Mlp,
    n: usize,
    k: usize,
    h: f64,
    seed: u64,
    reading: BoundReading,
) -> Result<BoundEstimate> {
    estimate_bound_with(n, k, h, seed, reading, |ds| predict_classes(m, ds))
}

/// `interval,count` rows.
pub fn bound_csv(est: &BoundEstimate) -> String {
    let mut out = String::from("interval,count\n");
    for (i, c) in est.counts.iter().enumerate() {
        out.push_str(&format!("{i},{c}\n"));
    }
    out
}
