use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use super::config::ExperimentConfig;
use super::data::{dataset_names, generate_seed, test_names};
use crate::datagen::{load_dataset, save_dataset, Dataset};
use crate::eval::{
    accuracy, accuracy_of, bound_csv, estimate_bound, mean_std, micro_roc_from, predict_proba,
    relative_error, roc_auc, roc_csv, Accuracy, BoundEstimate, RocCurve,
};
use crate::nn::{argmax, Mlp};
use crate::rng;
use crate::ssl::{sl_train, slk_train, ssl_train, SslRecord};
use crate::{Error, Result};

const SWEEP_AUGMENT: u64 = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Sl,
    Slk,
    Ssl,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::Sl, Method::Slk, Method::Ssl];

    pub fn tag(self) -> &'static str {
        match self {
            Method::Sl => "sl",
            Method::Slk => "slk",
            Method::Ssl => "ssl",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.tag() == s)
            .ok_or_else(|| Error::Config(format!("unknown method '{s}' (sl, slk or ssl)")))
    }
}

/// Where outputs go and how runs are scheduled.
#[derive(Debug, Clone)]
pub struct RunOptions {
    pub out: PathBuf,
    /// Worker threads across seeds.
    pub jobs: usize,
    /// Proceed despite config-digest or file-digest mismatches.
    pub force: bool,
}

impl RunOptions {
    pub fn new(out: impl Into<PathBuf>) -> Self {
        Self {
            out: out.into(),
            jobs: 1,
            force: false,
        }
    }

    pub fn seed_dir(&self, seed: u64) -> PathBuf {
        self.out.join(format!("seed-{seed}"))
    }
}

/// Per-seed record of generated files and the config they came from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub config_digest: String,
    pub seed: u64,
    /// Resolved config without the seed list.
    pub config: Value,
    /// sha256 of every dataset file, by file name.
    pub files: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainReport {
    pub config_digest: String,
    pub method: Method,
    pub seed: u64,
    /// Epochs of supervised-equivalent training the final model received.
    pub epochs: usize,
    pub validation_accuracy: f64,
    pub ssl: Option<SslRecord>,
    pub model_sha256: String,
}

/// Wall-clock figures, kept apart from the reproducible outputs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub seconds: f64,
    pub per_step: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestMetrics {
    pub accuracy: Accuracy,
    /// Binary ROC on the entangled-class probability, micro-averaged ROC for
    /// more classes.
    pub auc: f64,
    /// One-vs-rest AUC per class (multi-class only).
    pub class_auc: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeedMetrics {
    pub config_digest: String,
    pub method: Method,
    pub seed: u64,
    pub tests: BTreeMap<String, TestMetrics>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Stat {
    pub mean: f64,
    pub std: f64,
    pub values: Vec<f64>,
}

impl Stat {
    pub fn of(values: Vec<f64>) -> Self {
        let (mean, std) = mean_std(&values);
        Self { mean, std, values }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestSummary {
    pub accuracy: Stat,
    pub auc: Stat,
    pub per_class_accuracy: Vec<Stat>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalSummary {
    pub config_digest: String,
    pub method: Method,
    pub seeds: Vec<u64>,
    pub tests: BTreeMap<String, TestSummary>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeedBound {
    pub config_digest: String,
    pub method: Method,
    pub seed: u64,
    /// `None` when the model never settles on the nonseparable class.
    pub estimate: Option<BoundEstimate>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundSummary {
    pub config_digest: String,
    pub method: Method,
    pub n: usize,
    pub k: usize,
    pub reference: Option<f64>,
    pub seeds: Vec<u64>,
    pub b_hat: Vec<Option<f64>>,
    /// Mean over the runs that found a bound.
    pub b_hat_mean: Option<f64>,
    /// Relative error of the mean estimate.
    pub relative_error_of_mean: Option<f64>,
    /// Mean of the per-run relative errors.
    pub mean_relative_error: Option<f64>,
}

fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn write_bytes(path: &Path, bytes: &[u8]) -> Result<String> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    std::fs::write(path, bytes).map_err(|e| Error::io(path, e))?;
    Ok(sha256_hex(bytes))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    write_bytes(path, text.as_bytes()).map(drop)
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse {
        path: path.to_owned(),
        line: e.line(),
        msg: e.to_string(),
    })
}

fn csv_with_digest(digest: &str, body: &str) -> String {
    format!("# config_digest={digest}\n{body}")
}

fn mismatch(what: &str, path: &Path, expected: &str, found: &str) -> Error {
    Error::Config(format!(
        "{what} mismatch in {}: expected {expected}, found {found} (rerun the earlier stage or pass --force)",
        path.display()
    ))
}

/// Runs `f` for every seed on at most `jobs` threads; results come back in
/// seed-list order and the first failure (in that order) is returned.
fn for_seeds<T, F>(cfg: &ExperimentConfig, jobs: usize, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(u64) -> Result<T> + Sync,
{
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    let results: Vec<Result<T>> = pool.install(|| cfg.seeds.par_iter().map(|&s| f(s)).collect());
    results.into_iter().collect()
}

/// Writes every dataset of every seed plus a per-seed manifest.
pub fn generate(cfg: &ExperimentConfig, opts: &RunOptions) -> Result<Vec<Manifest>> {
    cfg.validate()?;
    let digest = cfg.digest();
    for_seeds(cfg, opts.jobs, |seed| {
        let dir = opts.seed_dir(seed);
        let data = generate_seed(cfg, seed)?;
        std::fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
        let mut files = BTreeMap::new();
        for (name, ds) in data.named() {
            let file = format!("{name}.dataset");
            let path = dir.join(&file);
            save_dataset(ds, &path)?;
            let bytes = std::fs::read(&path).map_err(|e| Error::io(&path, e))?;
            files.insert(file, sha256_hex(&bytes));
        }
        let manifest = Manifest {
            config_digest: digest.clone(),
            seed,
            config: cfg.digest_view(),
            files,
        };
        write_json(&dir.join("manifest.json"), &manifest)?;
        Ok(manifest)
    })
}

/// Loads the seed's manifest, checking its config digest.
pub fn read_manifest(cfg: &ExperimentConfig, opts: &RunOptions, seed: u64) -> Result<Manifest> {
    let path = opts.seed_dir(seed).join("manifest.json");
    let m: Manifest = read_json(&path)?;
    let digest = cfg.digest();
    if m.config_digest != digest && !opts.force {
        return Err(mismatch("config digest", &path, &digest, &m.config_digest));
    }
    Ok(m)
}

/// Loads one generated dataset, checking it against the manifest.
pub fn load_generated(opts: &RunOptions, manifest: &Manifest, name: &str) -> Result<Dataset> {
    let file = format!("{name}.dataset");
    let path = opts.seed_dir(manifest.seed).join(&file);
    let bytes = std::fs::read(&path).map_err(|e| Error::io(&path, e))?;
    let expected = manifest
        .files
        .get(&file)
        .ok_or_else(|| Error::Config(format!("{file} is not listed in the manifest")))?;
    let found = sha256_hex(&bytes);
    if &found != expected && !opts.force {
        return Err(mismatch("file digest", &path, expected, &found));
    }
    load_dataset(&path)
}

/// Trains `method` on every seed and writes `<method>.model`,
/// `<method>.report.json` and `<method>.timing.json`.
pub fn train(cfg: &ExperimentConfig, method: Method, opts: &RunOptions) -> Result<Vec<TrainReport>> {
    cfg.validate()?;
    let digest = cfg.digest();
    for_seeds(cfg, opts.jobs, |seed| {
        let manifest = read_manifest(cfg, opts, seed)?;
        let tc = cfg.train_for(seed);
        let labeled = load_generated(opts, &manifest, "labeled")?;
        let validation = load_generated(opts, &manifest, "validation")?;
        let start = std::time::Instant::now();
        let (model, ssl, per_step) = match method {
            Method::Sl => (sl_train(&labeled, &tc)?, None, Vec::new()),
            Method::Slk => (slk_train(&labeled, &tc)?, None, Vec::new()),
            Method::Ssl => {
                let unlabeled = load_generated(opts, &manifest, "unlabeled")?;
                let run = ssl_train(&labeled, &unlabeled, &validation, &tc)?;
                (run.best().clone(), Some(run.record()), run.seconds.clone())
            }
        };
        let seconds = start.elapsed().as_secs_f64();
        let dir = opts.seed_dir(seed);
        let model_sha256 = write_bytes(&dir.join(format!("{method}.model")), model.encode().as_bytes())?;
        let epochs = match &ssl {
            Some(r) => tc.epochs_warm + r.selected * tc.epochs_update,
            None => tc.baseline_epochs(),
        };
        let report = TrainReport {
            config_digest: digest.clone(),
            method,
            seed,
            epochs,
            validation_accuracy: accuracy(&model, &validation)?.overall,
            ssl,
            model_sha256,
        };
        write_json(&dir.join(format!("{method}.report.json")), &report)?;
        write_json(&dir.join(format!("{method}.timing.json")), &Timing { seconds, per_step })?;
        Ok(report)
    })
}

/// Loads a trained model, checking it against its report.
pub fn load_trained(cfg: &ExperimentConfig, opts: &RunOptions, seed: u64, method: Method) -> Result<Mlp> {
    let dir = opts.seed_dir(seed);
    let report_path = dir.join(format!("{method}.report.json"));
    let report: TrainReport = read_json(&report_path)?;
    let digest = cfg.digest();
    if report.config_digest != digest && !opts.force {
        return Err(mismatch("config digest", &report_path, &digest, &report.config_digest));
    }
    let path = dir.join(format!("{method}.model"));
    let text = std::fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
    let found = sha256_hex(text.as_bytes());
    if found != report.model_sha256 && !opts.force {
        return Err(mismatch("model digest", &path, &report.model_sha256, &found));
    }
    Mlp::decode(&text, &path)
}

fn true_labels(ds: &Dataset) -> Result<Vec<usize>> {
    ds.samples
        .iter()
        .enumerate()
        .map(|(i, s)| s.label.ok_or_else(|| Error::InvalidArgument(format!("test sample {i} is unlabeled"))))
        .collect()
}

fn test_metrics(m: &Mlp, test: &Dataset) -> Result<(TestMetrics, RocCurve, Vec<RocCurve>)> {
    let probs = predict_proba(m, test)?;
    let labels = true_labels(test)?;
    let predicted: Vec<usize> = probs.iter().map(|p| argmax(p)).collect();
    let acc = accuracy_of(&predicted, test)?;
    let micro = micro_roc_from(&probs, &labels)?;
    let mut per_class = Vec::new();
    if test.class_count > 2 {
        for c in 0..test.class_count {
            let scores: Vec<f64> = probs.iter().map(|p| p[c]).collect();
            let pos: Vec<bool> = labels.iter().map(|&l| l == c).collect();
            per_class.push(roc_auc(&scores, &pos)?);
        }
    }
    let metrics = TestMetrics {
        accuracy: acc,
        auc: micro.auc,
        class_auc: per_class.iter().map(|c| c.auc).collect(),
    };
    Ok((metrics, micro, per_class))
}

/// Accuracy and ROC of every seed's `method` model on every test set, plus a
/// mean/std summary at `<out>/<method>.summary.json`.
pub fn evaluate(cfg: &ExperimentConfig, method: Method, opts: &RunOptions) -> Result<EvalSummary> {
    cfg.validate()?;
    let digest = cfg.digest();
    let per_seed = for_seeds(cfg, opts.jobs, |seed| {
        let manifest = read_manifest(cfg, opts, seed)?;
        let model = load_trained(cfg, opts, seed, method)?;
        let dir = opts.seed_dir(seed);
        let mut tests = BTreeMap::new();
        for name in test_names(&cfg.family) {
            let test = load_generated(opts, &manifest, name)?;
            let (metrics, micro, per_class) = test_metrics(&model, &test)?;
            write_bytes(
                &dir.join(format!("{method}.{name}.roc.csv")),
                csv_with_digest(&digest, &roc_csv(&micro)).as_bytes(),
            )?;
            for (c, curve) in per_class.iter().enumerate() {
                write_bytes(
                    &dir.join(format!("{method}.{name}.roc-class{c}.csv")),
                    csv_with_digest(&digest, &roc_csv(curve)).as_bytes(),
                )?;
            }
            tests.insert(name.to_owned(), metrics);
        }
        let record = SeedMetrics {
            config_digest: digest.clone(),
            method,
            seed,
            tests,
        };
        write_json(&dir.join(format!("{method}.metrics.json")), &record)?;
        Ok(record)
    })?;

    let mut tests = BTreeMap::new();
    for name in test_names(&cfg.family) {
        let rows: Vec<&TestMetrics> = per_seed.iter().map(|r| &r.tests[name]).collect();
        let classes = rows[0].accuracy.per_class.len();
        tests.insert(
            name.to_owned(),
            TestSummary {
                accuracy: Stat::of(rows.iter().map(|r| r.accuracy.overall).collect()),
                auc: Stat::of(rows.iter().map(|r| r.auc).collect()),
                per_class_accuracy: (0..classes)
                    .map(|c| Stat::of(rows.iter().filter_map(|r| r.accuracy.per_class[c]).collect()))
                    .collect(),
            },
        );
    }
    let summary = EvalSummary {
        config_digest: digest,
        method,
        seeds: cfg.seeds.clone(),
        tests,
    };
    write_json(&opts.out.join(format!("{method}.summary.json")), &summary)?;
    Ok(summary)
}

/// Bound sweep of every seed's `method` model, plus the across-seed summary
/// at `<out>/<method>.bound-summary.json`.
pub fn sweep_bound(cfg: &ExperimentConfig, method: Method, opts: &RunOptions) -> Result<BoundSummary> {
    cfg.validate()?;
    let (n, k) = cfg
        .family
        .sweep_target()
        .ok_or_else(|| Error::Config(format!("{} has no bound to sweep", cfg.name)))?;
    let digest = cfg.digest();
    let per_seed = for_seeds(cfg, opts.jobs, |seed| {
        read_manifest(cfg, opts, seed)?;
        let model = load_trained(cfg, opts, seed, method)?;
        let sweep_seed = rng::subseed(seed, SWEEP_AUGMENT);
        let estimate = match estimate_bound(&model, n, k, cfg.bound.step, sweep_seed, cfg.bound.reading) {
            Ok(e) => Some(e),
            Err(Error::NoBoundFound) => None,
            Err(e) => return Err(e),
        };
        let dir = opts.seed_dir(seed);
        if let Some(e) = &estimate {
            write_bytes(
                &dir.join(format!("{method}.bound.csv")),
                csv_with_digest(&digest, &bound_csv(e)).as_bytes(),
            )?;
        }
        let record = SeedBound {
            config_digest: digest.clone(),
            method,
            seed,
            estimate,
        };
        write_json(&dir.join(format!("{method}.bound.json")), &record)?;
        Ok(record)
    })?;

    let reference = crate::qstate::bound_k_separable(n, k).ok().map(|b| b.value);
    let b_hat: Vec<Option<f64>> = per_seed.iter().map(|r| r.estimate.as_ref().map(|e| e.b_hat)).collect();
    let found: Vec<f64> = b_hat.iter().flatten().copied().collect();
    let b_hat_mean = (!found.is_empty()).then(|| mean_std(&found).0);
    let relative_error_of_mean = match (b_hat_mean, reference) {
        (Some(b), Some(r)) => Some(relative_error(b, r)?),
        _ => None,
    };
    let res: Vec<f64> = per_seed
        .iter()
        .filter_map(|r| r.estimate.as_ref().and_then(|e| e.relative_error))
        .collect();
    let summary = BoundSummary {
        config_digest: digest,
        method,
        n,
        k,
        reference,
        seeds: cfg.seeds.clone(),
        b_hat,
        b_hat_mean,
        relative_error_of_mean,
        mean_relative_error: (!res.is_empty()).then(|| mean_std(&res).0),
    };
    write_json(&opts.out.join(format!("{method}.bound-summary.json")), &summary)?;
    Ok(summary)
}

/// Files every command writes for one seed, in a fixed order; used for
/// digest comparisons between runs. Timing files are excluded.
pub fn reproducible_files(cfg: &ExperimentConfig, opts: &RunOptions, seed: u64) -> Result<Vec<PathBuf>> {
    let dir = opts.seed_dir(seed);
    let mut names: Vec<String> = dataset_names(&cfg.family)
        .into_iter()
        .map(|n| format!("{n}.dataset"))
        .collect();
    names.push("manifest.json".into());
    let entries = std::fs::read_dir(&dir).map_err(|e| Error::io(&dir, e))?;
    let mut extra = Vec::new();
    for entry in entries {
        let entry = entry.map_err(|e| Error::io(&dir, e))?;
        let name = entry.file_name().to_string_lossy().into_owned();
        if !names.contains(&name) && !name.ends_with(".timing.json") {
            extra.push(name);
        }
    }
    extra.sort();
    names.extend(extra);
    Ok(names.into_iter().map(|n| dir.join(n)).collect())
}
