//! Noisy-GHZ datasets: three-class (n = 3), binary k-separability (n ≥ 4)
//! and fuzzy-bound 3-separability.

use rand::Rng;

use super::augment::{draw_mixes, transform_once};
use super::sample::{Dataset, DatasetMeta, Provenance, Sample, Source};
use super::two_qubit::shuffle_samples;
use super::MAX_ATTEMPTS_PER_CLASS;
use crate::qstate::{
    bound_k_separable, featurize, ghz_noisy, FeatureScheme, MIN_GHZ_QUBITS,
};
use crate::rng::{self, Stream};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GhzMode {
    /// Fully separable / biseparable only / genuinely entangled (n = 3).
    ThreeClass,
    /// k-separable vs k-nonseparable.
    BinaryK(usize),
    /// 3-separable vs 3-nonseparable with training labels drawn from loosened
    /// intervals controlled by `a ∈ (0, 1)` (n ∈ 4..=7).
    Fuzzy3Sep(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GhzTask {
    pub n: usize,
    pub mode: GhzMode,
}

/// Closed p-interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn contains(&self, p: f64) -> bool {
        self.lo <= p && p <= self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }
}

/// The two fuzzy training intervals for 3-separability:
/// `[0, b₄ + a(b₂ − b₄)/4]` and `[b₂ − 2a(b₂ − b₄)/3, 1]`.
pub fn fuzzy_intervals(n: usize, a: f64) -> Result<(Interval, Interval)> {
    if !(4..=7).contains(&n) {
        return Err(Error::InvalidArgument(format!(
            "fuzzy 3-separability needs 4 ≤ n ≤ 7, got {n}"
        )));
    }
    if !(a > 0.0 && a < 1.0) {
        return Err(Error::InvalidArgument(format!("fuzzy parameter a = {a} outside (0, 1)")));
    }
    let b2 = bound_k_separable(n, 2)?.value;
    let b4 = bound_k_separable(n, 4)?.value;
    let sep = Interval {
        lo: 0.0,
        hi: b4 + a * (b2 - b4) / 4.0,
    };
    let nonsep = Interval {
        lo: b2 - a * 2.0 * (b2 - b4) / 3.0,
        hi: 1.0,
    };
    if sep.hi >= nonsep.lo {
        return Err(Error::InvalidArgument(format!(
            "fuzzy intervals overlap for n = {n}, a = {a}"
        )));
    }
    Ok((sep, nonsep))
}

impl GhzTask {
    pub fn new(n: usize, mode: GhzMode) -> Result<Self> {
        if n < MIN_GHZ_QUBITS {
            return Err(Error::InvalidArgument(format!("GHZ task on {n} qubits")));
        }
        match mode {
            GhzMode::ThreeClass if n != 3 => {
                return Err(Error::InvalidArgument(
                    "the three-class task is defined for n = 3".into(),
                ))
            }
            GhzMode::BinaryK(k) => {
                bound_k_separable(n, k)?;
            }
            GhzMode::Fuzzy3Sep(a) => {
                fuzzy_intervals(n, a)?;
            }
            GhzMode::ThreeClass => {}
        }
        Ok(Self { n, mode })
    }

    pub fn class_count(&self) -> usize {
        match self.mode {
            GhzMode::ThreeClass => 3,
            _ => 2,
        }
    }

    /// Full Pauli features for three qubits, (⟨Mₓ⟩, ⟨M_z⟩) beyond.
    pub fn scheme(&self) -> FeatureScheme {
        if self.n == 3 {
            FeatureScheme::Full
        } else {
            FeatureScheme::Ghz
        }
    }

    pub fn family_tag(&self) -> String {
        match self.mode {
            GhzMode::ThreeClass => format!("ghz{}-3class", self.n),
            GhzMode::BinaryK(k) => format!("ghz{}-k{k}", self.n),
            GhzMode::Fuzzy3Sep(a) => format!("ghz{}-fuzzy-a{a}", self.n),
        }
    }

    /// The exact threshold the model is meant to learn for binary tasks.
    pub fn target_bound(&self) -> Option<f64> {
        match self.mode {
            GhzMode::BinaryK(k) => bound_k_separable(self.n, k).ok().map(|b| b.value),
            GhzMode::Fuzzy3Sep(_) => bound_k_separable(self.n, 3).ok().map(|b| b.value),
            GhzMode::ThreeClass => None,
        }
    }

    /// p-region from which labeled samples of `class` are drawn.
    pub fn class_region(&self, class: usize) -> Result<Interval> {
        let n = self.n;
        let region = match (self.mode, class) {
            (GhzMode::ThreeClass, 0) => Interval { lo: 0.0, hi: bound_k_separable(n, n)?.value },
            (GhzMode::ThreeClass, 1) => Interval {
                lo: bound_k_separable(n, n)?.value,
                hi: bound_k_separable(n, 2)?.value,
            },
            (GhzMode::ThreeClass, 2) => Interval { lo: bound_k_separable(n, 2)?.value, hi: 1.0 },
            (GhzMode::BinaryK(k), 0) => Interval { lo: 0.0, hi: bound_k_separable(n, k)?.value },
            (GhzMode::BinaryK(k), 1) => Interval { lo: bound_k_separable(n, k)?.value, hi: 1.0 },
            (GhzMode::Fuzzy3Sep(a), 0) => fuzzy_intervals(n, a)?.0,
            (GhzMode::Fuzzy3Sep(a), 1) => fuzzy_intervals(n, a)?.1,
            _ => return Err(Error::InvalidArgument(format!("class {class} out of range"))),
        };
        Ok(region)
    }
}

/// One-hot class index of ρ_ng(n, p) under `task`.
///
/// Three-class: 0 fully separable (p ≤ bₙ), 1 biseparable but not fully
/// separable (bₙ < p ≤ b₂), 2 genuinely entangled. Binary: 0 iff p ≤ b_k.
/// Fuzzy: the training interval containing p; the gap between them is
/// unlabelled and rejected.
pub fn label_ghz(n: usize, p: f64, task: &GhzTask) -> Result<usize> {
    if n != task.n {
        return Err(Error::InvalidArgument(format!("{n}-qubit state for a {}-qubit task", task.n)));
    }
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidArgument(format!("p = {p} outside [0, 1]")));
    }
    match task.mode {
        GhzMode::ThreeClass => {
            let bn = bound_k_separable(n, n)?.value;
            let b2 = bound_k_separable(n, 2)?.value;
            Ok(if p <= bn {
                0
            } else if p <= b2 {
                1
            } else {
                2
            })
        }
        GhzMode::BinaryK(k) => Ok(usize::from(p > bound_k_separable(n, k)?.value)),
        GhzMode::Fuzzy3Sep(a) => {
            let (sep, nonsep) = fuzzy_intervals(n, a)?;
            if sep.contains(p) {
                Ok(0)
            } else if nonsep.contains(p) {
                Ok(1)
            } else {
                Err(Error::InvalidArgument(format!(
                    "p = {p} lies between the fuzzy intervals"
                )))
            }
        }
    }
}

fn meta(task: &GhzTask, seed: u64) -> DatasetMeta {
    DatasetMeta {
        family: task.family_tag(),
        scheme: task.scheme(),
        seed,
        augmentations: 0,
    }
}

fn ghz_sample(task: &GhzTask, p: f64, class: usize, labeled: bool) -> Result<Sample> {
    let rho = ghz_noisy(task.n, p)?;
    let prov = Provenance::ghz(task.n, p).truth(class);
    let (label, source) = if labeled {
        (Some(class), Source::Labeled)
    } else {
        (None, Source::Unlabeled)
    };
    Sample::from_state(&rho, task.scheme(), label, source, prov)
}

fn draw_in_class<R: Rng + ?Sized>(task: &GhzTask, class: usize, rng: &mut R) -> Result<f64> {
    let region = task.class_region(class)?;
    for _ in 0..MAX_ATTEMPTS_PER_CLASS {
        let p = rng.random_range(region.lo..=region.hi);
        if label_ghz(task.n, p, task).ok() == Some(class) {
            return Ok(p);
        }
    }
    Err(Error::SamplingExhausted(MAX_ATTEMPTS_PER_CLASS))
}

/// Labeled noisy-GHZ states with p uniform on each class region, classes
/// interleaved, so class counts differ by at most one (lower classes first)
/// and are equal when `size` is a multiple of the class count.
pub fn gen_ghz_labeled(task: &GhzTask, size: usize, seed: u64, purpose: Stream) -> Result<Dataset> {
    let c = task.class_count();
    if size < c {
        return Err(Error::InvalidArgument(format!("labeled size {size} < {c} classes")));
    }
    let mut ds = Dataset::new(task.scheme().dim(task.n), c, meta(task, seed));
    for i in 0..size {
        let class = i % c;
        let p = draw_in_class(task, class, &mut rng::stream(seed, purpose, i as u64))?;
        ds.push(ghz_sample(task, p, class, true)?)?;
    }
    Ok(ds)
}

/// Unlabeled noisy-GHZ states with exactly balanced ground truth.
///
/// `u` values of p are drawn uniformly from the task's support ([0, 1], or the
/// union of the fuzzy intervals); each class keeps at most its share. Short
/// classes below the top (most entangled) class are topped up by pairwise
/// convex mixes of their members, which stay inside the class interval; the
/// top class, or a class with fewer than two members, gets fresh draws from
/// its region.
pub fn gen_ghz_unlabeled(task: &GhzTask, u: usize, seed: u64) -> Result<Dataset> {
    let c = task.class_count();
    if u < c {
        return Err(Error::InvalidArgument(format!("unlabeled size {u} < {c} classes")));
    }
    let quota: Vec<usize> = (0..c).map(|k| u / c + usize::from(k < u % c)).collect();
    let mut members: Vec<Vec<f64>> = vec![Vec::new(); c];
    for i in 0..u {
        let mut r = rng::stream(seed, Stream::Unlabeled, i as u64);
        let p = loop {
            let p: f64 = r.random_range(0.0..=1.0);
            if let Ok(class) = label_ghz(task.n, p, task) {
                break (p, class);
            }
        };
        let (p, class) = p;
        if members[class].len() < quota[class] {
            members[class].push(p);
        }
    }
    for class in 0..c {
        let deficit = quota[class] - members[class].len();
        if deficit == 0 {
            continue;
        }
        if class + 1 < c && members[class].len() >= 2 {
            let pool = members[class].clone();
            let mut r = rng::stream(seed, Stream::Mix, class as u64);
            for d in draw_mixes(pool.len(), deficit, &mut r)? {
                members[class].push(d.lambda * pool[d.a] + (1.0 - d.lambda) * pool[d.b]);
            }
        } else {
            for j in 0..deficit {
                let idx = ((class as u64) << 32) | j as u64;
                let p = draw_in_class(task, class, &mut rng::stream(seed, Stream::Separable, idx))?;
                members[class].push(p);
            }
        }
    }
    let mut ds = Dataset::new(task.scheme().dim(task.n), c, meta(task, seed));
    for (class, ps) in members.into_iter().enumerate() {
        for p in ps {
            ds.push(ghz_sample(task, p, class, false)?)?;
        }
    }
    shuffle_samples(&mut ds, seed);
    Ok(ds)
}

/// Labeled and unlabeled training sets for a GHZ task.
pub fn gen_ghz_sets(task: &GhzTask, l: usize, u: usize, seed: u64) -> Result<(Dataset, Dataset)> {
    Ok((
        gen_ghz_labeled(task, l, seed, Stream::Labeled)?,
        gen_ghz_unlabeled(task, u, seed)?,
    ))
}

/// Training sets for fuzzy 3-separability.
pub fn gen_fuzzy_3sep(n: usize, a: f64, l: usize, u: usize, seed: u64) -> Result<(Dataset, Dataset)> {
    let task = GhzTask::new(n, GhzMode::Fuzzy3Sep(a))?;
    gen_ghz_sets(&task, l, u, seed)
}

/// Three-qubit test states made "GHZ class" by one random local-unitary
/// conjugation each; labels come from the underlying p.
pub fn ghz_class_test_set(size: usize, seed: u64) -> Result<Dataset> {
    let task = GhzTask::new(3, GhzMode::ThreeClass)?;
    let plain = gen_ghz_labeled(&task, size, seed, Stream::Test)?;
    conjugate_once(&plain, seed)
}

/// Replaces every state with one randomly locally transformed copy (Haar
/// local unitaries for three qubits, a Pauli string beyond).
pub fn conjugate_once(ds: &Dataset, seed: u64) -> Result<Dataset> {
    let mut out = Dataset::new(ds.feature_dim, ds.class_count, ds.meta.clone());
    for (i, s) in ds.samples.iter().enumerate() {
        let params = s.params.as_ref().ok_or(Error::Unreconstructible(i))?;
        let mut r = rng::stream(seed, Stream::TestAugment, i as u64);
        let (rho, prov) = transform_once(params, i, &mut r)?;
        out.push(Sample {
            features: featurize(&rho, ds.meta.scheme)?,
            label: s.label,
            source: s.source,
            params: Some(prov),
        })?;
    }
    Ok(out)
}
