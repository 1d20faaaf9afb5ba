//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use entangle_ssl::datagen::{Dataset, DatasetMeta, Sample, Source};
use entangle_ssl::nn::{loss_and_grad, Batch, Mlp};
use entangle_ssl::qstate::{Complex64, ComplexMatrix, FeatureScheme};
use nalgebra::DMatrix;
use ndarray::Array2;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Eigenvalues of a Hermitian matrix through the real symmetric embedding
/// [[A, −B], [B, A]] of A + iB, solved by nalgebra. Every eigenvalue of the
/// embedding appears twice; one copy of each is returned, ascending.
pub fn oracle_eigenvalues(m: &ComplexMatrix) -> Vec<f64> {
    let n = m.rows();
    let at = |i: usize, j: usize| m.as_slice()[i * n + j];
    let big = DMatrix::from_fn(2 * n, 2 * n, |i, j| {
        let z = at(i % n, j % n);
        match (i < n, j < n) {
            (true, true) | (false, false) => z.re,
            (true, false) => -z.im,
            (false, true) => z.im,
        }
    });
    let mut ev: Vec<f64> = big.symmetric_eigen().eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev.into_iter().step_by(2).collect()
}

pub fn random_hermitian<R: Rng>(n: usize, r: &mut R) -> ComplexMatrix {
    let data: Vec<Complex64> = (0..n * n)
        .map(|_| Complex64::new(r.random_range(-1.0..1.0), r.random_range(-1.0..1.0)))
        .collect();
    let g = ComplexMatrix::from_vec(n, n, data).unwrap();
    g.add(&g.adjoint()).unwrap().scale(0.5)
}

/// Mann–Whitney statistic: (concordant + ½ tied) / (positives · negatives),
/// by enumerating every pair.
pub fn mann_whitney(scores: &[f64], labels: &[bool]) -> f64 {
    let mut num = 0.0;
    let mut pairs = 0.0;
    for (i, &si) in scores.iter().enumerate() {
        if !labels[i] {
            continue;
        }
        for (j, &sj) in scores.iter().enumerate() {
            if labels[j] {
                continue;
            }
            pairs += 1.0;
            if si > sj {
                num += 1.0;
            } else if si == sj {
                num += 0.5;
            }
        }
    }
    num / pairs
}

fn random_batch<R: Rng>(rows: usize, input: usize, classes: usize, r: &mut R) -> (Array2<f64>, Array2<f64>) {
    let x = Array2::from_shape_fn((rows, input), |_| r.random_range(-1.0..1.0));
    let mut y = Array2::zeros((rows, classes));
    for i in 0..rows {
        y[[i, r.random_range(0..classes)]] = 1.0;
    }
    (x, y)
}

/// Largest entrywise relative error between the analytic gradient of
/// `L_s + λ L_u` and central differences with step `h`, for a network with
/// `dims`, 5 labeled and 5 pseudo-labeled random samples. Denominators are
/// floored at `floor` so entries that are zero up to round-off compare on an
/// absolute scale.
///
/// Freshly initialised biases are zero, so a layer whose units are all dead
/// feeds exact zeros into the next ReLU, where the loss has a kink and central
/// differences see half a slope. Parameters are jittered first so the check
/// runs at a differentiable point.
pub fn gradient_check(dims: &[usize], seed: u64, h: f64, floor: f64) -> f64 {
    let mut r = rng(seed);
    let mut m = Mlp::new(dims, seed).unwrap();
    let jittered: Vec<f64> = m.flat_params().iter().map(|v| v + r.random_range(-0.05..0.05)).collect();
    m.set_flat_params(&jittered).unwrap();
    let input = dims[0];
    let classes = *dims.last().unwrap();
    let (xl, yl) = random_batch(5, input, classes, &mut r);
    let (xp, yp) = random_batch(5, input, classes, &mut r);
    let lambda = r.random_range(0.05..1.0);
    let lab = Batch { x: xl.view(), y: yl.view() };
    let pse = Batch { x: xp.view(), y: yp.view() };
    let (_, g) = loss_and_grad(&m, lab, pse, lambda).unwrap();
    let analytic = g.flatten();
    let base = m.flat_params();
    let mut worst: f64 = 0.0;
    for i in 0..base.len() {
        let mut p = base.clone();
        p[i] = base[i] + h;
        m.set_flat_params(&p).unwrap();
        let up = loss_and_grad(&m, lab, pse, lambda).unwrap().0.total;
        p[i] = base[i] - h;
        m.set_flat_params(&p).unwrap();
        let down = loss_and_grad(&m, lab, pse, lambda).unwrap().0.total;
        let numeric = (up - down) / (2.0 * h);
        let denom = analytic[i].abs().max(numeric.abs()).max(floor);
        worst = worst.max((analytic[i] - numeric).abs() / denom);
    }
    m.set_flat_params(&base).unwrap();
    worst
}

/// Two well-separated Gaussian blobs in `dim` dimensions, alternating labels.
pub fn blobs(n: usize, dim: usize, seed: u64) -> Dataset {
    let mut r = rng(seed);
    let normal = rand_distr::Normal::new(0.0, 0.5).unwrap();
    let meta = DatasetMeta {
        family: "blobs".into(),
        scheme: FeatureScheme::Full,
        seed,
        augmentations: 0,
    };
    let mut ds = Dataset::new(dim, 2, meta);
    for i in 0..n {
        let class = i % 2;
        let centre = if class == 0 { -2.0 } else { 2.0 };
        let features = (0..dim).map(|_| centre + r.sample(normal)).collect();
        ds.push(Sample {
            features,
            label: Some(class),
            source: Source::Labeled,
            params: None,
        })
        .unwrap();
    }
    ds
}
