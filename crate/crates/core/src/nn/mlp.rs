use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use ndarray::{Array1, Array2, ArrayView2, Axis};
use rand_distr::{Distribution, Normal};

use crate::datagen::fmt_f64;
use crate::rng::{self, Stream};
use crate::{Error, Result};

const MAGIC: &str = "mlp-v1";

/// Fully connected ReLU network with a softmax output layer.
///
/// Layer `i` maps `dims[i]` inputs to `dims[i + 1]` outputs as `x W_i + b_i`,
/// with `W_i` stored input-major (`dims[i] × dims[i + 1]`).
#[derive(Debug, Clone, PartialEq)]
pub struct Mlp {
    dims: Vec<usize>,
    pub(crate) w: Vec<Array2<f64>>,
    pub(crate) b: Vec<Array1<f64>>,
}

fn check_dims(dims: &[usize]) -> Result<()> {
    if dims.len() < 2 || dims.contains(&0) {
        return Err(Error::InvalidArgument(format!(
            "network needs at least two non-empty layers, got {dims:?}"
        )));
    }
    Ok(())
}

impl Mlp {
    /// He-normal weights (std √(2/fan_in)) and zero biases.
    pub fn new(dims: &[usize], seed: u64) -> Result<Self> {
        check_dims(dims)?;
        let mut w = Vec::with_capacity(dims.len() - 1);
        let mut b = Vec::with_capacity(dims.len() - 1);
        for (i, pair) in dims.windows(2).enumerate() {
            let (fan_in, fan_out) = (pair[0], pair[1]);
            let normal = Normal::new(0.0, (2.0 / fan_in as f64).sqrt()).expect("positive std");
            let mut r = rng::stream(seed, Stream::Init, i as u64);
            w.push(Array2::from_shape_fn((fan_in, fan_out), |_| normal.sample(&mut r)));
            b.push(Array1::zeros(fan_out));
        }
        Ok(Self {
            dims: dims.to_vec(),
            w,
            b,
        })
    }

    /// All parameters zero; forward() then returns the uniform distribution.
    pub fn zeros(dims: &[usize]) -> Result<Self> {
        check_dims(dims)?;
        Ok(Self {
            dims: dims.to_vec(),
            w: dims.windows(2).map(|p| Array2::zeros((p[0], p[1]))).collect(),
            b: dims[1..].iter().map(|&d| Array1::zeros(d)).collect(),
        })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn input_dim(&self) -> usize {
        self.dims[0]
    }

    pub fn class_count(&self) -> usize {
        *self.dims.last().expect("at least two layers")
    }

    pub fn layer_count(&self) -> usize {
        self.w.len()
    }

    pub fn weights(&self, layer: usize) -> &Array2<f64> {
        &self.w[layer]
    }

    pub fn biases(&self, layer: usize) -> &Array1<f64> {
        &self.b[layer]
    }

    pub fn param_count(&self) -> usize {
        self.dims.windows(2).map(|p| p[0] * p[1] + p[1]).sum()
    }

    /// Parameters in file order: W0, b0, W1, b1, …, each row-major.
    pub fn flat_params(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.param_count());
        for (w, b) in self.w.iter().zip(&self.b) {
            out.extend(w.iter());
            out.extend(b.iter());
        }
        out
    }

    pub fn set_flat_params(&mut self, values: &[f64]) -> Result<()> {
        if values.len() != self.param_count() {
            return Err(Error::Dimension(format!(
                "{} parameters for a network with {}",
                values.len(),
                self.param_count()
            )));
        }
        let mut it = values.iter().copied();
        for (w, b) in self.w.iter_mut().zip(&mut self.b) {
            w.iter_mut().chain(b.iter_mut()).for_each(|p| *p = it.next().expect("counted"));
        }
        Ok(())
    }

    pub fn is_finite(&self) -> bool {
        self.w.iter().all(|w| w.iter().all(|v| v.is_finite()))
            && self.b.iter().all(|b| b.iter().all(|v| v.is_finite()))
    }

    /// Pre-activations and activations of every layer for a batch (rows are
    /// samples). `acts[0]` is the input; the last entry of `pre` holds the
    /// output logits.
    pub(crate) fn trace(&self, x: ArrayView2<f64>) -> (Vec<Array2<f64>>, Vec<Array2<f64>>) {
        let last = self.w.len() - 1;
        let mut pre = Vec::with_capacity(self.w.len());
        let mut acts = vec![x.to_owned()];
        for (i, (w, b)) in self.w.iter().zip(&self.b).enumerate() {
            let z = acts[i].dot(w) + b;
            if i < last {
                acts.push(z.mapv(|v| v.max(0.0)));
            }
            pre.push(z);
        }
        (pre, acts)
    }

    pub fn logits_batch(&self, x: ArrayView2<f64>) -> Result<Array2<f64>> {
        if x.ncols() != self.input_dim() {
            return Err(Error::Dimension(format!(
                "input of width {} for a network expecting {}",
                x.ncols(),
                self.input_dim()
            )));
        }
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("network input".into()));
        }
        let mut h = x.to_owned();
        let last = self.w.len() - 1;
        for (i, (w, b)) in self.w.iter().zip(&self.b).enumerate() {
            h = h.dot(w) + b;
            if i < last {
                h.mapv_inplace(|v| v.max(0.0));
            }
        }
        Ok(h)
    }

    /// Class probabilities, one row per input row.
    pub fn forward_batch(&self, x: ArrayView2<f64>) -> Result<Array2<f64>> {
        let mut z = self.logits_batch(x)?;
        softmax_rows(&mut z);
        Ok(z)
    }

    pub fn forward(&self, x: &[f64]) -> Result<Vec<f64>> {
        let view = ArrayView2::from_shape((1, x.len()), x)
            .map_err(|e| Error::Dimension(e.to_string()))?;
        Ok(self.forward_batch(view)?.into_raw_vec_and_offset().0)
    }

    pub fn encode(&self) -> String {
        let dims: Vec<String> = self.dims.iter().map(ToString::to_string).collect();
        let mut out = format!("{MAGIC} dims={} activation=relu output=softmax\n", dims.join(","));
        let join = |it: &mut dyn Iterator<Item = &f64>| {
            it.map(|&v| fmt_f64(v)).collect::<Vec<_>>().join(",")
        };
        for (i, (w, b)) in self.w.iter().zip(&self.b).enumerate() {
            let _ = writeln!(out, "W{i}={}", join(&mut w.iter()));
            let _ = writeln!(out, "b{i}={}", join(&mut b.iter()));
        }
        out
    }

    pub fn decode(text: &str, path: &Path) -> Result<Self> {
        let err = |line: usize, msg: String| Error::Parse {
            path: path.to_path_buf(),
            line,
            msg,
        };
        if !text.ends_with('\n') {
            return Err(err(text.lines().count().max(1), "truncated file".into()));
        }
        let mut lines = text.lines();
        let header = lines.next().unwrap_or_default();
        let mut tokens = header.split(' ');
        if tokens.next() != Some(MAGIC) {
            return Err(err(1, format!("expected `{MAGIC}` header")));
        }
        let dims: Vec<usize> = tokens
            .next()
            .and_then(|t| t.strip_prefix("dims="))
            .ok_or_else(|| err(1, "missing dims".into()))?
            .split(',')
            .map(|d| d.parse().map_err(|_| err(1, format!("bad dim `{d}`"))))
            .collect::<Result<_>>()?;
        if tokens.next() != Some("activation=relu")
            || tokens.next() != Some("output=softmax")
            || tokens.next().is_some()
        {
            return Err(err(1, "only relu/softmax networks are supported".into()));
        }
        let mut m = Self::zeros(&dims).map_err(|e| err(1, e.to_string()))?;
        for layer in 0..m.w.len() {
            for (is_bias, line) in [(false, 2 + 2 * layer), (true, 3 + 2 * layer)] {
                let key = if is_bias { format!("b{layer}=") } else { format!("W{layer}=") };
                let body = lines
                    .next()
                    .and_then(|l| l.strip_prefix(&key))
                    .ok_or_else(|| err(line, format!("expected `{key}`")))?;
                let values: Vec<f64> = body
                    .split(',')
                    .map(|v| v.parse().map_err(|_| err(line, format!("bad float `{v}`"))))
                    .collect::<Result<_>>()?;
                let target: &mut dyn Iterator<Item = &mut f64> = if is_bias {
                    &mut m.b[layer].iter_mut()
                } else {
                    &mut m.w[layer].iter_mut()
                };
                let expected = if is_bias { dims[layer + 1] } else { dims[layer] * dims[layer + 1] };
                if values.len() != expected {
                    return Err(err(line, format!("{} values, expected {expected}", values.len())));
                }
                target.zip(values).for_each(|(p, v)| *p = v);
            }
        }
        if let Some(extra) = lines.next() {
            let line = 2 + 2 * m.w.len();
            return Err(err(line, format!("unexpected trailing line `{extra:.20}`")));
        }
        if !m.is_finite() {
            return Err(err(1, "non-finite parameters".into()));
        }
        Ok(m)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        fs::write(path, self.encode()).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::decode(&text, path)
    }
}

pub(crate) fn softmax_rows(z: &mut Array2<f64>) {
    for mut row in z.axis_iter_mut(Axis(0)) {
        let max = row.fold(f64::NEG_INFINITY, |a, &b| a.max(b));
        row.mapv_inplace(|v| (v - max).exp());
        let sum = row.sum();
        row.mapv_inplace(|v| v / sum);
    }
}

/// Index of the largest entry, ties to the smallest index.
pub fn argmax(v: &[f64]) -> usize {
    let mut best = 0;
    for (i, &x) in v.iter().enumerate() {
        if x > v[best] {
            best = i;
        }
    }
    best
}
