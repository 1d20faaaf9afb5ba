use ndarray::{concatenate, Array1, Array2, ArrayView2, Axis};
use serde::{Deserialize, Serialize};

use super::mlp::{softmax_rows, Mlp};
use crate::{Error, Result};

/// Lower clamp applied to predicted probabilities inside the logarithm.
pub const PROB_CLAMP: f64 = 1e-12;

/// `−Σ_c t_c ln(max(q_c, 1e-12))`.
pub fn cross_entropy(target: &[f64], predicted: &[f64]) -> f64 {
    -target
        .iter()
        .zip(predicted)
        .filter(|(&t, _)| t != 0.0)
        .map(|(&t, &q)| t * q.clamp(PROB_CLAMP, 1.0).ln())
        .sum::<f64>()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LossReport {
    pub total: f64,
    pub supervised: f64,
    pub unsupervised: f64,
    pub lambda_u: f64,
}

/// Inputs with their target distributions, one row per sample.
#[derive(Debug, Clone, Copy)]
pub struct Batch<'a> {
    pub x: ArrayView2<'a, f64>,
    pub y: ArrayView2<'a, f64>,
}

impl Batch<'_> {
    pub fn len(&self) -> usize {
        self.x.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.x.nrows() == 0
    }
}

/// Parameter-shaped gradient (or moment) buffers.
#[derive(Debug, Clone, PartialEq)]
pub struct Gradients {
    pub w: Vec<Array2<f64>>,
    pub b: Vec<Array1<f64>>,
}

impl Gradients {
    pub fn zeros_like(m: &Mlp) -> Self {
        Self {
            w: m.w.iter().map(|w| Array2::zeros(w.raw_dim())).collect(),
            b: m.b.iter().map(|b| Array1::zeros(b.raw_dim())).collect(),
        }
    }

    /// Same order as [`Mlp::flat_params`].
    pub fn flatten(&self) -> Vec<f64> {
        let mut out = Vec::new();
        for (w, b) in self.w.iter().zip(&self.b) {
            out.extend(w.iter());
            out.extend(b.iter());
        }
        out
    }

    pub fn is_finite(&self) -> bool {
        self.w.iter().all(|w| w.iter().all(|v| v.is_finite()))
            && self.b.iter().all(|b| b.iter().all(|v| v.is_finite()))
    }
}

/// Per-row cross-entropies and the gradient of `Σ_r weight_r · CE_r`.
fn weighted_backprop(
    m: &Mlp,
    x: ArrayView2<f64>,
    y: ArrayView2<f64>,
    row_weight: &[f64],
) -> (Vec<f64>, Gradients) {
    let (pre, acts) = m.trace(x);
    let last = pre.len() - 1;
    let mut probs = pre[last].clone();
    softmax_rows(&mut probs);

    let mut ce = Vec::with_capacity(x.nrows());
    let mut dz = Array2::zeros(probs.raw_dim());
    for (r, ((p, t), mut d)) in probs
        .axis_iter(Axis(0))
        .zip(y.axis_iter(Axis(0)))
        .zip(dz.axis_iter_mut(Axis(0)))
        .enumerate()
    {
        let p = p.as_slice().expect("row-major");
        let t = t.to_vec();
        ce.push(cross_entropy(&t, p));
        // d/dz_j of −Σ_c t_c ln p_c is Σ_c t_c (p_j − δ_cj), restricted to
        // classes whose probability is not clamped.
        let mut mass = 0.0;
        for (c, (&tc, &pc)) in t.iter().zip(p).enumerate() {
            if tc != 0.0 && pc >= PROB_CLAMP {
                mass += tc;
                d[c] -= tc;
            }
        }
        for (dj, &pj) in d.iter_mut().zip(p) {
            *dj = row_weight[r] * (*dj + mass * pj);
        }
    }

    let mut g = Gradients::zeros_like(m);
    for i in (0..=last).rev() {
        g.w[i] = acts[i].t().dot(&dz);
        g.b[i] = dz.sum_axis(Axis(0));
        if i > 0 {
            let mut da = dz.dot(&m.w[i].t());
            da.zip_mut_with(&pre[i - 1], |d, &z| {
                if z <= 0.0 {
                    *d = 0.0;
                }
            });
            dz = da;
        }
    }
    (ce, g)
}

/// Loss `L = L_s + λ_u L_u` with both terms averaged over their own batch,
/// and its exact gradient. An empty batch contributes zero.
pub fn loss_and_grad<'a>(
    m: &Mlp,
    labeled: Batch<'a>,
    pseudo: Batch<'a>,
    lambda_u: f64,
) -> Result<(LossReport, Gradients)> {
    for b in [&labeled, &pseudo] {
        if b.x.nrows() != b.y.nrows() || b.y.ncols() != m.class_count() {
            return Err(Error::Dimension(format!(
                "batch {}x{} with targets {}x{} for {} classes",
                b.x.nrows(),
                b.x.ncols(),
                b.y.nrows(),
                b.y.ncols(),
                m.class_count()
            )));
        }
        if b.x.ncols() != m.input_dim() {
            return Err(Error::Dimension(format!(
                "batch width {} for input dim {}",
                b.x.ncols(),
                m.input_dim()
            )));
        }
    }
    let (nl, np) = (labeled.len(), pseudo.len());
    if nl + np == 0 {
        return Ok((
            LossReport {
                total: 0.0,
                supervised: 0.0,
                unsupervised: 0.0,
                lambda_u,
            },
            Gradients::zeros_like(m),
        ));
    }
    let mut weights = vec![1.0 / nl.max(1) as f64; nl];
    weights.extend(std::iter::repeat_n(lambda_u / np.max(1) as f64, np));
    let (ce, g) = if np == 0 {
        weighted_backprop(m, labeled.x, labeled.y, &weights)
    } else if nl == 0 {
        weighted_backprop(m, pseudo.x, pseudo.y, &weights)
    } else {
        let x = concatenate(Axis(0), &[labeled.x, pseudo.x]).expect("same width");
        let y = concatenate(Axis(0), &[labeled.y, pseudo.y]).expect("same width");
        weighted_backprop(m, x.view(), y.view(), &weights)
    };
    let mean = |v: &[f64]| if v.is_empty() { 0.0 } else { v.iter().sum::<f64>() / v.len() as f64 };
    let supervised = mean(&ce[..nl]);
    let unsupervised = mean(&ce[nl..]);
    let report = LossReport {
        total: supervised + lambda_u * unsupervised,
        supervised,
        unsupervised,
        lambda_u,
    };
    if !report.total.is_finite() {
        return Err(Error::NonFinite("training loss".into()));
    }
    Ok((report, g))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cross_entropy_values() {
        assert_eq!(cross_entropy(&[1.0, 0.0], &[1.0, 0.0]), 0.0);
        assert!((cross_entropy(&[1.0, 0.0], &[0.5, 0.5]) - std::f64::consts::LN_2).abs() < 1e-15);
        assert!((cross_entropy(&[0.0, 1.0], &[0.9, 0.1]) - 10f64.ln()).abs() < 1e-12);
        assert!((cross_entropy(&[1.0, 0.0], &[0.0, 1.0]) - 1e12f64.ln()).abs() < 1e-9);
    }

    #[test]
    fn lambda_zero_gives_supervised_loss() {
        let m = Mlp::new(&[3, 5, 2], 1).unwrap();
        let x = Array2::from_shape_fn((4, 3), |(i, j)| (i as f64 - j as f64) * 0.3);
        let y = Array2::from_shape_fn((4, 2), |(i, j)| f64::from(u8::from(i % 2 == j)));
        let lab = Batch { x: x.view(), y: y.view() };
        let empty_x = Array2::zeros((0, 3));
        let empty_y = Array2::zeros((0, 2));
        let empty = Batch { x: empty_x.view(), y: empty_y.view() };
        let (r0, g0) = loss_and_grad(&m, lab, lab, 0.0).unwrap();
        let (r1, g1) = loss_and_grad(&m, lab, empty, 0.7).unwrap();
        assert_eq!(r0.total, r0.supervised);
        assert_eq!(r1.unsupervised, 0.0);
        assert_eq!(r0.supervised, r1.supervised);
        for (a, b) in g0.flatten().iter().zip(g1.flatten()) {
            assert!((a - b).abs() < 1e-15);
        }
    }
}
