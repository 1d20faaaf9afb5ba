//! White-noise thresholds of the noisy GHZ family: ρ_ng(p) is k-separable iff
//! p ≤ b_k.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BoundKind {
    Formula,
    ReferenceTable,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeparabilityBound {
    pub n: usize,
    pub k: usize,
    pub kind: BoundKind,
    pub value: f64,
}

/// 3-separability thresholds without a closed form, obtained by linear
/// programming.
const REFERENCE_TABLE: &[(usize, usize, f64)] = &[(6, 3, 0.2195), (7, 3, 0.2147)];

/// b₂ = (2^{n−1} − 1)/(2ⁿ − 1).
pub fn biseparable_bound(n: usize) -> f64 {
    let h = 2f64.powi(n as i32 - 1);
    (h - 1.0) / (2.0 * h - 1.0)
}

/// bₙ = 1/(1 + 2^{n−1}).
pub fn fully_separable_bound(n: usize) -> f64 {
    1.0 / (1.0 + 2f64.powi(n as i32 - 1))
}

/// b_k = 1/(1 + (2k − n)/n · 2^{n−1}), valid for k ≥ (n+1)/2.
pub fn general_bound(n: usize, k: usize) -> Option<f64> {
    if n == 0 || k > n || 2 * k < n + 1 {
        return None;
    }
    let ratio = (2 * k - n) as f64 / n as f64;
    Some(1.0 / (1.0 + ratio * 2f64.powi(n as i32 - 1)))
}

/// Exact threshold for `n`-qubit noisy GHZ k-separability.
pub fn bound_k_separable(n: usize, k: usize) -> Result<SeparabilityBound> {
    let formula = |value| SeparabilityBound {
        n,
        k,
        kind: BoundKind::Formula,
        value,
    };
    if n < 2 || k < 2 || k > n {
        return Err(Error::NoAnalyticBound { n, k });
    }
    if k == 2 {
        return Ok(formula(biseparable_bound(n)));
    }
    if let Some(v) = general_bound(n, k) {
        return Ok(formula(v));
    }
    REFERENCE_TABLE
        .iter()
        .find(|&&(tn, tk, _)| tn == n && tk == k)
        .map(|&(_, _, value)| SeparabilityBound {
            n,
            k,
            kind: BoundKind::ReferenceTable,
            value,
        })
        .ok_or(Error::NoAnalyticBound { n, k })
}
