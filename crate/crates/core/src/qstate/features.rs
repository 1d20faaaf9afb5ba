//! Feature maps from states to real vectors of expectation values.

use std::f64::consts::FRAC_1_SQRT_2;

use serde::{Deserialize, Serialize};

use super::density::DensityMatrix;
use super::matrix::{pauli, ComplexMatrix};
use super::ops::PauliString;
use crate::{Error, Result};

const IMAG_TOL: f64 = 1e-10;

/// Which expectation values make up a feature vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FeatureScheme {
    /// Every Pauli-string expectation (4ⁿ values, two or three qubits).
    Full,
    /// ⟨σᵢ ⊗ σⱼ⟩ for i, j ∈ {1,2,3}.
    F1,
    /// ⟨σᵢ ⊗ Bⱼ⟩ with B₁,₂ = (σ₁ ± σ₃)/√2.
    F2,
    /// (⟨σₓ^⊗n⟩, ⟨|0…0⟩⟨0…0| + |1…1⟩⟨1…1|⟩).
    Ghz,
}

impl FeatureScheme {
    /// Feature-vector length for an `n`-qubit state.
    pub fn dim(self, nqubits: usize) -> usize {
        match self {
            FeatureScheme::Full => 1 << (2 * nqubits),
            FeatureScheme::F1 => 9,
            FeatureScheme::F2 => 6,
            FeatureScheme::Ghz => 2,
        }
    }

    pub fn tag(self) -> &'static str {
        match self {
            FeatureScheme::Full => "F",
            FeatureScheme::F1 => "F1",
            FeatureScheme::F2 => "F2",
            FeatureScheme::Ghz => "Mxz",
        }
    }

    pub fn from_tag(tag: &str) -> Option<Self> {
        match tag {
            "F" => Some(FeatureScheme::Full),
            "F1" => Some(FeatureScheme::F1),
            "F2" => Some(FeatureScheme::F2),
            "Mxz" => Some(FeatureScheme::Ghz),
            _ => None,
        }
    }
}

/// A Hermitian operator whose expectation values are real.
#[derive(Debug, Clone, PartialEq)]
pub struct Observable {
    matrix: ComplexMatrix,
}

impl Observable {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        let dev = matrix.hermitian_deviation();
        if dev > 1e-12 {
            return Err(Error::NotHermitian(dev));
        }
        Ok(Self { matrix })
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn expectation(&self, rho: &DensityMatrix) -> Result<f64> {
        real(self.matrix.trace_product(rho.matrix())?)
    }
}

fn real(z: num_complex::Complex64) -> Result<f64> {
    if z.im.abs() > IMAG_TOL {
        return Err(Error::ComplexExpectation(z.im));
    }
    Ok(z.re)
}

fn expect_qubits(rho: &DensityMatrix, n: usize) -> Result<()> {
    if rho.dim() != 1 << n {
        return Err(Error::Dimension(format!(
            "expected a {n}-qubit state, got dim {}",
            rho.dim()
        )));
    }
    Ok(())
}

/// All ⟨σ_{i1} ⊗ … ⊗ σ_{in}⟩ in lexicographic order, identity first.
pub fn features_pauli_full(rho: &DensityMatrix, n: usize) -> Result<Vec<f64>> {
    if !(2..=3).contains(&n) {
        return Err(Error::InvalidArgument(format!(
            "full Pauli features are defined for 2 or 3 qubits, got {n}"
        )));
    }
    expect_qubits(rho, n)?;
    let count = 1usize << (2 * n);
    (0..count)
        .map(|idx| {
            let word: Vec<u8> = (0..n)
                .map(|q| ((idx >> (2 * (n - 1 - q))) & 3) as u8)
                .collect();
            real(PauliString::new(word)?.expectation(rho.matrix())?)
        })
        .collect()
}

fn two_qubit_observable(a: &ComplexMatrix, b: &ComplexMatrix) -> Observable {
    Observable::new(a.kron(b)).expect("product of Hermitian factors")
}

/// Partial two-qubit correlations, F1 (9 values) or F2 (6 values), in
/// row-major (i, j) order.
pub fn features_partial(rho: &DensityMatrix, scheme: FeatureScheme) -> Result<Vec<f64>> {
    expect_qubits(rho, 2)?;
    match scheme {
        FeatureScheme::F1 => {
            let mut out = Vec::with_capacity(9);
            for i in 1..=3u8 {
                for j in 1..=3u8 {
                    out.push(real(PauliString::new(vec![i, j])?.expectation(rho.matrix())?)?);
                }
            }
            Ok(out)
        }
        FeatureScheme::F2 => {
            let b1 = pauli(1).add(&pauli(3))?.scale(FRAC_1_SQRT_2);
            let b2 = pauli(1).sub(&pauli(3))?.scale(FRAC_1_SQRT_2);
            let mut out = Vec::with_capacity(6);
            for i in 1..=3u8 {
                let a = pauli(i);
                for b in [&b1, &b2] {
                    out.push(two_qubit_observable(&a, b).expectation(rho)?);
                }
            }
            Ok(out)
        }
        other => Err(Error::InvalidArgument(format!(
            "{other:?} is not a partial two-qubit scheme"
        ))),
    }
}

/// (⟨Mₓ⟩, ⟨M_z⟩) with Mₓ = σₓ^⊗n and M_z = |0…0⟩⟨0…0| + |1…1⟩⟨1…1|.
pub fn features_ghz(rho: &DensityMatrix, n: usize) -> Result<Vec<f64>> {
    if n < 1 {
        return Err(Error::InvalidArgument("zero qubits".into()));
    }
    expect_qubits(rho, n)?;
    let mx = real(PauliString::new(vec![1; n])?.expectation(rho.matrix())?)?;
    let last = rho.dim() - 1;
    let mz = real(rho.matrix()[(0, 0)] + rho.matrix()[(last, last)])?;
    Ok(vec![mx, mz])
}

/// Dispatches to the feature map named by `scheme`.
pub fn featurize(rho: &DensityMatrix, scheme: FeatureScheme) -> Result<Vec<f64>> {
    let n = rho.nqubits();
    match scheme {
        FeatureScheme::Full => features_pauli_full(rho, n),
        FeatureScheme::F1 | FeatureScheme::F2 => features_partial(rho, scheme),
        FeatureScheme::Ghz => features_ghz(rho, n),
    }
}
