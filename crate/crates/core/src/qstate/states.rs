//! Named state families.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use super::density::DensityMatrix;
use super::matrix::ComplexMatrix;
use crate::{Error, Result};

pub const MIN_GHZ_QUBITS: usize = 3;
pub const MAX_GHZ_QUBITS: usize = 12;

/// Default mixing angle of the ρ_s family.
pub const RHO_S_THETA: f64 = std::f64::consts::PI / 8.0;

fn check_probability(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("weight p = {p} outside [0, 1]")))
    }
}

/// |Φ+⟩⟨Φ+| with |Φ+⟩ = (|00⟩ + |11⟩)/√2.
pub fn bell_phi_plus() -> DensityMatrix {
    let a = Complex64::new(FRAC_1_SQRT_2, 0.0);
    let z = Complex64::new(0.0, 0.0);
    DensityMatrix::pure(&[a, z, z, a]).expect("normalised Bell state")
}

/// p|Φ+⟩⟨Φ+| + (1 − p) I/4.
pub fn werner(p: f64) -> Result<DensityMatrix> {
    check_probability(p)?;
    bell_phi_plus().mix(&DensityMatrix::maximally_mixed(4)?, p)
}

/// Noisy GHZ state p|GHZₙ⟩⟨GHZₙ| + (1 − p) I / 2ⁿ.
pub fn ghz_noisy(n: usize, p: f64) -> Result<DensityMatrix> {
    if !(MIN_GHZ_QUBITS..=MAX_GHZ_QUBITS).contains(&n) {
        return Err(Error::InvalidArgument(format!(
            "GHZ qubit count {n} outside {MIN_GHZ_QUBITS}..={MAX_GHZ_QUBITS}"
        )));
    }
    check_probability(p)?;
    let dim = 1usize << n;
    let last = dim - 1;
    let noise = (1.0 - p) / dim as f64;
    let mut m = ComplexMatrix::identity(dim).scale(noise);
    let half = Complex64::new(p / 2.0, 0.0);
    m[(0, 0)] += half;
    m[(last, last)] += half;
    m[(0, last)] = half;
    m[(last, 0)] = half;
    DensityMatrix::new(m)
}

/// ρ_s = (1 − p)/2 · I₂ ⊗ ρ_B + p|ψ⟩⟨ψ| with |ψ⟩ = cos θ|00⟩ + sin θ|11⟩ and
/// ρ_B = tr_A |ψ⟩⟨ψ| = diag(cos²θ, sin²θ).
pub fn rho_s(p: f64, theta: f64) -> Result<DensityMatrix> {
    check_probability(p)?;
    if !theta.is_finite() {
        return Err(Error::InvalidArgument(format!("angle {theta}")));
    }
    let (s, c) = theta.sin_cos();
    let z = Complex64::new(0.0, 0.0);
    let psi = [Complex64::new(c, 0.0), z, z, Complex64::new(s, 0.0)];
    let pure = ComplexMatrix::projector(&psi);
    let rho_b = ComplexMatrix::diagonal(&[c * c, s * s]);
    let noise = ComplexMatrix::identity(2).kron(&rho_b).scale((1.0 - p) / 2.0);
    DensityMatrix::from_unnormalized(noise.add(&pure.scale(p))?)
}
