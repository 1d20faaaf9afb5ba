use num_complex::Complex64;

use super::eigen::hermitian_eigenvalues;
use super::matrix::ComplexMatrix;
use crate::{Error, Result};

pub const HERMITIAN_TOL: f64 = 1e-12;
pub const TRACE_TOL: f64 = 1e-12;
pub const PSD_TOL: f64 = -1e-10;

/// Largest dimension for which construction runs an eigenvalue PSD check in
/// debug builds.
#[cfg(debug_assertions)]
const DEBUG_PSD_MAX_DIM: usize = 64;

/// A quantum state ρ: Hermitian, positive semidefinite, unit trace.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
    nqubits: usize,
}

impl DensityMatrix {
    /// Wraps `matrix` after checking shape, Hermiticity, unit trace and
    /// finiteness. Positivity is only asserted in debug builds.
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if !matrix.is_square() || matrix.rows() < 2 {
            return Err(Error::InvalidState(format!(
                "{}x{} is not a valid state shape",
                matrix.rows(),
                matrix.cols()
            )));
        }
        if !matrix.is_finite() {
            return Err(Error::NonFinite("density matrix".into()));
        }
        let dev = matrix.hermitian_deviation();
        if dev > HERMITIAN_TOL {
            return Err(Error::NotHermitian(dev));
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(Error::InvalidState(format!("trace {tr}")));
        }
        let dim = matrix.rows();
        let nqubits = if dim.is_power_of_two() {
            dim.trailing_zeros() as usize
        } else {
            0
        };
        let rho = Self { matrix, nqubits };
        #[cfg(debug_assertions)]
        if dim <= DEBUG_PSD_MAX_DIM {
            let min = rho.min_eigenvalue();
            debug_assert!(min >= PSD_TOL, "density matrix has eigenvalue {min}");
        }
        Ok(rho)
    }

    /// Normalises a Hermitian PSD matrix by its trace.
    pub fn from_unnormalized(matrix: ComplexMatrix) -> Result<Self> {
        let tr = matrix.trace().re;
        if !(tr > 0.0) {
            return Err(Error::InvalidState(format!("trace {tr} is not positive")));
        }
        let mut m = matrix.scale(1.0 / tr);
        // clean round-off so the invariants hold exactly where they can
        let n = m.rows();
        for r in 0..n {
            m[(r, r)].im = 0.0;
            for c in r + 1..n {
                let avg = (m[(r, c)] + m[(c, r)].conj()) * 0.5;
                m[(r, c)] = avg;
                m[(c, r)] = avg.conj();
            }
        }
        Self::new(m)
    }

    /// |ψ⟩⟨ψ| for a (not necessarily normalised) vector.
    pub fn pure(psi: &[Complex64]) -> Result<Self> {
        Self::from_unnormalized(ComplexMatrix::projector(psi))
    }

    pub fn maximally_mixed(dim: usize) -> Result<Self> {
        Self::new(ComplexMatrix::identity(dim).scale(1.0 / dim as f64))
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    /// Qubit count, or 0 when the dimension is not a power of two.
    #[inline]
    pub fn nqubits(&self) -> usize {
        self.nqubits
    }

    #[inline]
    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigenvalues(&self.matrix).expect("density matrices are Hermitian")
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues()[0]
    }

    pub fn purity(&self) -> f64 {
        self.matrix
            .trace_product(&self.matrix)
            .expect("square")
            .re
    }

    /// `weight·self + (1 − weight)·other`.
    pub fn mix(&self, other: &Self, weight: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&weight) {
            return Err(Error::InvalidArgument(format!("mixing weight {weight}")));
        }
        let m = self
            .matrix
            .scale(weight)
            .add(&other.matrix.scale(1.0 - weight))?;
        Self::from_unnormalized(m)
    }

    /// Convex combination with nonnegative weights summing to one.
    pub fn convex_combination(states: &[&Self], weights: &[f64]) -> Result<Self> {
        if states.is_empty() || states.len() != weights.len() {
            return Err(Error::InvalidArgument(
                "convex combination needs one weight per state".into(),
            ));
        }
        if weights.iter().any(|&w| !(w >= 0.0)) {
            return Err(Error::InvalidArgument("negative mixing weight".into()));
        }
        let dim = states[0].dim();
        let mut acc = ComplexMatrix::zeros(dim, dim);
        for (s, &w) in states.iter().zip(weights) {
            acc = acc.add(&s.matrix.scale(w))?;
        }
        Self::from_unnormalized(acc)
    }

    /// Full invariant check including positivity, for tests and audits.
    pub fn validate(&self) -> Result<()> {
        let dev = self.matrix.hermitian_deviation();
        if dev > HERMITIAN_TOL {
            return Err(Error::NotHermitian(dev));
        }
        let tr = self.matrix.trace();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(Error::InvalidState(format!("trace {tr}")));
        }
        let min = self.min_eigenvalue();
        if min < PSD_TOL {
            return Err(Error::InvalidState(format!("eigenvalue {min}")));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_trace() {
        assert!(DensityMatrix::new(ComplexMatrix::identity(2)).is_err());
    }

    #[test]
    fn rejects_non_hermitian() {
        let mut m = ComplexMatrix::identity(2).scale(0.5);
        m[(0, 1)] = Complex64::new(0.1, 0.0);
        assert!(matches!(DensityMatrix::new(m), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn maximally_mixed_is_valid() {
        let rho = DensityMatrix::maximally_mixed(4).unwrap();
        rho.validate().unwrap();
        assert_eq!(rho.nqubits(), 2);
        assert!((rho.purity() - 0.25).abs() < 1e-15);
    }

    #[test]
    fn convex_combination_of_states_is_a_state() {
        let a = DensityMatrix::pure(&[Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0)]).unwrap();
        let b = DensityMatrix::maximally_mixed(2).unwrap();
        let c = DensityMatrix::convex_combination(&[&a, &b], &[0.3, 0.7]).unwrap();
        c.validate().unwrap();
        assert!(DensityMatrix::convex_combination(&[&a, &b], &[-0.3, 1.3]).is_err());
    }
}
