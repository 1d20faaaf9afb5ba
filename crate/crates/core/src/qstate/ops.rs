//! Local operations on states: local-unitary conjugation, partial transpose,
//! Pauli-string conjugation and the PPT verdict.

use num_complex::Complex64;

use super::density::DensityMatrix;
use super::eigen::hermitian_eigenvalues;
use super::matrix::{ComplexMatrix, ZERO};
use crate::{Error, Result};

/// Minimum partial-transpose eigenvalue below which a two-qubit state is
/// labelled entangled.
pub const PPT_TOL: f64 = -1e-9;

const UNITARY_TOL: f64 = 1e-10;

/// (V₁ ⊗ … ⊗ Vₙ) ρ (V₁ ⊗ … ⊗ Vₙ)†.
pub fn local_unitary_conjugate(
    rho: &DensityMatrix,
    locals: &[ComplexMatrix],
    dims: &[usize],
) -> Result<DensityMatrix> {
    if locals.is_empty() || locals.len() != dims.len() {
        return Err(Error::Dimension(format!(
            "{} local operators for {} subsystems",
            locals.len(),
            dims.len()
        )));
    }
    let total: usize = dims.iter().product();
    if total != rho.dim() {
        return Err(Error::Dimension(format!(
            "subsystem dims {dims:?} do not multiply to {}",
            rho.dim()
        )));
    }
    for (u, &d) in locals.iter().zip(dims) {
        if u.rows() != d || u.cols() != d {
            return Err(Error::Dimension(format!(
                "local operator {}x{} on a subsystem of dim {d}",
                u.rows(),
                u.cols()
            )));
        }
        let dev = u
            .matmul(&u.adjoint())?
            .max_abs_diff(&ComplexMatrix::identity(d));
        if dev > UNITARY_TOL {
            return Err(Error::InvalidArgument(format!(
                "local operator is not unitary (deviation {dev:e})"
            )));
        }
    }
    let v = locals[1..]
        .iter()
        .fold(locals[0].clone(), |acc, u| acc.kron(u));
    let out = v.matmul(rho.matrix())?.matmul(&v.adjoint())?;
    DensityMatrix::from_unnormalized(out)
}

/// Partial transpose on the second factor of a `dim_a × dim_b` system:
/// entry ((a,b),(a′,b′)) becomes ((a,b′),(a′,b)).
pub fn partial_transpose(m: &ComplexMatrix, dim_a: usize, dim_b: usize) -> Result<ComplexMatrix> {
    let dim = dim_a * dim_b;
    if m.rows() != dim || m.cols() != dim {
        return Err(Error::Dimension(format!(
            "partial transpose {dim_a}x{dim_b} of a {}x{} matrix",
            m.rows(),
            m.cols()
        )));
    }
    Ok(ComplexMatrix::from_fn(dim, dim, |r, c| {
        let (a, b) = (r / dim_b, r % dim_b);
        let (a2, b2) = (c / dim_b, c % dim_b);
        m[(a * dim_b + b2, a2 * dim_b + b)]
    }))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Separability {
    Separable,
    Entangled,
}

impl Separability {
    /// Class index with separable = 0 and entangled = 1.
    pub fn class(self) -> usize {
        match self {
            Separability::Separable => 0,
            Separability::Entangled => 1,
        }
    }
}

/// Smallest eigenvalue of the two-qubit partial transpose.
pub fn min_pt_eigenvalue(rho: &DensityMatrix) -> Result<f64> {
    if rho.dim() != 4 {
        return Err(Error::Dimension(format!(
            "PPT labelling needs a two-qubit state, got dim {}",
            rho.dim()
        )));
    }
    let pt = partial_transpose(rho.matrix(), 2, 2)?;
    Ok(hermitian_eigenvalues(&pt)?[0])
}

/// Peres–Horodecki verdict, exact for two qubits.
pub fn is_ppt_entangled(rho: &DensityMatrix) -> Result<Separability> {
    Ok(if min_pt_eigenvalue(rho)? < PPT_TOL {
        Separability::Entangled
    } else {
        Separability::Separable
    })
}

/// A tensor product of Pauli matrices, one index in 0..4 per qubit with
/// qubit 0 the most significant bit of the basis index.
///
/// A Pauli string is a monomial matrix: `P|i⟩ = phase(i) |i ⊕ flip⟩`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PauliString(Vec<u8>);

impl PauliString {
    pub fn new(indices: Vec<u8>) -> Result<Self> {
        if indices.is_empty() || indices.iter().any(|&w| w > 3) {
            return Err(Error::InvalidArgument(format!(
                "pauli string {indices:?}"
            )));
        }
        Ok(Self(indices))
    }

    pub fn indices(&self) -> &[u8] {
        &self.0
    }

    pub fn nqubits(&self) -> usize {
        self.0.len()
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }

    /// Bit mask of the qubits carrying X or Y.
    pub fn flip_mask(&self) -> usize {
        let n = self.0.len();
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &w)| w == 1 || w == 2)
            .fold(0, |m, (q, _)| m | 1 << (n - 1 - q))
    }

    /// Phase picked up by basis state `i`.
    pub fn phase(&self, i: usize) -> Complex64 {
        let n = self.0.len();
        let mut ph = Complex64::new(1.0, 0.0);
        for (q, &w) in self.0.iter().enumerate() {
            let bit = (i >> (n - 1 - q)) & 1;
            match (w, bit) {
                (2, 0) => ph *= Complex64::new(0.0, 1.0),
                (2, _) => ph *= Complex64::new(0.0, -1.0),
                (3, 1) => ph = -ph,
                _ => {}
            }
        }
        ph
    }

    /// Dense matrix; intended for tests and small systems.
    pub fn to_matrix(&self) -> ComplexMatrix {
        let dim = 1 << self.0.len();
        let flip = self.flip_mask();
        let mut m = ComplexMatrix::zeros(dim, dim);
        for i in 0..dim {
            m[(i ^ flip, i)] = self.phase(i);
        }
        m
    }

    /// tr(P ρ) = Σᵢ phase(i) ρ[i, i ⊕ flip].
    pub fn expectation(&self, m: &ComplexMatrix) -> Result<Complex64> {
        let dim = 1usize << self.0.len();
        if m.rows() != dim || m.cols() != dim {
            return Err(Error::Dimension(format!(
                "{}-qubit Pauli string on a {}x{} matrix",
                self.0.len(),
                m.rows(),
                m.cols()
            )));
        }
        let flip = self.flip_mask();
        Ok((0..dim).map(|i| self.phase(i) * m[(i, i ^ flip)]).sum())
    }

    /// P ρ P†, computed in O(dim²) from the monomial structure.
    pub fn conjugate(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        let dim = rho.dim();
        if dim != 1 << self.0.len() {
            return Err(Error::Dimension(format!(
                "{}-qubit Pauli string on dim {dim}",
                self.0.len()
            )));
        }
        let flip = self.flip_mask();
        let phases: Vec<Complex64> = (0..dim).map(|i| self.phase(i)).collect();
        let src = rho.matrix();
        let mut out = ComplexMatrix::zeros(dim, dim);
        for i in 0..dim {
            for j in 0..dim {
                let v = src[(i, j)];
                if v != ZERO {
                    out[(i ^ flip, j ^ flip)] = phases[i] * v * phases[j].conj();
                }
            }
        }
        DensityMatrix::new(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qstate::matrix::pauli;
    use crate::qstate::states::{bell_phi_plus, werner};

    #[test]
    fn identity_locals_leave_state_unchanged() {
        let rho = werner(0.4).unwrap();
        let id = ComplexMatrix::identity(2);
        let out = local_unitary_conjugate(&rho, &[id.clone(), id], &[2, 2]).unwrap();
        assert!(out.matrix().max_abs_diff(rho.matrix()) <= 1e-14);
    }

    #[test]
    fn x_on_first_qubit_maps_phi_plus_to_psi_plus() {
        let rho = bell_phi_plus();
        let out = local_unitary_conjugate(&rho, &[pauli(1), ComplexMatrix::identity(2)], &[2, 2]).unwrap();
        // |Ψ+⟩⟨Ψ+| with |Ψ+⟩ = (|01⟩ + |10⟩)/√2 has 1/2 on the {01,10} block
        let mut want = ComplexMatrix::zeros(4, 4);
        for &(r, c) in &[(1, 1), (1, 2), (2, 1), (2, 2)] {
            want[(r, c)] = Complex64::new(0.5, 0.0);
        }
        assert!(out.matrix().max_abs_diff(&want) <= 1e-15);
    }

    #[test]
    fn conjugation_rejects_mismatched_dims() {
        let rho = bell_phi_plus();
        let id = ComplexMatrix::identity(2);
        assert!(local_unitary_conjugate(&rho, &[id.clone()], &[2]).is_err());
        assert!(local_unitary_conjugate(&rho, &[id.clone(), id.clone()], &[2, 3]).is_err());
        assert!(local_unitary_conjugate(&rho, &[id.clone(), ComplexMatrix::identity(3)], &[2, 2]).is_err());
    }

    #[test]
    fn partial_transpose_of_diagonal_is_identity_map() {
        let d = ComplexMatrix::diagonal(&[0.1, 0.2, 0.3, 0.4]);
        assert_eq!(partial_transpose(&d, 2, 2).unwrap(), d);
    }

    #[test]
    fn partial_transpose_is_an_involution() {
        let rho = crate::qstate::random::random_ginibre_density(6, &mut crate::rng::from_seed(3)).unwrap();
        let twice = partial_transpose(&partial_transpose(rho.matrix(), 2, 3).unwrap(), 2, 3).unwrap();
        assert!(twice.max_abs_diff(rho.matrix()) <= 1e-14);
        assert!(partial_transpose(rho.matrix(), 2, 2).is_err());
    }

    #[test]
    fn phi_plus_partial_transpose_spectrum() {
        let pt = partial_transpose(bell_phi_plus().matrix(), 2, 2).unwrap();
        let ev = hermitian_eigenvalues(&pt).unwrap();
        for (g, w) in ev.iter().zip([-0.5, 0.5, 0.5, 0.5]) {
            assert!((g - w).abs() < 1e-12);
        }
    }

    #[test]
    fn ppt_verdicts() {
        let mixed = DensityMatrix::maximally_mixed(4).unwrap();
        assert_eq!(is_ppt_entangled(&mixed).unwrap(), Separability::Separable);
        assert_eq!(is_ppt_entangled(&bell_phi_plus()).unwrap(), Separability::Entangled);
        assert_eq!(is_ppt_entangled(&werner(0.30).unwrap()).unwrap(), Separability::Separable);
        assert_eq!(is_ppt_entangled(&werner(0.35).unwrap()).unwrap(), Separability::Entangled);
        assert!(is_ppt_entangled(&DensityMatrix::maximally_mixed(8).unwrap()).is_err());
    }

    #[test]
    fn pauli_string_matrix_matches_kron() {
        for w in [[0u8, 1, 2], [3, 2, 1], [2, 2, 3]] {
            let s = PauliString::new(w.to_vec()).unwrap();
            let kron = pauli(w[0]).kron(&pauli(w[1])).kron(&pauli(w[2]));
            assert!(s.to_matrix().max_abs_diff(&kron) < 1e-15);
        }
    }

    #[test]
    fn pauli_conjugation_matches_dense_product() {
        let rho = crate::qstate::random::random_ginibre_density(8, &mut crate::rng::from_seed(5)).unwrap();
        let s = PauliString::new(vec![2, 1, 3]).unwrap();
        let p = s.to_matrix();
        let dense = p.matmul(rho.matrix()).unwrap().matmul(&p.adjoint()).unwrap();
        let fast = s.conjugate(&rho).unwrap();
        assert!(fast.matrix().max_abs_diff(&dense) < 1e-14);
    }
}
