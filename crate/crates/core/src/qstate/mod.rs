//! Dense complex linear algebra and the quantum-state toolkit: density
//! matrices, random states and unitaries, local operations, feature maps and
//! analytic separability bounds.

mod bounds;
mod density;
mod eigen;
mod features;
mod matrix;
mod ops;
mod random;
mod states;

pub use bounds::{
    biseparable_bound, bound_k_separable, fully_separable_bound, general_bound, BoundKind,
    SeparabilityBound,
};
pub use density::DensityMatrix;
pub use eigen::hermitian_eigenvalues;
pub use features::{
    features_ghz, features_partial, features_pauli_full, featurize, FeatureScheme, Observable,
};
pub use matrix::{pauli, ComplexMatrix};
pub use num_complex::Complex64;
pub use ops::{
    is_ppt_entangled, local_unitary_conjugate, min_pt_eigenvalue, partial_transpose,
    PauliString, Separability, PPT_TOL,
};
pub use random::{
    complex_normal, determinant, ginibre, random_ginibre_density, random_pure_vector,
    random_unitary,
};
pub use states::{
    bell_phi_plus, ghz_noisy, rho_s, werner, MAX_GHZ_QUBITS, MIN_GHZ_QUBITS, RHO_S_THETA,
};
