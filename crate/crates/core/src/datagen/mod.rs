//! Labeled and unlabeled dataset generation for every experiment family,
//! augmentation, and dataset files.

mod augment;
mod ghz;
mod io;
mod sample;
mod two_qubit;

/// Rejection-sampling cap per class before a generator gives up.
pub const MAX_ATTEMPTS_PER_CLASS: u64 = 10_000_000;

pub use augment::{
    augment_mix, augment_unitary, draw_mixes, random_locals, random_pauli_string, MixDraw,
    PAULI_AUGMENT_MIN_QUBITS,
};
pub use ghz::{
    conjugate_once, fuzzy_intervals, gen_fuzzy_3sep, gen_ghz_labeled, gen_ghz_sets,
    gen_ghz_unlabeled, ghz_class_test_set, label_ghz, GhzMode, GhzTask, Interval,
};
pub use io::{decode_dataset, encode_dataset, load_dataset, save_dataset};
pub(crate) use io::fmt_f64;
pub use sample::{Dataset, DatasetMeta, Family, Provenance, Sample, Source};
pub use two_qubit::{
    gen_labeled_2q, gen_rho_s_labeled, gen_rho_s_unlabeled, gen_unlabeled_2q,
    random_separable_2q, random_separable_2q_with, FAMILY_GINIBRE, FAMILY_RHO_S,
    RHO_S_THRESHOLD,
};
