//! Lossless augmentations: local-unitary conjugation (𝒜) and convex mixing of
//! separable states (ℳ).

use rand::Rng;

use super::sample::{Dataset, Family, Provenance, Sample, Source};
use crate::qstate::{
    featurize, local_unitary_conjugate, random_unitary, DensityMatrix, FeatureScheme, PauliString,
};
use crate::rng::{self, Stream};
use crate::{Error, Result};

/// Qubit count from which parametric GHZ samples are augmented with Pauli
/// strings instead of Haar-random local unitaries.
pub const PAULI_AUGMENT_MIN_QUBITS: usize = 4;

/// One pairwise mixing draw: `λ ρ_a + (1 − λ) ρ_b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MixDraw {
    pub a: usize,
    pub b: usize,
    pub lambda: f64,
}

/// `count` mixing draws over a pool of `len` states with distinct indices and
/// λ uniform on (0, 1).
pub fn draw_mixes<R: Rng + ?Sized>(len: usize, count: usize, rng: &mut R) -> Result<Vec<MixDraw>> {
    if len < 2 {
        return Err(Error::InvalidArgument(format!(
            "convex mixing needs at least two states, got {len}"
        )));
    }
    Ok((0..count)
        .map(|_| {
            let a = rng.random_range(0..len);
            let mut b = rng.random_range(0..len - 1);
            if b >= a {
                b += 1;
            }
            let lambda = loop {
                let l: f64 = rng.random();
                if l > 0.0 {
                    break l;
                }
            };
            MixDraw { a, b, lambda }
        })
        .collect())
}

/// ℳ: `count` new states, each a pairwise convex mix of distinct inputs.
pub fn augment_mix<R: Rng + ?Sized>(
    separables: &[DensityMatrix],
    count: usize,
    rng: &mut R,
) -> Result<Vec<DensityMatrix>> {
    draw_mixes(separables.len(), count, rng)?
        .into_iter()
        .map(|d| separables[d.a].mix(&separables[d.b], d.lambda))
        .collect()
}

/// Haar-random single-qubit unitaries, one per qubit.
pub fn random_locals<R: Rng + ?Sized>(nqubits: usize, rng: &mut R) -> Result<Vec<crate::qstate::ComplexMatrix>> {
    (0..nqubits).map(|_| random_unitary(2, rng)).collect()
}

/// Uniformly random Pauli string other than the identity.
pub fn random_pauli_string<R: Rng + ?Sized>(nqubits: usize, rng: &mut R) -> PauliString {
    loop {
        let w: Vec<u8> = (0..nqubits).map(|_| rng.random_range(0..4u8)).collect();
        if w.iter().any(|&x| x != 0) {
            return PauliString::new(w).expect("indices in range");
        }
    }
}

/// Applies one random local transformation to the state a sample describes
/// and returns the transformed provenance.
pub(crate) fn transform_once<R: Rng + ?Sized>(
    params: &Provenance,
    index: usize,
    rng: &mut R,
) -> Result<(DensityMatrix, Provenance)> {
    let n = params.nqubits;
    let parametric = params.matrix.is_none() && params.p.is_some();
    if parametric && params.family == Family::NoisyGhz && n >= PAULI_AUGMENT_MIN_QUBITS {
        let fresh = random_pauli_string(n, rng);
        let composed = match &params.pauli {
            // σ_a σ_b ∝ σ_{a xor b} in the I, X, Y, Z = 0..3 encoding
            Some(prev) => PauliString::new(
                prev.indices()
                    .iter()
                    .zip(fresh.indices())
                    .map(|(a, b)| a ^ b)
                    .collect(),
            )?,
            None => fresh,
        };
        let out = Provenance {
            pauli: if composed.is_identity() { None } else { Some(composed) },
            ..params.clone()
        };
        let rho = out.density().unwrap_or(Err(Error::Unreconstructible(index)))?;
        return Ok((rho, out));
    }
    let rho = params.density().unwrap_or(Err(Error::Unreconstructible(index)))?;
    if n == 0 {
        return Err(Error::Unreconstructible(index));
    }
    let locals = random_locals(n, rng)?;
    let conj = local_unitary_conjugate(&rho, &locals, &vec![2; n])?;
    let out = Provenance {
        pauli: None,
        matrix: Some(conj.clone()),
        ..params.clone()
    };
    Ok((conj, out))
}

/// 𝒜: for every sample emits the original followed by `k` locally transformed
/// views, re-featurized with `scheme`; labels are copied verbatim.
///
/// Views of parent `i` are contiguous and drawn from the stream
/// `(seed, Augment, i)`.
pub fn augment_unitary(ds: &Dataset, k: usize, seed: u64, scheme: FeatureScheme) -> Result<Dataset> {
    let mut meta = ds.meta.clone();
    meta.augmentations = k;
    meta.scheme = scheme;
    let feature_dim = if k == 0 {
        ds.feature_dim
    } else {
        scheme.dim(ds.samples.first().and_then(|s| s.params.as_ref()).map_or(0, |p| p.nqubits))
    };
    let mut out = Dataset::new(feature_dim, ds.class_count, meta);
    out.samples.reserve(ds.len() * (k + 1));
    for (i, s) in ds.samples.iter().enumerate() {
        out.push(s.clone())?;
        if k == 0 {
            continue;
        }
        let params = s.params.as_ref().ok_or(Error::Unreconstructible(i))?;
        let mut r = rng::stream(seed, Stream::Augment, i as u64);
        for _ in 0..k {
            let (rho, prov) = transform_once(params, i, &mut r)?;
            out.push(Sample {
                features: featurize(&rho, scheme)?,
                label: s.label,
                source: Source::AugmentedFrom(i),
                params: Some(prov),
            })?;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datagen::sample::DatasetMeta;
    use crate::qstate::{ghz_noisy, is_ppt_entangled, random_ginibre_density, Separability};

    fn two_qubit_dataset(n: usize) -> Dataset {
        let mut ds = Dataset::new(
            16,
            2,
            DatasetMeta {
                family: "t".into(),
                scheme: FeatureScheme::Full,
                seed: 0,
                augmentations: 0,
            },
        );
        let mut r = rng::from_seed(4);
        for _ in 0..n {
            let rho = random_ginibre_density(4, &mut r).unwrap();
            let label = is_ppt_entangled(&rho).unwrap().class();
            ds.push(
                Sample::from_state(
                    &rho,
                    FeatureScheme::Full,
                    Some(label),
                    Source::Labeled,
                    Provenance::with_matrix(Family::Ginibre, rho.clone()),
                )
                .unwrap(),
            )
            .unwrap();
        }
        ds
    }

    #[test]
    fn zero_augmentations_is_identity() {
        let ds = two_qubit_dataset(5);
        let out = augment_unitary(&ds, 0, 1, FeatureScheme::Full).unwrap();
        assert_eq!(out.samples, ds.samples);
    }

    #[test]
    fn sizes_labels_and_ppt_are_preserved() {
        let ds = two_qubit_dataset(20);
        let out = augment_unitary(&ds, 3, 1, FeatureScheme::Full).unwrap();
        assert_eq!(out.len(), 4 * ds.len());
        for (j, s) in out.samples.iter().enumerate() {
            let parent = &ds.samples[j / 4];
            assert_eq!(s.label, parent.label);
            let rho = s.density(j).unwrap();
            assert_eq!(is_ppt_entangled(&rho).unwrap().class(), parent.label.unwrap());
        }
    }

    #[test]
    fn unreconstructible_samples_are_rejected() {
        let mut ds = two_qubit_dataset(2);
        ds.samples[1].params = None;
        assert!(matches!(
            augment_unitary(&ds, 1, 0, FeatureScheme::Full),
            Err(Error::Unreconstructible(1))
        ));
    }

    #[test]
    fn mixes_of_separable_states_stay_separable() {
        let mut r = rng::from_seed(8);
        let mut seps = Vec::new();
        while seps.len() < 10 {
            let rho = random_ginibre_density(4, &mut r).unwrap();
            if is_ppt_entangled(&rho).unwrap() == Separability::Separable {
                seps.push(rho);
            }
        }
        for m in augment_mix(&seps, 200, &mut r).unwrap() {
            assert!((m.matrix().trace().re - 1.0).abs() < 1e-12);
            assert_eq!(is_ppt_entangled(&m).unwrap(), Separability::Separable);
        }
        assert!(augment_mix(&seps[..1], 1, &mut r).is_err());
    }

    #[test]
    fn self_mix_returns_the_state() {
        let rho = ghz_noisy(3, 0.4).unwrap();
        let m = rho.mix(&rho, 0.37).unwrap();
        assert!(m.matrix().max_abs_diff(rho.matrix()) <= 1e-14);
    }

    #[test]
    fn mix_draws_use_distinct_indices() {
        let mut r = rng::from_seed(3);
        for d in draw_mixes(2, 100, &mut r).unwrap() {
            assert_ne!(d.a, d.b);
            assert!(d.lambda > 0.0 && d.lambda < 1.0);
        }
    }

    #[test]
    fn pauli_views_of_ghz_keep_p() {
        let params = Provenance::ghz(5, 0.3);
        let mut r = rng::from_seed(0);
        for _ in 0..20 {
            let (rho, prov) = transform_once(&params, 0, &mut r).unwrap();
            assert_eq!(prov.p, Some(0.3));
            assert!(prov.matrix.is_none());
            let f = featurize(&rho, FeatureScheme::Ghz).unwrap();
            assert!((f[0].abs() - 0.3).abs() < 1e-12);
        }
    }
}
