//! Two-qubit datasets: PPT-labelled Ginibre states, balanced unlabeled pools
//! and the ρ_s family.

use rand::Rng;
use rand_distr::{Distribution, Exp1};

use super::augment::draw_mixes;
use super::sample::{Dataset, DatasetMeta, Family, Provenance, Sample, Source};
use super::MAX_ATTEMPTS_PER_CLASS;
use crate::qstate::{
    is_ppt_entangled, random_ginibre_density, random_pure_vector, rho_s, Complex64, DensityMatrix,
    FeatureScheme, Separability, RHO_S_THETA,
};
use crate::rng::{self, Stream};
use crate::{Error, Result};

pub const FAMILY_GINIBRE: &str = "2q-ginibre";
pub const FAMILY_RHO_S: &str = "2q-rho-s";

/// Mixing parameter at which ρ_s(p, θ) becomes PPT-entangled (any θ in (0, π/2)).
pub const RHO_S_THRESHOLD: f64 = 1.0 / 3.0;

fn meta(family: &str, scheme: FeatureScheme, seed: u64) -> DatasetMeta {
    DatasetMeta {
        family: family.into(),
        scheme,
        seed,
        augmentations: 0,
    }
}

fn check_scheme(scheme: FeatureScheme) -> Result<()> {
    match scheme {
        FeatureScheme::Full | FeatureScheme::F1 | FeatureScheme::F2 => Ok(()),
        FeatureScheme::Ghz => Err(Error::InvalidArgument(
            "GHZ features on a two-qubit dataset".into(),
        )),
    }
}

/// Convex mixture of `m ∈ 1..=16` Haar-random pure product states with flat
/// Dirichlet weights.
pub fn random_separable_2q<R: Rng + ?Sized>(rng: &mut R) -> Result<DensityMatrix> {
    let m = rng.random_range(1..=16usize);
    random_separable_2q_with(m, rng)
}

pub fn random_separable_2q_with<R: Rng + ?Sized>(m: usize, rng: &mut R) -> Result<DensityMatrix> {
    let mut products = Vec::with_capacity(m);
    let mut weights = Vec::with_capacity(m);
    for _ in 0..m {
        let a = random_pure_vector(2, rng);
        let b = random_pure_vector(2, rng);
        let psi: Vec<Complex64> = a.iter().flat_map(|x| b.iter().map(move |y| x * y)).collect();
        products.push(DensityMatrix::pure(&psi)?);
        let w: f64 = Exp1.sample(rng);
        weights.push(w);
    }
    let total: f64 = weights.iter().sum();
    let weights: Vec<f64> = weights.iter().map(|w| w / total).collect();
    let refs: Vec<&DensityMatrix> = products.iter().collect();
    DensityMatrix::convex_combination(&refs, &weights)
}

/// `l` PPT-labelled Ginibre states, exactly `l/2` per class. Draw `i` uses the
/// stream `(seed, purpose, i)`.
pub fn gen_labeled_2q(l: usize, scheme: FeatureScheme, seed: u64, purpose: Stream) -> Result<Dataset> {
    if l % 2 != 0 {
        return Err(Error::InvalidArgument(format!("labeled size {l} must be even")));
    }
    check_scheme(scheme)?;
    let mut ds = Dataset::new(scheme.dim(2), 2, meta(FAMILY_GINIBRE, scheme, seed));
    let quota = l / 2;
    let mut counts = [0usize; 2];
    let mut draw = 0u64;
    while counts[0] < quota || counts[1] < quota {
        if draw >= 2 * MAX_ATTEMPTS_PER_CLASS {
            return Err(Error::SamplingExhausted(draw));
        }
        let mut r = rng::stream(seed, purpose, draw);
        let rho = random_ginibre_density(4, &mut r)?;
        let class = is_ppt_entangled(&rho)?.class();
        if counts[class] < quota {
            counts[class] += 1;
            let prov = Provenance::with_matrix(Family::Ginibre, rho.clone())
                .truth(class)
                .seed(draw);
            ds.push(Sample::from_state(&rho, scheme, Some(class), Source::Labeled, prov)?)?;
        }
        draw += 1;
    }
    Ok(ds)
}

/// Deterministic Fisher–Yates shuffle of the samples.
pub(crate) fn shuffle_samples(ds: &mut Dataset, seed: u64) {
    let mut r = rng::stream(seed, Stream::Shuffle, 0);
    let n = ds.samples.len();
    for i in (1..n).rev() {
        let j = r.random_range(0..=i);
        ds.samples.swap(i, j);
    }
}

/// `u` unlabeled two-qubit states with an exact 50/50 ground-truth split.
///
/// Ginibre draws are taken until the entangled half is full; the separable
/// shortfall is topped up half with random product mixtures and half with
/// pairwise convex mixes of the separable pool. Ground truth stays in the
/// provenance for audits.
pub fn gen_unlabeled_2q(u: usize, scheme: FeatureScheme, seed: u64) -> Result<Dataset> {
    if u < 2 {
        return Err(Error::InvalidArgument(format!("unlabeled size {u} < 2")));
    }
    check_scheme(scheme)?;
    let n_sep = u / 2;
    let n_ent = u - n_sep;
    let mut separable: Vec<(DensityMatrix, Family)> = Vec::with_capacity(n_sep);
    let mut entangled: Vec<DensityMatrix> = Vec::with_capacity(n_ent);
    let mut draw = 0u64;
    while entangled.len() < n_ent {
        if draw >= MAX_ATTEMPTS_PER_CLASS {
            return Err(Error::SamplingExhausted(draw));
        }
        let rho = random_ginibre_density(4, &mut rng::stream(seed, Stream::Unlabeled, draw))?;
        match is_ppt_entangled(&rho)? {
            Separability::Entangled => entangled.push(rho),
            Separability::Separable if separable.len() < n_sep => {
                separable.push((rho, Family::Ginibre))
            }
            Separability::Separable => {}
        }
        draw += 1;
    }
    let deficit = n_sep - separable.len();
    let from_products = if separable.len() + deficit.div_ceil(2) >= 2 {
        deficit.div_ceil(2)
    } else {
        deficit
    };
    for j in 0..from_products {
        let rho = random_separable_2q(&mut rng::stream(seed, Stream::Separable, j as u64))?;
        separable.push((rho, Family::ProductMix));
    }
    let remaining = n_sep - separable.len();
    if remaining > 0 {
        let pool: Vec<DensityMatrix> = separable.iter().map(|(r, _)| r.clone()).collect();
        let mut r = rng::stream(seed, Stream::Mix, 0);
        for d in draw_mixes(pool.len(), remaining, &mut r)? {
            separable.push((pool[d.a].mix(&pool[d.b], d.lambda)?, Family::ConvexMix));
        }
    }

    let mut ds = Dataset::new(scheme.dim(2), 2, meta(FAMILY_GINIBRE, scheme, seed));
    for (rho, family) in separable {
        let prov = Provenance::with_matrix(family, rho.clone()).truth(0);
        ds.push(Sample::from_state(&rho, scheme, None, Source::Unlabeled, prov)?)?;
    }
    for rho in entangled {
        let prov = Provenance::with_matrix(Family::Ginibre, rho.clone()).truth(1);
        ds.push(Sample::from_state(&rho, scheme, None, Source::Unlabeled, prov)?)?;
    }
    shuffle_samples(&mut ds, seed);
    Ok(ds)
}

fn rho_s_sample(p: f64, scheme: FeatureScheme, label: Option<usize>, source: Source) -> Result<(Sample, usize)> {
    let rho = rho_s(p, RHO_S_THETA)?;
    let class = is_ppt_entangled(&rho)?.class();
    let prov = Provenance::rho_s(p, RHO_S_THETA).truth(class);
    let label = label.map(|_| class);
    Ok((Sample::from_state(&rho, scheme, label, source, prov)?, class))
}

/// Draws p uniformly from the given class region of ρ_s, redrawing the
/// measure-zero cases whose PPT verdict disagrees with the region.
fn rho_s_in_class<R: Rng + ?Sized>(class: usize, rng: &mut R) -> Result<f64> {
    for _ in 0..MAX_ATTEMPTS_PER_CLASS {
        let p = if class == 0 {
            rng.random_range(0.0..=RHO_S_THRESHOLD)
        } else {
            rng.random_range(RHO_S_THRESHOLD..=1.0)
        };
        if is_ppt_entangled(&rho_s(p, RHO_S_THETA)?)?.class() == class {
            return Ok(p);
        }
    }
    Err(Error::SamplingExhausted(MAX_ATTEMPTS_PER_CLASS))
}

/// Labeled ρ_s states, exactly `size/2` per class, p uniform within each class
/// region; used for validation and test sets.
pub fn gen_rho_s_labeled(size: usize, scheme: FeatureScheme, seed: u64, purpose: Stream) -> Result<Dataset> {
    if size % 2 != 0 {
        return Err(Error::InvalidArgument(format!("size {size} must be even")));
    }
    check_scheme(scheme)?;
    let mut ds = Dataset::new(scheme.dim(2), 2, meta(FAMILY_RHO_S, scheme, seed));
    for i in 0..size {
        let class = i % 2;
        let p = rho_s_in_class(class, &mut rng::stream(seed, purpose, i as u64))?;
        let (s, got) = rho_s_sample(p, scheme, Some(class), Source::Labeled)?;
        debug_assert_eq!(got, class);
        ds.push(s)?;
    }
    Ok(ds)
}

/// Unlabeled ρ_s pool: p uniform on [0, 1] until the entangled half is full,
/// separable shortfall filled by convex mixes (ρ_s is affine in p, so a mix
/// of two members is the member at the mixed p).
pub fn gen_rho_s_unlabeled(u: usize, scheme: FeatureScheme, seed: u64) -> Result<Dataset> {
    if u < 2 {
        return Err(Error::InvalidArgument(format!("unlabeled size {u} < 2")));
    }
    check_scheme(scheme)?;
    let n_sep = u / 2;
    let n_ent = u - n_sep;
    let mut seps: Vec<f64> = Vec::new();
    let mut ents: Vec<f64> = Vec::new();
    let mut draw = 0u64;
    while ents.len() < n_ent {
        if draw >= MAX_ATTEMPTS_PER_CLASS {
            return Err(Error::SamplingExhausted(draw));
        }
        let p: f64 = rng::stream(seed, Stream::Unlabeled, draw).random_range(0.0..=1.0);
        match is_ppt_entangled(&rho_s(p, RHO_S_THETA)?)?.class() {
            1 => ents.push(p),
            _ if seps.len() < n_sep => seps.push(p),
            _ => {}
        }
        draw += 1;
    }
    let mut extra = 0u64;
    while seps.len() < 2.min(n_sep) {
        seps.push(rho_s_in_class(0, &mut rng::stream(seed, Stream::Separable, extra))?);
        extra += 1;
    }
    let deficit = n_sep - seps.len();
    if deficit > 0 {
        let mut r = rng::stream(seed, Stream::Mix, 0);
        let pool = seps.clone();
        for d in draw_mixes(pool.len(), deficit, &mut r)? {
            seps.push(d.lambda * pool[d.a] + (1.0 - d.lambda) * pool[d.b]);
        }
    }
    let mut ds = Dataset::new(scheme.dim(2), 2, meta(FAMILY_RHO_S, scheme, seed));
    for p in seps.into_iter().chain(ents) {
        ds.push(rho_s_sample(p, scheme, None, Source::Unlabeled)?.0)?;
    }
    shuffle_samples(&mut ds, seed);
    Ok(ds)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labeled_set_is_balanced_and_correct() {
        let ds = gen_labeled_2q(10, FeatureScheme::Full, 3, Stream::Labeled).unwrap();
        assert_eq!(ds.label_counts(), vec![5, 5]);
        for (i, s) in ds.samples.iter().enumerate() {
            let rho = s.density(i).unwrap();
            assert_eq!(is_ppt_entangled(&rho).unwrap().class(), s.label.unwrap());
            assert_eq!(s.features.len(), 16);
        }
        assert!(gen_labeled_2q(9, FeatureScheme::Full, 3, Stream::Labeled).is_err());
    }

    #[test]
    fn labeled_set_is_deterministic() {
        let a = gen_labeled_2q(20, FeatureScheme::F1, 11, Stream::Labeled).unwrap();
        let b = gen_labeled_2q(20, FeatureScheme::F1, 11, Stream::Labeled).unwrap();
        assert_eq!(a, b);
        let c = gen_labeled_2q(20, FeatureScheme::F1, 12, Stream::Labeled).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn single_product_is_pure_and_ppt() {
        let mut r = rng::from_seed(1);
        let rho = random_separable_2q_with(1, &mut r).unwrap();
        assert!((rho.purity() - 1.0).abs() < 1e-12);
        assert!(crate::qstate::min_pt_eigenvalue(&rho).unwrap() >= -1e-12);
        for _ in 0..200 {
            let rho = random_separable_2q(&mut r).unwrap();
            assert_eq!(is_ppt_entangled(&rho).unwrap(), Separability::Separable);
        }
    }

    #[test]
    fn unlabeled_pool_is_balanced() {
        let ds = gen_unlabeled_2q(100, FeatureScheme::Full, 5).unwrap();
        assert_eq!(ds.len(), 100);
        assert_eq!(ds.truth_counts(), vec![50, 50]);
        assert!(ds.samples.iter().all(|s| s.label.is_none()));
        for (i, s) in ds.samples.iter().enumerate() {
            let rho = s.density(i).unwrap();
            assert_eq!(is_ppt_entangled(&rho).unwrap().class(), s.truth().unwrap());
        }
    }

    #[test]
    fn rho_s_sets() {
        let t = gen_rho_s_labeled(40, FeatureScheme::F2, 2, Stream::Test).unwrap();
        assert_eq!(t.label_counts(), vec![20, 20]);
        for s in &t.samples {
            let p = s.params.as_ref().unwrap().p.unwrap();
            assert_eq!(s.label.unwrap(), usize::from(p > RHO_S_THRESHOLD));
        }
        let u = gen_rho_s_unlabeled(60, FeatureScheme::Full, 2).unwrap();
        assert_eq!(u.truth_counts(), vec![30, 30]);
    }
}
