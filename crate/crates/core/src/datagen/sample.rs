use crate::qstate::{
    featurize, ghz_noisy, rho_s, DensityMatrix, FeatureScheme, PauliString, RHO_S_THETA,
};
use crate::{Error, Result};

/// Where a state came from, for reconstruction and audits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    /// Normalised complex Ginibre draw.
    Ginibre,
    /// Convex mixture of random pure product states.
    ProductMix,
    /// Two-element convex mixture of known-separable states.
    ConvexMix,
    /// The ρ_s(p, θ) family.
    RhoS,
    /// The noisy GHZ family ρ_ng(n, p).
    NoisyGhz,
}

impl Family {
    pub fn tag(self) -> &'static str {
        match self {
            Family::Ginibre => "ginibre",
            Family::ProductMix => "product-mix",
            Family::ConvexMix => "convex-mix",
            Family::RhoS => "rho-s",
            Family::NoisyGhz => "ghz",
        }
    }

    pub fn from_tag(tag: &str) -> Option<Self> {
        Some(match tag {
            "ginibre" => Family::Ginibre,
            "product-mix" => Family::ProductMix,
            "convex-mix" => Family::ConvexMix,
            "rho-s" => Family::RhoS,
            "ghz" => Family::NoisyGhz,
            _ => return None,
        })
    }
}

/// State parameters carried by a sample so it can be rebuilt, re-featurized
/// after augmentation and re-labelled from scratch in audits.
#[derive(Debug, Clone, PartialEq)]
pub struct Provenance {
    pub family: Family,
    pub nqubits: usize,
    pub p: Option<f64>,
    pub theta: Option<f64>,
    pub seed: Option<u64>,
    /// Ground-truth class, kept even when the label is hidden.
    pub truth: Option<usize>,
    /// Pauli-string conjugation applied on top of a parametric state.
    pub pauli: Option<PauliString>,
    /// Explicit matrix, for states without a compact parametrisation.
    pub matrix: Option<DensityMatrix>,
}

impl Provenance {
    pub fn with_matrix(family: Family, rho: DensityMatrix) -> Self {
        Self {
            family,
            nqubits: rho.nqubits(),
            p: None,
            theta: None,
            seed: None,
            truth: None,
            pauli: None,
            matrix: Some(rho),
        }
    }

    pub fn ghz(n: usize, p: f64) -> Self {
        Self {
            family: Family::NoisyGhz,
            nqubits: n,
            p: Some(p),
            theta: None,
            seed: None,
            truth: None,
            pauli: None,
            matrix: None,
        }
    }

    pub fn rho_s(p: f64, theta: f64) -> Self {
        Self {
            family: Family::RhoS,
            nqubits: 2,
            p: Some(p),
            theta: Some(theta),
            seed: None,
            truth: None,
            pauli: None,
            matrix: None,
        }
    }

    pub fn truth(mut self, class: usize) -> Self {
        self.truth = Some(class);
        self
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    /// Rebuilds the density matrix this sample describes.
    pub fn density(&self) -> Option<Result<DensityMatrix>> {
        if let Some(m) = &self.matrix {
            return Some(Ok(m.clone()));
        }
        let base = match (self.family, self.p) {
            (Family::NoisyGhz, Some(p)) => ghz_noisy(self.nqubits, p),
            (Family::RhoS, Some(p)) => rho_s(p, self.theta.unwrap_or(RHO_S_THETA)),
            _ => return None,
        };
        Some(base.and_then(|rho| match &self.pauli {
            Some(s) => s.conjugate(&rho),
            None => Ok(rho),
        }))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Source {
    Labeled,
    Unlabeled,
    GuessLabeled,
    /// An augmented view of the sample at this index of the parent dataset.
    AugmentedFrom(usize),
}

impl Source {
    pub fn tag(self) -> String {
        match self {
            Source::Labeled => "labeled".into(),
            Source::Unlabeled => "unlabeled".into(),
            Source::GuessLabeled => "guess-labeled".into(),
            Source::AugmentedFrom(i) => format!("augmented-from:{i}"),
        }
    }

    pub fn parse(tag: &str) -> Option<Self> {
        Some(match tag {
            "labeled" => Source::Labeled,
            "unlabeled" => Source::Unlabeled,
            "guess-labeled" => Source::GuessLabeled,
            other => Source::AugmentedFrom(other.strip_prefix("augmented-from:")?.parse().ok()?),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    pub features: Vec<f64>,
    /// Class index of the one-hot label.
    pub label: Option<usize>,
    pub source: Source,
    pub params: Option<Provenance>,
}

impl Sample {
    /// Featurizes `params` and attaches an optional label.
    pub fn from_state(
        rho: &DensityMatrix,
        scheme: FeatureScheme,
        label: Option<usize>,
        source: Source,
        params: Provenance,
    ) -> Result<Self> {
        Ok(Self {
            features: featurize(rho, scheme)?,
            label,
            source,
            params: Some(params),
        })
    }

    pub fn one_hot(&self, class_count: usize) -> Option<Vec<f64>> {
        self.label.map(|c| {
            let mut v = vec![0.0; class_count];
            v[c] = 1.0;
            v
        })
    }

    /// Ground truth: the label when present, otherwise the stored truth.
    pub fn truth(&self) -> Option<usize> {
        self.label
            .or_else(|| self.params.as_ref().and_then(|p| p.truth))
    }

    pub fn density(&self, index: usize) -> Result<DensityMatrix> {
        self.params
            .as_ref()
            .and_then(Provenance::density)
            .unwrap_or(Err(Error::Unreconstructible(index)))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DatasetMeta {
    /// Experiment family, e.g. `2q-ginibre` or `ghz4-k2`.
    pub family: String,
    pub scheme: FeatureScheme,
    pub seed: u64,
    /// Augmented views per parent beyond the original (K).
    pub augmentations: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub samples: Vec<Sample>,
    pub feature_dim: usize,
    pub class_count: usize,
    pub meta: DatasetMeta,
}

impl Dataset {
    pub fn new(feature_dim: usize, class_count: usize, meta: DatasetMeta) -> Self {
        Self {
            samples: Vec::new(),
            feature_dim,
            class_count,
            meta,
        }
    }

    pub fn push(&mut self, sample: Sample) -> Result<()> {
        if sample.features.len() != self.feature_dim {
            return Err(Error::Dimension(format!(
                "sample with {} features in a dataset of dim {}",
                sample.features.len(),
                self.feature_dim
            )));
        }
        if sample.features.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("sample features".into()));
        }
        if let Some(c) = sample.label {
            if c >= self.class_count {
                return Err(Error::InvalidArgument(format!(
                    "label {c} with {} classes",
                    self.class_count
                )));
            }
        }
        self.samples.push(sample);
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Counts of each label; unlabeled samples are skipped.
    pub fn label_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.class_count];
        for s in &self.samples {
            if let Some(c) = s.label {
                counts[c] += 1;
            }
        }
        counts
    }

    /// Counts of each ground-truth class, using stored truth for unlabeled
    /// samples.
    pub fn truth_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.class_count];
        for s in &self.samples {
            if let Some(c) = s.truth() {
                counts[c] += 1;
            }
        }
        counts
    }

    pub fn is_labeled(&self) -> bool {
        self.samples.iter().all(|s| s.label.is_some())
    }

    /// Views per parent when the dataset was built by augmentation.
    pub fn views_per_parent(&self) -> usize {
        self.meta.augmentations + 1
    }

    /// Same dataset with every label removed (truth is kept in params).
    pub fn without_labels(&self) -> Self {
        let mut out = self.clone();
        for s in &mut out.samples {
            if let (Some(c), Some(p)) = (s.label, s.params.as_mut()) {
                p.truth.get_or_insert(c);
            }
            s.label = None;
            if s.source == Source::Labeled {
                s.source = Source::Unlabeled;
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn meta() -> DatasetMeta {
        DatasetMeta {
            family: "test".into(),
            scheme: FeatureScheme::Ghz,
            seed: 0,
            augmentations: 0,
        }
    }

    #[test]
    fn push_checks_shape_and_finiteness() {
        let mut ds = Dataset::new(2, 2, meta());
        let ok = Sample {
            features: vec![0.0, 1.0],
            label: Some(1),
            source: Source::Labeled,
            params: None,
        };
        ds.push(ok.clone()).unwrap();
        assert!(ds.push(Sample { features: vec![0.0], ..ok.clone() }).is_err());
        assert!(ds.push(Sample { features: vec![f64::NAN, 0.0], ..ok.clone() }).is_err());
        assert!(ds.push(Sample { label: Some(2), ..ok }).is_err());
        assert_eq!(ds.label_counts(), vec![0, 1]);
    }

    #[test]
    fn one_hot_has_a_single_one() {
        let s = Sample {
            features: vec![],
            label: Some(2),
            source: Source::Labeled,
            params: None,
        };
        assert_eq!(s.one_hot(3).unwrap(), vec![0.0, 0.0, 1.0]);
    }

    #[test]
    fn source_tags_round_trip() {
        for s in [
            Source::Labeled,
            Source::Unlabeled,
            Source::GuessLabeled,
            Source::AugmentedFrom(17),
        ] {
            assert_eq!(Source::parse(&s.tag()), Some(s));
        }
        assert_eq!(Source::parse("augmented-from:x"), None);
    }

    #[test]
    fn parametric_states_rebuild() {
        let p = Provenance::ghz(4, 0.3);
        let rho = p.density().unwrap().unwrap();
        assert_eq!(rho, ghz_noisy(4, 0.3).unwrap());
        let p = Provenance {
            pauli: Some(PauliString::new(vec![1, 0, 0, 0]).unwrap()),
            ..p
        };
        assert_ne!(p.density().unwrap().unwrap(), rho);
    }
}
