use super::config::{ExperimentConfig, FamilySpec, FuzzyPool};
use crate::datagen::{
    conjugate_once, gen_ghz_labeled, gen_ghz_unlabeled, gen_labeled_2q, gen_rho_s_labeled,
    gen_rho_s_unlabeled, gen_unlabeled_2q, ghz_class_test_set, Dataset, GhzMode, GhzTask,
};
use crate::rng::{self, Stream};
use crate::Result;

const VALIDATION_AUGMENT: u64 = 11;

/// Every dataset of one seed of an experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct SeedData {
    pub labeled: Dataset,
    pub unlabeled: Dataset,
    pub validation: Dataset,
    /// Named test sets; the first is the primary one.
    pub tests: Vec<(String, Dataset)>,
}

/// File stem of every dataset role, in the order they are written.
pub fn dataset_names(family: &FamilySpec) -> Vec<&'static str> {
    let mut names = vec!["labeled", "unlabeled", "validation", "test"];
    if *family == FamilySpec::Ghz3 {
        names.push("test-class");
    }
    names
}

/// Test-set names of a family.
pub fn test_names(family: &FamilySpec) -> Vec<&'static str> {
    dataset_names(family).into_iter().skip(3).collect()
}

/// Builds the labeled, unlabeled, validation and test sets for `seed`.
///
/// For ρ_s the labeled set is random two-qubit states while validation and
/// test come from the ρ_s line. The fuzzy family validates on fuzzy-labeled
/// states and tests on exact 3-separability labels; both are locally
/// transformed once, like the sweep states.
pub fn generate_seed(cfg: &ExperimentConfig, seed: u64) -> Result<SeedData> {
    let scheme = cfg.train.feature_scheme;
    let val = cfg.train.validation_size;
    Ok(match cfg.family {
        FamilySpec::TwoQubit => SeedData {
            labeled: gen_labeled_2q(cfg.labeled, scheme, seed, Stream::Labeled)?,
            unlabeled: gen_unlabeled_2q(cfg.unlabeled, scheme, seed)?,
            validation: gen_labeled_2q(val, scheme, seed, Stream::Validation)?,
            tests: vec![("test".into(), gen_labeled_2q(cfg.test, scheme, seed, Stream::Test)?)],
        },
        FamilySpec::RhoS => SeedData {
            labeled: gen_labeled_2q(cfg.labeled, scheme, seed, Stream::Labeled)?,
            unlabeled: gen_rho_s_unlabeled(cfg.unlabeled, scheme, seed)?,
            validation: gen_rho_s_labeled(val, scheme, seed, Stream::Validation)?,
            tests: vec![("test".into(), gen_rho_s_labeled(cfg.test, scheme, seed, Stream::Test)?)],
        },
        FamilySpec::Ghz3 | FamilySpec::GhzBinary { .. } => {
            let task = cfg.family.ghz_task()?.expect("GHZ family has a task");
            let mut tests = vec![("test".into(), gen_ghz_labeled(&task, cfg.test, seed, Stream::Test)?)];
            if cfg.family == FamilySpec::Ghz3 {
                tests.push(("test-class".into(), ghz_class_test_set(cfg.test, seed)?));
            }
            SeedData {
                labeled: gen_ghz_labeled(&task, cfg.labeled, seed, Stream::Labeled)?,
                unlabeled: gen_ghz_unlabeled(&task, cfg.unlabeled, seed)?,
                validation: gen_ghz_labeled(&task, val, seed, Stream::Validation)?,
                tests,
            }
        }
        FamilySpec::Fuzzy { n, unlabeled, .. } => {
            let task = cfg.family.ghz_task()?.expect("fuzzy family has a task");
            let exact = GhzTask::new(n, GhzMode::BinaryK(3))?;
            let pool = match unlabeled {
                FuzzyPool::Intervals => &task,
                FuzzyPool::Full => &exact,
            };
            let validation = gen_ghz_labeled(&task, val, seed, Stream::Validation)?;
            let test = gen_ghz_labeled(&exact, cfg.test, seed, Stream::Test)?;
            SeedData {
                labeled: gen_ghz_labeled(&task, cfg.labeled, seed, Stream::Labeled)?,
                unlabeled: gen_ghz_unlabeled(pool, cfg.unlabeled, seed)?,
                validation: conjugate_once(&validation, rng::subseed(seed, VALIDATION_AUGMENT))?,
                tests: vec![("test".into(), conjugate_once(&test, seed)?)],
            }
        }
    })
}

impl SeedData {
    /// All sets with their file stems, in [`dataset_names`] order.
    pub fn named(&self) -> Vec<(&str, &Dataset)> {
        let mut out = vec![
            ("labeled", &self.labeled),
            ("unlabeled", &self.unlabeled),
            ("validation", &self.validation),
        ];
        out.extend(self.tests.iter().map(|(n, d)| (n.as_str(), d)));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiment::preset;

    #[test]
    fn sizes_follow_the_config() {
        let mut cfg = preset("ghz3-20").unwrap();
        cfg.test = 30;
        let d = generate_seed(&cfg, 3).unwrap();
        assert_eq!(d.labeled.len(), 20);
        assert_eq!(d.labeled.label_counts(), vec![7, 7, 6]);
        assert_eq!(d.unlabeled.len(), 50);
        let names: Vec<&str> = d.named().iter().map(|(n, _)| *n).collect();
        assert_eq!(names, dataset_names(&cfg.family));
        assert_eq!(d.tests[1].1.label_counts(), vec![10, 10, 10]);
    }
}
