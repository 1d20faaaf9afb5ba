//! Named experiment configurations.
//!
//! | pattern | family | notes |
//! |---|---|---|
//! | `2q-full-{l}-K{k}` | random two-qubit, F | l ∈ {500, 1000, 2000, 4000}, k ∈ {2, 4}, u = 20l |
//! | `2q-full-500-K4-desk` | random two-qubit, F | shortened schedule of `2q-full-500-K4` |
//! | `2q-partial-{F1\|F2}-{l}` | random two-qubit | l ∈ {500, 1000, 2000, 4000}, u = 10l, K = 4 |
//! | `rho-s-{30\|100}[-F1\|-F2]` | ρ_s test line | u = 2l, K = 4 |
//! | `ghz3-{l}` | three-class GHZ | l ∈ {20, 50, 100, 200}, K₁ = 2, K₂ = 8 |
//! | `ghzN-k{k}-{n}-{l}` | binary k-separability | n ∈ 4..=10 where a bound exists, l ∈ {30, 100}, u = 2l, K₁ = K₂ = 1 |
//! | `bound-n{n}-a{78\|34\|12}` | fuzzy 3-separability | n ∈ 4..=7, l = 200, u = 1000, K = 5, eight training sets |
//! | `bound-n4-a78-desk` | fuzzy 3-separability | four training sets, shortened schedule |

use super::config::{ExperimentConfig, FamilySpec, FuzzyPool};
use crate::qstate::FeatureScheme;
use crate::ssl::TrainConfig;
use crate::{Error, Result};

/// One representative name per preset pattern, for listings and tests.
pub const PRESET_EXAMPLES: &[&str] = &[
    "2q-full-500-K2",
    "2q-full-500-K4",
    "2q-full-4000-K4",
    "2q-full-500-K4-desk",
    "2q-partial-F1-500",
    "2q-partial-F2-2000",
    "rho-s-30",
    "rho-s-100",
    "rho-s-30-F2",
    "ghz3-20",
    "ghz3-200",
    "ghzN-k2-4-30",
    "ghzN-k3-6-100",
    "ghzN-k4-7-30",
    "bound-n4-a78",
    "bound-n7-a12",
    "bound-n4-a78-desk",
];

fn seeds(count: u64) -> Vec<u64> {
    (1..=count).collect()
}

fn unknown(name: &str) -> Error {
    Error::Config(format!("unknown preset '{name}'"))
}

fn base(name: &str, family: FamilySpec, labeled: usize, unlabeled: usize, test: usize, train: TrainConfig) -> ExperimentConfig {
    ExperimentConfig {
        name: name.to_owned(),
        family,
        labeled,
        unlabeled,
        test,
        train,
        seeds: seeds(5),
        bound: Default::default(),
        long_running: false,
    }
}

/// Epochs per training stage for the random two-qubit runs.
fn two_qubit_epochs(l: usize, k: usize) -> Option<usize> {
    let idx = [500, 1000, 2000, 4000].iter().position(|&v| v == l)?;
    Some(match k {
        2 => [100, 100, 150, 150][idx],
        4 => [150, 150, 200, 250][idx],
        _ => return None,
    })
}

fn two_qubit(name: &str, scheme: FeatureScheme, l: usize, k: usize, u: usize) -> Result<ExperimentConfig> {
    let epochs = two_qubit_epochs(l, k).ok_or_else(|| unknown(name))?;
    let train = TrainConfig {
        k_labeled: k,
        k_unlabeled: k,
        epochs_warm: epochs,
        epochs_update: epochs,
        feature_scheme: scheme,
        validation_size: l.max(200),
        ..Default::default()
    };
    let mut cfg = base(name, FamilySpec::TwoQubit, l, u, 6000, train);
    cfg.long_running = true;
    Ok(cfg)
}

fn ghz_train(k1: usize, k2: usize, scheme: FeatureScheme, l: usize) -> TrainConfig {
    TrainConfig {
        k_labeled: k1,
        k_unlabeled: k2,
        feature_scheme: scheme,
        validation_size: l.max(200),
        ..Default::default()
    }
}

fn parse<T: std::str::FromStr>(s: &str, name: &str) -> Result<T> {
    s.parse().map_err(|_| unknown(name))
}

/// Looks up a preset by name.
pub fn preset(name: &str) -> Result<ExperimentConfig> {
    let parts: Vec<&str> = name.split('-').collect();
    let cfg = match parts.as_slice() {
        ["2q", "full", "500", "K4", "desk"] => {
            let mut cfg = two_qubit(name, FeatureScheme::Full, 500, 4, 10_000)?;
            cfg.train.outer_steps = 4;
            cfg.train.epochs_update = 25;
            cfg.train.epochs_warm = 150;
            cfg.seeds = seeds(3);
            cfg.long_running = false;
            cfg
        }
        ["2q", "full", l, k] => {
            let l: usize = parse(l, name)?;
            let k: usize = parse(k.strip_prefix('K').ok_or_else(|| unknown(name))?, name)?;
            two_qubit(name, FeatureScheme::Full, l, k, 20 * l)?
        }
        ["2q", "partial", f, l] => {
            let scheme = match *f {
                "F1" => FeatureScheme::F1,
                "F2" => FeatureScheme::F2,
                _ => return Err(unknown(name)),
            };
            let l: usize = parse(l, name)?;
            two_qubit(name, scheme, l, 4, 10 * l)?
        }
        ["rho", "s", l, rest @ ..] => {
            let l: usize = parse(l, name)?;
            if l != 30 && l != 100 {
                return Err(unknown(name));
            }
            let scheme = match rest {
                [] => FeatureScheme::Full,
                ["F1"] => FeatureScheme::F1,
                ["F2"] => FeatureScheme::F2,
                _ => return Err(unknown(name)),
            };
            let train = TrainConfig {
                feature_scheme: scheme,
                validation_size: l.max(200),
                ..Default::default()
            };
            base(name, FamilySpec::RhoS, l, 2 * l, 2000, train)
        }
        ["ghz3", l] => {
            let l: usize = parse(l, name)?;
            let u = match l {
                20 => 50,
                50 => 150,
                100 => 1000,
                200 => 2000,
                _ => return Err(unknown(name)),
            };
            base(name, FamilySpec::Ghz3, l, u, 6000, ghz_train(2, 8, FeatureScheme::Full, l))
        }
        ["ghzN", k, n, l] => {
            let k: usize = parse(k.strip_prefix('k').ok_or_else(|| unknown(name))?, name)?;
            let n: usize = parse(n, name)?;
            let l: usize = parse(l, name)?;
            if !(2..=4).contains(&k) || !(4..=10).contains(&n) || (l != 30 && l != 100) {
                return Err(unknown(name));
            }
            let family = FamilySpec::GhzBinary { n, k };
            family.ghz_task()?;
            base(name, family, l, 2 * l, 2000, ghz_train(1, 1, FeatureScheme::Ghz, l))
        }
        ["bound", n, a, rest @ ..] => {
            let n: usize = parse(n.strip_prefix('n').ok_or_else(|| unknown(name))?, name)?;
            let a = match *a {
                "a78" => 7.0 / 8.0,
                "a34" => 3.0 / 4.0,
                "a12" => 1.0 / 2.0,
                _ => return Err(unknown(name)),
            };
            if !(4..=7).contains(&n) {
                return Err(unknown(name));
            }
            let mut cfg = base(
                name,
                FamilySpec::Fuzzy { n, a, unlabeled: FuzzyPool::Intervals },
                200,
                1000,
                2000,
                ghz_train(5, 5, FeatureScheme::Ghz, 200),
            );
            cfg.seeds = seeds(8);
            match rest {
                [] => {}
                ["desk"] if n == 4 && a == 7.0 / 8.0 => {
                    cfg.seeds = seeds(4);
                    cfg.train.outer_steps = 10;
                    cfg.train.epochs_warm = 50;
                    cfg.train.epochs_update = 20;
                }
                _ => return Err(unknown(name)),
            }
            cfg
        }
        _ => return Err(unknown(name)),
    };
    cfg.validate()?;
    Ok(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_listed_preset_resolves() {
        for name in PRESET_EXAMPLES {
            let cfg = preset(name).unwrap_or_else(|e| panic!("{name}: {e}"));
            assert_eq!(cfg.name, *name);
        }
    }

    #[test]
    fn preset_contents() {
        let r = preset("rho-s-30").unwrap();
        assert_eq!((r.labeled, r.unlabeled, r.test), (30, 60, 2000));
        assert_eq!((r.train.k_labeled, r.train.outer_steps), (4, 30));
        let g = preset("ghz3-20").unwrap();
        assert_eq!((g.train.k_labeled, g.train.k_unlabeled, g.unlabeled), (2, 8, 50));
        let b = preset("bound-n4-a78").unwrap();
        assert_eq!((b.labeled, b.unlabeled, b.seeds.len()), (200, 1000, 8));
        assert_eq!(b.family.sweep_target(), Some((4, 3)));
        let f = preset("2q-full-4000-K4").unwrap();
        assert_eq!((f.unlabeled, f.train.epochs_update), (80_000, 250));
        assert!(f.long_running);
    }

    #[test]
    fn unknown_names_are_rejected() {
        for name in ["rho-s-31", "2q-full-500-K3", "ghzN-k3-8-30", "bound-n8-a78", "ghz3-21", "x"] {
            assert!(preset(name).is_err(), "{name}");
        }
    }
}
