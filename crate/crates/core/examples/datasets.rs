//! Builds labeled and unlabeled two-qubit datasets, augments them with local
//! unitaries and round-trips them through the text format.
//!
//! cargo run --release --example datasets

use entangle_ssl::datagen::{
    augment_unitary, gen_labeled_2q, gen_unlabeled_2q, load_dataset, save_dataset,
};
use entangle_ssl::qstate::{min_pt_eigenvalue, FeatureScheme};
use entangle_ssl::rng::Stream;
use entangle_ssl::Result;

fn main() -> Result<()> {
    let seed = 3;
    let labeled = gen_labeled_2q(20, FeatureScheme::Full, seed, Stream::Labeled)?;
    let unlabeled = gen_unlabeled_2q(100, FeatureScheme::Full, seed)?;
    println!("labeled: {} states, classes {:?}", labeled.len(), labeled.label_counts());
    println!(
        "unlabeled: {} states, hidden ground truth {:?}",
        unlabeled.len(),
        unlabeled.truth_counts()
    );

    // four locally transformed views per state; PPT class is unchanged
    let aug = augment_unitary(&labeled, 4, seed, FeatureScheme::Full)?;
    println!("augmented: {} rows ({} views per parent)", aug.len(), aug.views_per_parent());
    for (i, s) in aug.samples.iter().take(5).enumerate() {
        println!(
            "  view {i}: label {:?}  min PT eigenvalue {:+.4}  source {}",
            s.label,
            min_pt_eigenvalue(&s.density(i)?)?,
            s.source.tag()
        );
    }

    let dir = std::env::temp_dir().join("entangle-ssl-datasets-example");
    std::fs::create_dir_all(&dir).map_err(|e| entangle_ssl::Error::io(&dir, e))?;
    let path = dir.join("labeled.dataset");
    save_dataset(&aug, &path)?;
    let back = load_dataset(&path)?;
    println!("\nround trip through {}: identical = {}", path.display(), back == aug);
    Ok(())
}
