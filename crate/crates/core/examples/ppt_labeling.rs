//! Labels two-qubit states with the PPT criterion and prints their
//! Pauli-expectation features.
//!
//! cargo run --release --example ppt_labeling

use entangle_ssl::qstate::{
    bell_phi_plus, featurize, is_ppt_entangled, min_pt_eigenvalue, random_ginibre_density, rho_s,
    werner, FeatureScheme, RHO_S_THETA,
};
use entangle_ssl::rng::{stream, Stream};
use entangle_ssl::Result;

fn main() -> Result<()> {
    println!("Werner states p|Φ+⟩⟨Φ+| + (1-p) I/4, entangled above p = 1/3:");
    for p in [0.0, 0.3, 0.33, 0.34, 0.5, 1.0] {
        let rho = werner(p)?;
        println!(
            "  p = {p:<4}  min PT eigenvalue {:+.4}  {:?}",
            min_pt_eigenvalue(&rho)?,
            is_ppt_entangled(&rho)?
        );
    }

    println!("\nρ_s(p, θ = {RHO_S_THETA:.4}):");
    for p in [0.2, 0.5, 0.8] {
        println!("  p = {p}  {:?}", is_ppt_entangled(&rho_s(p, RHO_S_THETA)?)?);
    }

    let phi = bell_phi_plus();
    let full = featurize(&phi, FeatureScheme::Full)?;
    println!("\nΦ+ full features (tr(ρ σ_i ⊗ σ_j), i,j = I,X,Y,Z):");
    for row in full.chunks(4) {
        println!("  {row:+.1?}");
    }
    println!("Φ+ F1 features: {:+.1?}", featurize(&phi, FeatureScheme::F1)?);
    println!("Φ+ F2 features: {:+.1?}", featurize(&phi, FeatureScheme::F2)?);

    let mut rng = stream(7, Stream::Labeled, 0);
    let mut entangled = 0;
    let draws = 2000;
    for _ in 0..draws {
        if is_ppt_entangled(&random_ginibre_density(4, &mut rng)?)?.class() == 1 {
            entangled += 1;
        }
    }
    println!("\nrandom Ginibre states: {entangled}/{draws} entangled");
    Ok(())
}
