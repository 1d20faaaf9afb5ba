//! Separability thresholds of noisy GHZ states and the labels they induce.
//!
//! cargo run --release --example ghz_bounds

use entangle_ssl::datagen::{fuzzy_intervals, label_ghz, GhzMode, GhzTask};
use entangle_ssl::qstate::{bound_k_separable, features_ghz, ghz_noisy};
use entangle_ssl::Result;

fn main() -> Result<()> {
    println!(" n  k  b_k     source");
    for n in 3..=7 {
        for k in 2..=n {
            if let Ok(b) = bound_k_separable(n, k) {
                println!("{n:>2} {k:>2}  {:.4}  {:?}", b.value, b.kind);
            }
        }
    }

    let three = GhzTask::new(3, GhzMode::ThreeClass)?;
    println!("\nthree-qubit classes (0 fully separable, 1 biseparable, 2 genuine):");
    for p in [0.1, 0.25, 0.4, 0.6] {
        println!("  p = {p}: class {}", label_ghz(3, p, &three)?);
    }

    for a in [7.0 / 8.0, 3.0 / 4.0, 1.0 / 2.0] {
        let (sep, nonsep) = fuzzy_intervals(4, a)?;
        println!(
            "n = 4, a = {a}: 3-separable training p in [0, {:.5}], 3-nonseparable in [{:.5}, 1]",
            sep.hi, nonsep.lo
        );
    }

    let f = features_ghz(&ghz_noisy(4, 0.5)?, 4)?;
    println!("\n⟨M_x⟩/⟨M_z⟩ features of ρ(4, 0.5): {f:.3?}");
    Ok(())
}
