//! Samplers behind the datasets: Ginibre density matrices, Haar unitaries and
//! random separable two-qubit states.
//!
//! cargo run --release --example random_states

use entangle_ssl::datagen::random_separable_2q;
use entangle_ssl::qstate::{is_ppt_entangled, random_ginibre_density, random_unitary, Separability};
use entangle_ssl::rng::{stream, Stream};
use entangle_ssl::Result;

fn main() -> Result<()> {
    let mut rng = stream(1, Stream::Unlabeled, 0);
    let draws = 5000;

    let mut purity = 0.0;
    for _ in 0..draws {
        purity += random_ginibre_density(4, &mut rng)?.purity();
    }
    // 2d / (d² + 1) for square Ginibre matrices
    println!("Ginibre dim 4: mean purity {:.4} (expected {:.4})", purity / draws as f64, 8.0 / 17.0);

    let mut corner = 0.0;
    for _ in 0..draws {
        corner += random_unitary(2, &mut rng)?.as_slice()[0].norm_sqr();
    }
    println!("Haar U(2): mean |U₀₀|² {:.4} (expected 0.5)", corner / draws as f64);

    let u = random_unitary(4, &mut rng)?;
    let err = u.matmul(&u.adjoint())?.max_abs_diff(&entangle_ssl::qstate::ComplexMatrix::identity(4));
    println!("Haar U(4): max |UU† - I| = {err:.2e}");

    let mut separable = 0;
    let mut purity = 0.0;
    for _ in 0..draws {
        let rho = random_separable_2q(&mut rng)?;
        purity += rho.purity();
        separable += usize::from(is_ppt_entangled(&rho)? == Separability::Separable);
    }
    println!(
        "random product mixtures: {separable}/{draws} PPT, mean purity {:.4}",
        purity / draws as f64
    );
    Ok(())
}
