//! The semi-supervised loop on four-qubit noisy GHZ states (biseparable vs
//! not), next to the supervised baselines on the same labeled set.
//!
//! cargo run --release --example ssl_loop

use entangle_ssl::eval::accuracy;
use entangle_ssl::experiment::{generate_seed, preset};
use entangle_ssl::ssl::{sl_train, slk_train, ssl_train};
use entangle_ssl::Result;

fn main() -> Result<()> {
    let mut cfg = preset("ghzN-k2-4-30")?;
    cfg.train.outer_steps = 8;
    let seed = 2;
    let data = generate_seed(&cfg, seed)?;
    let test = &data.tests[0].1;
    let train = cfg.train_for(seed);
    println!(
        "l = {}, u = {}, test = {}, τ = {}, K₁ = {}, K₂ = {}",
        data.labeled.len(),
        data.unlabeled.len(),
        test.len(),
        train.tau,
        train.k_labeled,
        train.k_unlabeled
    );

    let run = ssl_train(&data.labeled, &data.unlabeled, &data.validation, &train)?;
    println!("\n t  λ_u     pseudo-labels  validation");
    for t in 0..run.models.len() {
        let (lambda, count) = if t == 0 {
            (0.0, 0)
        } else {
            (run.lambda_u[t - 1], run.pseudo_counts[t - 1])
        };
        println!("{t:>2}  {lambda:.4}  {count:>13}  {:.4}", run.validation_accuracy[t]);
    }
    println!("selected model {}", run.selected);

    let ssl = accuracy(run.best(), test)?.overall;
    let sl = accuracy(&sl_train(&data.labeled, &train)?, test)?.overall;
    let slk = accuracy(&slk_train(&data.labeled, &train)?, test)?.overall;
    println!("\ntest accuracy  SL {sl:.4}  SLK {slk:.4}  SSL {ssl:.4}");
    Ok(())
}
