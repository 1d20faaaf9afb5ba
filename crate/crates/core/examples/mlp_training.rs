//! Trains the multilayer perceptron with Adam on PPT-labeled states, with a
//! finite-difference spot check of the backpropagated gradient.
//!
//! cargo run --release --example mlp_training

use entangle_ssl::datagen::gen_labeled_2q;
use entangle_ssl::eval::accuracy;
use entangle_ssl::nn::{evaluate_loss, loss_and_grad, Mlp, TrainSet, Trainer};
use entangle_ssl::qstate::FeatureScheme;
use entangle_ssl::rng::{stream, Stream};
use entangle_ssl::Result;

fn main() -> Result<()> {
    let train = gen_labeled_2q(1000, FeatureScheme::Full, 1, Stream::Labeled)?;
    let test = gen_labeled_2q(2000, FeatureScheme::Full, 1, Stream::Test)?;
    let set = TrainSet::from_dataset(&train)?;
    let empty = TrainSet::empty(16, 2);

    let model = Mlp::new(&[16, 64, 64, 2], 5)?;
    println!("network {:?}, {} parameters", model.dims(), model.param_count());

    // one analytic partial derivative against a central difference
    let (_, grad) = loss_and_grad(&model, set.batch(), empty.batch(), 0.0)?;
    let i = 10;
    let h = 1e-5;
    let mut p = model.flat_params();
    let mut probe = model.clone();
    p[i] += h;
    probe.set_flat_params(&p)?;
    let up = evaluate_loss(&probe, &set, &empty, 0.0)?.total;
    p[i] -= 2.0 * h;
    probe.set_flat_params(&p)?;
    let down = evaluate_loss(&probe, &set, &empty, 0.0)?.total;
    println!(
        "dL/dθ[{i}]: backprop {:.8}, central difference {:.8}",
        grad.flatten()[i],
        (up - down) / (2.0 * h)
    );

    let mut trainer = Trainer::new(model, 1e-3, 64, stream(5, Stream::Shuffle, 0));
    for round in 1..=5 {
        trainer.run(&set, &empty, 0.0, 20)?;
        let loss = evaluate_loss(&trainer.model, &set, &empty, 0.0)?.total;
        let acc = accuracy(&trainer.model, &test)?;
        println!(
            "epoch {:>3}: train loss {loss:.4}  test accuracy {:.4}  per class {:?}",
            round * 20,
            acc.overall,
            acc.per_class
        );
    }
    Ok(())
}
