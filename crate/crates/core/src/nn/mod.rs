//! Multilayer perceptron with ReLU hidden layers and a softmax output,
//! cross-entropy losses with exact backpropagation, and Adam.

mod adam;
mod loss;
mod mlp;
mod train;

pub use adam::{AdamState, BETA1, BETA2, EPSILON};
pub use loss::{cross_entropy, loss_and_grad, Batch, Gradients, LossReport, PROB_CLAMP};
pub use mlp::{argmax, Mlp};
pub use train::{evaluate_loss, steps_per_epoch, train_epochs, train_epochs_batched, TrainSet, Trainer, BATCH_SIZE};
