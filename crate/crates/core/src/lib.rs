//! Entanglement classification of quantum states with deep semi-supervised
//! learning.
//!
//! The crate is organised bottom-up:
//!
//! - [`qstate`]: dense complex linear algebra, density matrices, the state
//!   families used for training, feature maps and analytic separability bounds.
//! - [`datagen`]: labeled and unlabeled dataset construction, lossless
//!   augmentations and the text dataset format.
//! - [`nn`]: a small multilayer perceptron with exact backprop and Adam.
//! - [`ssl`]: the pseudo-label / consistency training loop and the supervised
//!   baselines it is compared against.
//! - [`eval`]: accuracy, ROC/AUC and the white-noise bound sweep.
//! - [`experiment`]: presets and the generate / train / eval / sweep commands
//!   driven by the `entangle-ssl` binary.

pub mod datagen;
pub mod error;
pub mod eval;
pub mod experiment;
pub mod nn;
pub mod qstate;
pub mod rng;
pub mod ssl;

pub use error::{Error, Result};
