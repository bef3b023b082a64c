//! Dense linear algebra, seeded RNG streams, feedforward networks with exact
//! reverse-mode gradients, and an adaptive first-order optimizer.

pub mod checkpoint;
pub mod matrix;
pub mod mlp;
pub mod optim;
pub mod rng;

pub use matrix::Matrix;
pub use mlp::{Activation, Mlp, MlpCache};
pub use optim::AdamState;
pub use rng::{gaussian_sample, RngStream};
