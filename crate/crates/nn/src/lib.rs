//! Minimal dense-network stack used by every learned component in the
//! workspace: row-major matrices, fully-connected layers with cached
//! reverse-mode gradients, a numerically stable softmax, Adam, and a
//! versioned binary checkpoint format.
//!
//! Everything is 64-bit and single-threaded by design; the networks here
//! are desk-scale and reproducibility matters more than throughput.

pub mod adam;
pub mod checkpoint;
pub mod error;
pub mod mat;
pub mod mlp;
pub mod ops;
pub mod param;

pub use adam::Adam;
pub use error::NnError;
pub use mat::Mat;
pub use mlp::{Activation, Mlp, MlpCache, MlpSpec};
pub use ops::{softmax, softmax_in_place};
pub use param::ParamSet;
