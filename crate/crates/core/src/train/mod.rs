//! Training loop for the three device-oriented phases, with Adam on exact
//! gradients and gradient-free SPSA.

mod optim;
mod trainer;

pub use optim::{Adam, Spsa};
pub use trainer::{
    bce_loss, evaluate_loss, spsa_step, train, EpochRecord, OptimizerConfig, Phase, TrainConfig, TrainHistory,
};
