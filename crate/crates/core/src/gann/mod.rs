//! Step-activation feedforward networks whose weights are evolved as
//! fixed-length bit strings by a genetic algorithm.
//!
//! One training cycle evaluates every genome, keeps those with above-average
//! fitness, and refills the population from random survivor pairs by
//! one-point crossover and per-bit mutation. The best genome is carried over
//! unchanged.

mod codec;
mod genome;
pub mod model_io;
mod network;
mod operators;
pub mod prune;
mod train;

pub use codec::{NetworkTopology, WeightCodec};
pub use genome::{init_population, Genome, Population};
pub use network::{
    accuracy, classify, error, fitness, fitness_report, forward, one_hot, step, FitnessReport,
    Network, Sample, Verdict, FITNESS_CAP, MAX_TOLERABLE_ERROR,
};
pub use operators::{crossover, evolve, mutate, mutate_with_draws, select};
pub use train::{evaluate_population, train, GaParams, StopReason, TrainedModel, TrainingRecord};
