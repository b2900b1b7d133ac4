use std::time::{Duration, Instant};

use rayon::prelude::*;

use super::genome::check_population_size;
use super::network::{check_samples, error_unchecked};
use super::*;
use crate::error::{Error, Result};
use crate::seed;

/// Genetic-algorithm settings and training budget.
#[derive(Clone, Debug, PartialEq)]
pub struct GaParams {
    pub population_size: usize,
    pub crossover_rate: f64,
    pub mutation_rate: f64,
    /// Training stops once the best fitness exceeds this.
    pub target_fitness: f64,
    pub max_cycles: u64,
    /// Wall-clock budget; `None` disables the time stop.
    pub max_time: Option<Duration>,
    pub seed: u64,
}

impl Default for GaParams {
    fn default() -> Self {
        GaParams {
            population_size: 8192,
            crossover_rate: 0.99,
            mutation_rate: 0.01,
            target_fitness: 1.0 / MAX_TOLERABLE_ERROR,
            max_cycles: 10_000,
            max_time: Some(Duration::from_secs(60)),
            seed: 0,
        }
    }
}

impl GaParams {
    pub fn validate(&self) -> Result<()> {
        if self.population_size == 0 {
            return Err(Error::InvalidParams(
                "population size must be at least 1".into(),
            ));
        }
        for (name, p) in [
            ("crossover", self.crossover_rate),
            ("mutation", self.mutation_rate),
        ] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidParams(format!(
                    "{name} rate {p} outside [0, 1]"
                )));
            }
        }
        if self.target_fitness.is_nan() || self.target_fitness <= 0.0 {
            return Err(Error::InvalidParams(format!(
                "target fitness {} must be positive",
                self.target_fitness
            )));
        }
        if self.max_time.is_some_and(|t| t.is_zero()) {
            return Err(Error::InvalidParams("time budget must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StopReason {
    TargetFitness,
    MaxCycles,
    MaxTime,
}

impl StopReason {
    pub fn as_str(&self) -> &'static str {
        match self {
            StopReason::TargetFitness => "target_fitness",
            StopReason::MaxCycles => "max_cycles",
            StopReason::MaxTime => "max_time",
        }
    }
}

impl std::fmt::Display for StopReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for StopReason {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "target_fitness" => Ok(StopReason::TargetFitness),
            "max_cycles" => Ok(StopReason::MaxCycles),
            "max_time" => Ok(StopReason::MaxTime),
            other => Err(Error::InvalidInput(format!(
                "unknown stop reason {other:?}"
            ))),
        }
    }
}

/// What happened during one training run.
#[derive(Clone, Debug, PartialEq)]
pub struct TrainingRecord {
    /// Generations produced after the initial population.
    pub cycles: u64,
    /// Cycles the budget allows: `max_cycles`, lowered to the number that fit
    /// the time budget at the observed cycle rate when one is set.
    pub cycle_limit: u64,
    pub elapsed: Duration,
    pub best_error: f64,
    pub best_fitness: f64,
    pub stop_reason: StopReason,
    /// Best fitness seen so far, one entry per evaluated generation.
    pub best_fitness_history: Vec<f64>,
}

/// Best network found by [`train`].
#[derive(Clone, Debug, PartialEq)]
pub struct TrainedModel {
    pub codec: WeightCodec,
    pub genome: Genome,
    pub network: Network,
    pub seed: u64,
    pub record: TrainingRecord,
}

impl TrainedModel {
    pub fn topology(&self) -> &NetworkTopology {
        self.network.topology()
    }

    pub fn weights(&self) -> &[f64] {
        self.network.weights()
    }
}

/// Errors of every member, in member order.
pub fn evaluate_population(
    pop: &Population,
    codec: &WeightCodec,
    topology: &NetworkTopology,
    samples: &[Sample],
) -> Result<Vec<f64>> {
    check_samples(topology, samples)?;
    pop.members
        .par_iter()
        .map(|g| {
            let net = Network::new(*topology, g.decode(codec, topology)?)?;
            Ok(error_unchecked(&net, samples))
        })
        .collect()
}

/// Evolves networks for `samples` until the best fitness passes
/// `params.target_fitness`, `params.max_cycles` generations have been bred,
/// or the time budget runs out, whichever comes first.
///
/// With the time budget disabled the result depends only on the inputs and
/// `params.seed`.
pub fn train(
    samples: &[Sample],
    topology: &NetworkTopology,
    codec: &WeightCodec,
    params: &GaParams,
) -> Result<TrainedModel> {
    params.validate()?;
    topology.validate()?;
    check_samples(topology, samples)?;
    check_population_size(params.population_size, codec.genome_len(topology))?;

    let start = Instant::now();
    let mut init_rng = seed::stream(params.seed, 0);
    let mut pop = init_population(params.population_size, codec, topology, &mut init_rng)?;

    let mut best: Option<(Genome, f64)> = None;
    let mut history = Vec::new();
    let stop_reason = loop {
        let errors = evaluate_population(&pop, codec, topology, samples)?;
        let fitnesses: Vec<f64> = errors.iter().map(|&e| fitness(e)).collect();
        let leader =
            (0..fitnesses.len()).fold(0, |b, i| if fitnesses[i] > fitnesses[b] { i } else { b });
        if best.as_ref().is_none_or(|(_, e)| errors[leader] < *e) {
            best = Some((pop.members[leader].clone(), errors[leader]));
        }
        let best_fitness = fitness(best.as_ref().expect("set above").1);
        history.push(best_fitness);

        if best_fitness > params.target_fitness {
            break StopReason::TargetFitness;
        }
        if pop.generation >= params.max_cycles {
            break StopReason::MaxCycles;
        }
        if params.max_time.is_some_and(|t| start.elapsed() >= t) {
            break StopReason::MaxTime;
        }
        pop = evolve(
            &pop,
            &fitnesses,
            params,
            seed::derive(params.seed, pop.generation + 1),
        )?;
        log::trace!(
            "generation {} best error {}",
            pop.generation,
            best.as_ref().unwrap().1
        );
    };

    let elapsed = start.elapsed();
    let cycles = pop.generation;
    let cycle_limit = match params.max_time {
        Some(t) if cycles > 0 => {
            let per_cycle = elapsed.as_secs_f64() / cycles as f64;
            let fit = (t.as_secs_f64() / per_cycle).floor();
            if fit.is_finite() {
                params.max_cycles.min(fit as u64)
            } else {
                params.max_cycles
            }
        }
        _ => params.max_cycles,
    };
    let (genome, best_error) = best.expect("at least one generation evaluated");
    let network = Network::new(*topology, genome.decode(codec, topology)?)?;
    Ok(TrainedModel {
        codec: *codec,
        genome,
        network,
        seed: params.seed,
        record: TrainingRecord {
            cycles,
            cycle_limit,
            elapsed,
            best_error,
            best_fitness: fitness(best_error),
            stop_reason,
            best_fitness_history: history,
        },
    })
}
