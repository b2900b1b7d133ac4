use crate::dataset::{protocol_rounds, LabeledFeatures, RoundOutcome};
use crate::error::{Error, Result};
use crate::gann::{fitness, GaParams, NetworkTopology, StopReason, TrainedModel, WeightCodec};

pub const DEFAULT_POPULATION_SIZES: [usize; 9] = [64, 128, 256, 512, 1024, 2048, 4096, 8192, 10000];
pub const DEFAULT_CROSSOVER_RATES: [f64; 6] = [0.99, 0.9, 0.8, 0.7, 0.6, 0.5];
pub const DEFAULT_MUTATION_RATES_LOW: [f64; 7] =
    [0.001, 0.0025, 0.004, 0.0055, 0.007, 0.0085, 0.01];
pub const DEFAULT_MUTATION_RATES_HIGH: [f64; 6] = [0.01, 0.1, 0.2, 0.3, 0.4, 0.5];

/// Settings shared by every cell of a sweep.
#[derive(Clone, Debug)]
pub struct SweepConfig {
    pub topology: NetworkTopology,
    pub codec: WeightCodec,
    /// Base GA settings; `seed` is the seed of row 0 and row `i` uses `seed + i`.
    pub params: GaParams,
    /// Rounds of the repeated train/test protocol per cell; `1` trains once
    /// on the round-0 split.
    pub rounds: usize,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            topology: NetworkTopology::defect_classifier(30).expect("valid topology"),
            codec: WeightCodec::default(),
            params: GaParams::default(),
            rounds: 1,
        }
    }
}

/// One line of a tuning table.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepRow {
    pub inputs: usize,
    pub hidden: usize,
    pub outputs: usize,
    pub crossover_rate: f64,
    pub mutation_rate: f64,
    pub population_size: usize,
    pub error: f64,
    pub elapsed_cycles: u64,
    pub cycle_limit: u64,
    /// Present only for runs with a wall-clock budget.
    pub elapsed_seconds: Option<f64>,
    pub stop_reason: StopReason,
    pub accuracy_pct: f64,
}

impl SweepRow {
    pub fn fitness(&self) -> f64 {
        fitness(self.error)
    }

    pub fn from_outcome(outcome: &RoundOutcome, params: &GaParams) -> Self {
        let model: &TrainedModel = &outcome.model;
        let t = model.topology();
        let r = &model.record;
        SweepRow {
            inputs: t.inputs,
            hidden: t.hidden,
            outputs: t.outputs,
            crossover_rate: params.crossover_rate,
            mutation_rate: params.mutation_rate,
            population_size: params.population_size,
            error: r.best_error,
            elapsed_cycles: r.cycles,
            cycle_limit: r.cycle_limit,
            elapsed_seconds: params.max_time.map(|_| r.elapsed.as_secs_f64()),
            stop_reason: r.stop_reason,
            accuracy_pct: outcome.accuracy_pct(),
        }
    }
}

/// Trains and evaluates one parameter combination.
pub fn run_cell(
    data: &[LabeledFeatures],
    topology: &NetworkTopology,
    codec: &WeightCodec,
    params: &GaParams,
    rounds: usize,
) -> Result<(RoundOutcome, SweepRow)> {
    if rounds == 0 {
        return Err(Error::InvalidParams(
            "a cell needs at least one round".into(),
        ));
    }
    let outcome = protocol_rounds(data, topology, codec, params, rounds)?.into_chosen();
    let row = SweepRow::from_outcome(&outcome, params);
    Ok((outcome, row))
}

fn run_rows(
    data: &[LabeledFeatures],
    cfg: &SweepConfig,
    cells: impl IntoIterator<Item = GaParams>,
) -> Result<Vec<SweepRow>> {
    cells
        .into_iter()
        .enumerate()
        .map(|(i, p)| {
            let p = GaParams {
                seed: cfg.params.seed.wrapping_add(i as u64),
                ..p
            };
            log::info!(
                "cell {i}: M={} Pc={} Pm={}",
                p.population_size,
                p.crossover_rate,
                p.mutation_rate
            );
            run_cell(data, &cfg.topology, &cfg.codec, &p, cfg.rounds).map(|(_, row)| row)
        })
        .collect()
}

fn non_empty<T>(values: &[T], what: &str) -> Result<()> {
    if values.is_empty() {
        Err(Error::InvalidParams(format!("{what} list is empty")))
    } else {
        Ok(())
    }
}

fn check_rates(values: &[f64], what: &str) -> Result<()> {
    non_empty(values, what)?;
    match values.iter().find(|p| !(0.0..=1.0).contains(*p)) {
        Some(p) => Err(Error::InvalidParams(format!("{what} {p} outside [0, 1]"))),
        None => Ok(()),
    }
}

/// One row per population size, crossover and mutation rate held fixed.
pub fn sweep_population(
    data: &[LabeledFeatures],
    cfg: &SweepConfig,
    sizes: &[usize],
) -> Result<Vec<SweepRow>> {
    non_empty(sizes, "population size")?;
    run_rows(
        data,
        cfg,
        sizes.iter().map(|&m| GaParams {
            population_size: m,
            ..cfg.params.clone()
        }),
    )
}

/// One row per crossover rate, in the given order.
pub fn sweep_crossover(
    data: &[LabeledFeatures],
    cfg: &SweepConfig,
    rates: &[f64],
) -> Result<Vec<SweepRow>> {
    check_rates(rates, "crossover rate")?;
    run_rows(
        data,
        cfg,
        rates.iter().map(|&pc| GaParams {
            crossover_rate: pc,
            ..cfg.params.clone()
        }),
    )
}

/// One row per distinct mutation rate, ascending.
pub fn sweep_mutation(
    data: &[LabeledFeatures],
    cfg: &SweepConfig,
    rates: &[f64],
) -> Result<Vec<SweepRow>> {
    check_rates(rates, "mutation rate")?;
    let mut sorted = rates.to_vec();
    sorted.sort_by(f64::total_cmp);
    let before = sorted.len();
    sorted.dedup();
    if sorted.len() < before {
        log::warn!("dropped {} duplicate mutation rates", before - sorted.len());
    }
    run_rows(
        data,
        cfg,
        sorted.iter().map(|&pm| GaParams {
            mutation_rate: pm,
            ..cfg.params.clone()
        }),
    )
}
