//! One-parameter sweeps over population size, crossover rate and mutation
//! rate, with CSV reports.

mod report;
mod sweep;

pub use report::{emit_report, format_fitness, parse_report, read_report, to_csv, REPORT_HEADER};
pub use sweep::{
    run_cell, sweep_crossover, sweep_mutation, sweep_population, SweepConfig, SweepRow,
    DEFAULT_CROSSOVER_RATES, DEFAULT_MUTATION_RATES_HIGH, DEFAULT_MUTATION_RATES_LOW,
    DEFAULT_POPULATION_SIZES,
};
