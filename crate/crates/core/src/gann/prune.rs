//! Hidden-layer pruning: retrains the classifier at decreasing hidden widths
//! so the smallest adequate layer can be read off the resulting table.

use crate::dataset::LabeledFeatures;
use crate::error::{Error, Result};
use crate::experiments::{run_cell, SweepConfig, SweepRow};
use crate::gann::{NetworkTopology, TrainedModel};

/// Hidden widths to try: `start` down to `stop` in steps of `step`, plus
/// any `extra` widths inside that range.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PruneSchedule {
    pub start: usize,
    pub step: usize,
    pub stop: usize,
    pub extra: Vec<usize>,
}

impl Default for PruneSchedule {
    fn default() -> Self {
        PruneSchedule {
            start: 30,
            step: 2,
            stop: 8,
            extra: vec![9],
        }
    }
}

impl PruneSchedule {
    pub fn widths(&self) -> Result<Vec<usize>> {
        if self.step == 0 || self.stop == 0 || self.stop > self.start {
            return Err(Error::InvalidParams(format!(
                "prune schedule needs 0 < stop <= start and step > 0, got {}..{} by {}",
                self.start, self.stop, self.step
            )));
        }
        let mut w: Vec<usize> = (self.stop..=self.start).rev().step_by(self.step).collect();
        w.extend(
            self.extra
                .iter()
                .copied()
                .filter(|h| (self.stop..=self.start).contains(h)),
        );
        w.sort_unstable_by(|a, b| b.cmp(a));
        w.dedup();
        Ok(w)
    }
}

/// One entry of a pruning run.
#[derive(Clone, Debug)]
pub struct PruneStep {
    pub model: TrainedModel,
    pub row: SweepRow,
}

/// Trains one network per scheduled width, widest first. Row `i` uses seed
/// `cfg.params.seed + i`; the topology's hidden width in `cfg` is ignored.
pub fn prune_hidden(
    data: &[LabeledFeatures],
    cfg: &SweepConfig,
    schedule: &PruneSchedule,
) -> Result<Vec<PruneStep>> {
    schedule
        .widths()?
        .into_iter()
        .enumerate()
        .map(|(i, h)| {
            let topology = NetworkTopology {
                hidden: h,
                ..cfg.topology
            };
            let params = crate::gann::GaParams {
                seed: cfg.params.seed.wrapping_add(i as u64),
                ..cfg.params.clone()
            };
            log::info!("pruning step {i}: {topology}");
            let (outcome, row) = run_cell(data, &topology, &cfg.codec, &params, cfg.rounds)?;
            Ok(PruneStep {
                model: outcome.model,
                row,
            })
        })
        .collect()
}
