use super::{make_split, LabeledFeatures, SplitPlan};
use crate::error::{Error, Result};
use crate::gann::{accuracy, train, GaParams, NetworkTopology, Sample, TrainedModel, WeightCodec};
use crate::seed;

/// One train/test round.
#[derive(Clone, Debug)]
pub struct RoundOutcome {
    pub plan: SplitPlan,
    pub model: TrainedModel,
    /// Correct verdicts over the whole corpus.
    pub correct: usize,
    pub total: usize,
}

impl RoundOutcome {
    pub fn accuracy_pct(&self) -> f64 {
        100.0 * self.correct as f64 / self.total as f64
    }
}

#[derive(Clone, Debug)]
pub struct ProtocolResult {
    pub rounds: Vec<RoundOutcome>,
    /// Index into `rounds` of the reported result.
    pub chosen: usize,
}

impl ProtocolResult {
    pub fn chosen(&self) -> &RoundOutcome {
        &self.rounds[self.chosen]
    }

    pub fn into_chosen(mut self) -> RoundOutcome {
        self.rounds.swap_remove(self.chosen)
    }
}

/// Index of the reported value: the most frequent value, or when several
/// values tie for most frequent (including all values distinct) the one of
/// those closest to the mean of all values, lower value on a tie. The first
/// position holding the reported value is returned.
pub fn modal_choice(values: &[usize]) -> Option<usize> {
    if values.is_empty() {
        return None;
    }
    let freq = |v: usize| values.iter().filter(|&&x| x == v).count();
    let top = values.iter().map(|&v| freq(v)).max()?;
    let mean = values.iter().sum::<usize>() as f64 / values.len() as f64;
    let best = values
        .iter()
        .copied()
        .filter(|&v| freq(v) == top)
        .min_by(|&a, &b| {
            let (da, db) = ((a as f64 - mean).abs(), (b as f64 - mean).abs());
            da.total_cmp(&db).then(a.cmp(&b))
        })?;
    values.iter().position(|&v| v == best)
}

/// Trains once per split round and tests each model on the whole corpus.
///
/// Round `r` trains with seed `derive(params.seed, r)`. The reported round is
/// chosen by [`modal_choice`] over the correct counts.
pub fn repeated_train_eval(
    data: &[LabeledFeatures],
    topology: &NetworkTopology,
    codec: &WeightCodec,
    params: &GaParams,
    rounds: usize,
) -> Result<ProtocolResult> {
    if !(3..=5).contains(&rounds) {
        return Err(Error::InvalidParams(format!(
            "rounds must be 3 to 5, got {rounds}"
        )));
    }
    run_rounds(data, topology, codec, params, rounds)
}

/// Same as [`repeated_train_eval`] without the bound on `rounds`.
pub(crate) fn run_rounds(
    data: &[LabeledFeatures],
    topology: &NetworkTopology,
    codec: &WeightCodec,
    params: &GaParams,
    rounds: usize,
) -> Result<ProtocolResult> {
    let labels: Vec<_> = data.iter().map(|d| d.class).collect();
    let all: Vec<Sample> = data.iter().map(LabeledFeatures::sample).collect();
    let mut outcomes = Vec::with_capacity(rounds);
    for round in 0..rounds {
        let plan = make_split(&labels, round)?;
        let train_set: Vec<Sample> = plan.train.iter().map(|&i| all[i].clone()).collect();
        let round_params = GaParams {
            seed: seed::derive(params.seed, round as u64),
            ..params.clone()
        };
        let model = train(&train_set, topology, codec, &round_params)?;
        let correct = accuracy(&model.network, &all)?;
        log::info!(
            "round {round}: error {} after {} cycles ({}), {correct}/{} correct",
            model.record.best_error,
            model.record.cycles,
            model.record.stop_reason,
            all.len()
        );
        outcomes.push(RoundOutcome {
            plan,
            model,
            correct,
            total: all.len(),
        });
    }
    let counts: Vec<usize> = outcomes.iter().map(|o| o.correct).collect();
    let chosen = modal_choice(&counts).expect("at least one round");
    Ok(ProtocolResult {
        rounds: outcomes,
        chosen,
    })
}
