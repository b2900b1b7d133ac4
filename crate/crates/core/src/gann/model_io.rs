//! Line-oriented text format for trained models.
//!
//! ```text
//! textile-inspect-model 1
//! topology 4 26 6
//! bias 1
//! bits_per_weight 16
//! seed 42
//! stop_reason max_cycles
//! cycles 1000
//! error 7
//! weights 292
//! -0.99996948242187500
//! ...
//! ```
//!
//! Weights are written one per line in decode order using the shortest
//! decimal that parses back to the same `f64`. The timing of the run is not
//! stored, so a seeded run without a time budget always writes the same bytes.

use std::fmt::Write as _;
use std::path::Path;
use std::time::Duration;

use super::*;
use crate::error::{Error, Result};

const MAGIC: &str = "textile-inspect-model";
const VERSION: u32 = 1;

pub fn to_string(model: &TrainedModel) -> String {
    let t = model.topology();
    let r = &model.record;
    let mut s = String::new();
    writeln!(s, "{MAGIC} {VERSION}").unwrap();
    writeln!(s, "topology {} {} {}", t.inputs, t.hidden, t.outputs).unwrap();
    writeln!(s, "bias {}", t.bias as u8).unwrap();
    writeln!(s, "bits_per_weight {}", model.codec.bits_per_weight()).unwrap();
    writeln!(s, "seed {}", model.seed).unwrap();
    writeln!(s, "stop_reason {}", r.stop_reason).unwrap();
    writeln!(s, "cycles {}", r.cycles).unwrap();
    writeln!(s, "error {}", r.best_error).unwrap();
    writeln!(s, "weights {}", model.weights().len()).unwrap();
    for w in model.weights() {
        writeln!(s, "{w}").unwrap();
    }
    s
}

fn field<'a>(
    lines: &mut impl Iterator<Item = (usize, &'a str)>,
    key: &str,
) -> std::result::Result<Vec<&'a str>, String> {
    let (no, line) = lines
        .next()
        .ok_or_else(|| format!("missing `{key}` line"))?;
    let mut parts = line.split_whitespace();
    if parts.next() != Some(key) {
        return Err(format!("line {}: expected `{key}`", no + 1));
    }
    Ok(parts.collect())
}

fn num<T: std::str::FromStr>(s: Option<&&str>, what: &str) -> std::result::Result<T, String> {
    s.and_then(|v| v.parse().ok())
        .ok_or_else(|| format!("bad {what}"))
}

pub fn parse(text: &str) -> std::result::Result<TrainedModel, String> {
    let mut lines = text.lines().enumerate();
    let header = field(&mut lines, MAGIC)?;
    let version: u32 = num(header.first(), "format version")?;
    if version != VERSION {
        return Err(format!("unsupported format version {version}"));
    }
    let topo = field(&mut lines, "topology")?;
    let bias = field(&mut lines, "bias")?;
    let topology = NetworkTopology {
        inputs: num(topo.first(), "input count")?,
        hidden: num(topo.get(1), "hidden count")?,
        outputs: num(topo.get(2), "output count")?,
        bias: num::<u8>(bias.first(), "bias flag")? == 1,
    };
    topology.validate().map_err(|e| e.to_string())?;
    let bits: u32 = num(
        field(&mut lines, "bits_per_weight")?.first(),
        "bits per weight",
    )?;
    let codec = WeightCodec::new(bits).map_err(|e| e.to_string())?;
    let seed: u64 = num(field(&mut lines, "seed")?.first(), "seed")?;
    let stop_reason: StopReason = field(&mut lines, "stop_reason")?
        .first()
        .ok_or("missing stop reason")?
        .parse()
        .map_err(|e: Error| e.to_string())?;
    let cycles: u64 = num(field(&mut lines, "cycles")?.first(), "cycle count")?;
    let best_error: f64 = num(field(&mut lines, "error")?.first(), "error")?;
    let count: usize = num(field(&mut lines, "weights")?.first(), "weight count")?;
    if count != topology.weight_count() {
        return Err(format!(
            "{count} weights declared, topology {topology} needs {}",
            topology.weight_count()
        ));
    }
    let weights = lines
        .by_ref()
        .take(count)
        .map(|(no, l)| {
            l.trim()
                .parse::<f64>()
                .map_err(|_| format!("line {}: bad weight {l:?}", no + 1))
        })
        .collect::<std::result::Result<Vec<_>, _>>()?;
    if weights.len() != count {
        return Err(format!("truncated: {} of {count} weights", weights.len()));
    }
    if let Some((no, _)) = lines.find(|(_, l)| !l.trim().is_empty()) {
        return Err(format!("line {}: trailing data", no + 1));
    }
    let genome = Genome::encode(&weights, &codec).map_err(|e| e.to_string())?;
    let network = Network::new(topology, weights).map_err(|e| e.to_string())?;
    Ok(TrainedModel {
        codec,
        genome,
        network,
        seed,
        record: TrainingRecord {
            cycles,
            cycle_limit: cycles,
            elapsed: Duration::ZERO,
            best_error,
            best_fitness: fitness(best_error),
            stop_reason,
            best_fitness_history: Vec::new(),
        },
    })
}

pub fn save(model: &TrainedModel, path: &Path) -> Result<()> {
    std::fs::write(path, to_string(model)).map_err(|e| Error::io(path, e))
}

pub fn load(path: &Path) -> Result<TrainedModel> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse(&text).map_err(|m| Error::format(path, m))
}
