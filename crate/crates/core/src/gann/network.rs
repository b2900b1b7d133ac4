use super::NetworkTopology;
use crate::dataset::DefectClass;
use crate::error::{Error, Result};

/// Errors below this are treated as zero.
pub const MAX_TOLERABLE_ERROR: f64 = 1e-3;

/// Fitness reported for a converged (error-free) network.
pub const FITNESS_CAP: f64 = 1e6;

/// `0` for `v <= 0`, `1` for `v > 0`.
pub fn step(v: f64) -> u8 {
    (v > 0.0) as u8
}

/// A topology with its decoded weights.
#[derive(Clone, Debug, PartialEq)]
pub struct Network {
    topology: NetworkTopology,
    weights: Vec<f64>,
}

impl Network {
    pub fn new(topology: NetworkTopology, weights: Vec<f64>) -> Result<Self> {
        topology.validate()?;
        if weights.len() != topology.weight_count() {
            return Err(Error::InvalidInput(format!(
                "topology {topology} needs {} weights, got {}",
                topology.weight_count(),
                weights.len()
            )));
        }
        Ok(Network { topology, weights })
    }

    pub fn topology(&self) -> &NetworkTopology {
        &self.topology
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn forward(&self, x: &[f64]) -> Result<Vec<u8>> {
        forward(&self.topology, &self.weights, x)
    }

    /// Unchecked forward pass into caller-owned buffers.
    pub(crate) fn forward_into(&self, x: &[f64], hidden: &mut [u8], out: &mut [u8]) {
        forward_unchecked(&self.topology, &self.weights, x, hidden, out);
    }
}

fn forward_unchecked(
    t: &NetworkTopology,
    weights: &[f64],
    x: &[f64],
    hidden: &mut [u8],
    out: &mut [u8],
) {
    let (hw, ow) = weights.split_at(t.hidden * t.hidden_fan_in());
    for (h, unit) in hidden.iter_mut().zip(hw.chunks_exact(t.hidden_fan_in())) {
        let mut s: f64 = unit[..t.inputs].iter().zip(x).map(|(w, v)| w * v).sum();
        if t.bias {
            s += unit[t.inputs];
        }
        *h = step(s);
    }
    for (o, unit) in out.iter_mut().zip(ow.chunks_exact(t.output_fan_in())) {
        let mut s = 0.0;
        for (w, &h) in unit[..t.hidden].iter().zip(hidden.iter()) {
            if h == 1 {
                s += w;
            }
        }
        if t.bias {
            s += unit[t.hidden];
        }
        *o = step(s);
    }
}

/// Output unit states for input `x`.
pub fn forward(topology: &NetworkTopology, weights: &[f64], x: &[f64]) -> Result<Vec<u8>> {
    if x.len() != topology.inputs {
        return Err(Error::InvalidInput(format!(
            "network takes {} inputs, got {}",
            topology.inputs,
            x.len()
        )));
    }
    if weights.len() != topology.weight_count() {
        return Err(Error::InvalidInput(format!(
            "topology {topology} needs {} weights, got {}",
            topology.weight_count(),
            weights.len()
        )));
    }
    let mut hidden = vec![0u8; topology.hidden];
    let mut out = vec![0u8; topology.outputs];
    forward_unchecked(topology, weights, x, &mut hidden, &mut out);
    Ok(out)
}

/// Network decision for one input.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    Class(DefectClass),
    /// No unit or more than one unit fired.
    Unknown,
}

impl Verdict {
    pub fn class(&self) -> Option<DefectClass> {
        match self {
            Verdict::Class(c) => Some(*c),
            Verdict::Unknown => None,
        }
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Verdict::Class(c) => f.write_str(c.name()),
            Verdict::Unknown => f.write_str("Unknown"),
        }
    }
}

pub fn classify(outputs: &[u8]) -> Verdict {
    if outputs.len() != DefectClass::ALL.len() {
        return Verdict::Unknown;
    }
    let mut fired = outputs
        .iter()
        .enumerate()
        .filter(|(_, &o)| o == 1)
        .map(|(i, _)| i);
    match (fired.next(), fired.next()) {
        (Some(i), None) => Verdict::Class(DefectClass::ALL[i]),
        _ => Verdict::Unknown,
    }
}

/// One-hot target for `class`, in class order.
pub fn one_hot(class: DefectClass) -> Vec<u8> {
    let mut t = vec![0u8; DefectClass::ALL.len()];
    t[class.index()] = 1;
    t
}

/// One training or test vector with its binary target.
#[derive(Clone, Debug, PartialEq)]
pub struct Sample {
    pub input: Vec<f64>,
    pub target: Vec<u8>,
}

impl Sample {
    pub fn new(input: Vec<f64>, target: Vec<u8>) -> Self {
        Sample { input, target }
    }

    pub fn labeled(input: [f64; 4], class: DefectClass) -> Self {
        Sample {
            input: input.to_vec(),
            target: one_hot(class),
        }
    }
}

pub(crate) fn check_samples(topology: &NetworkTopology, samples: &[Sample]) -> Result<()> {
    if samples.is_empty() {
        return Err(Error::InvalidInput("dataset is empty".into()));
    }
    for (i, s) in samples.iter().enumerate() {
        if s.input.len() != topology.inputs || s.target.len() != topology.outputs {
            return Err(Error::InvalidInput(format!(
                "sample {i} has {} inputs and {} targets, topology {topology} expects {} and {}",
                s.input.len(),
                s.target.len(),
                topology.inputs,
                topology.outputs
            )));
        }
    }
    Ok(())
}

/// Sum of squared output errors over all samples; with binary outputs this
/// is the number of wrong output bits.
pub fn error(network: &Network, samples: &[Sample]) -> Result<f64> {
    check_samples(network.topology(), samples)?;
    Ok(error_unchecked(network, samples))
}

pub(crate) fn error_unchecked(network: &Network, samples: &[Sample]) -> f64 {
    let t = network.topology();
    let mut hidden = vec![0u8; t.hidden];
    let mut out = vec![0u8; t.outputs];
    let mut wrong = 0u64;
    for s in samples {
        network.forward_into(&s.input, &mut hidden, &mut out);
        wrong += out.iter().zip(&s.target).filter(|(o, t)| o != t).count() as u64;
    }
    wrong as f64
}

/// Inverse error, capped at [`FITNESS_CAP`] once the error is tolerable.
pub fn fitness(error: f64) -> f64 {
    if error < MAX_TOLERABLE_ERROR {
        FITNESS_CAP
    } else {
        1.0 / error
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FitnessReport {
    pub error: f64,
    pub fitness: f64,
    pub converged: bool,
}

pub fn fitness_report(error: f64) -> FitnessReport {
    FitnessReport {
        error,
        fitness: fitness(error),
        converged: error < MAX_TOLERABLE_ERROR,
    }
}

/// Number of samples whose verdict matches their one-hot target; unknown
/// verdicts count as wrong.
pub fn accuracy(network: &Network, samples: &[Sample]) -> Result<usize> {
    check_samples(network.topology(), samples)?;
    let mut correct = 0;
    for s in samples {
        let verdict = classify(&network.forward(&s.input)?);
        if verdict != Verdict::Unknown && verdict == classify(&s.target) {
            correct += 1;
        }
    }
    Ok(correct)
}
