use crate::error::{Error, Result};

/// Three-layer network shape: input, hidden and output unit counts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct NetworkTopology {
    pub inputs: usize,
    pub hidden: usize,
    pub outputs: usize,
    /// Whether every hidden and output unit carries a bias weight.
    pub bias: bool,
}

impl NetworkTopology {
    pub fn new(inputs: usize, hidden: usize, outputs: usize) -> Result<Self> {
        let t = NetworkTopology {
            inputs,
            hidden,
            outputs,
            bias: true,
        };
        t.validate()?;
        Ok(t)
    }

    /// 4 scaled features in, one output unit per defect class.
    pub fn defect_classifier(hidden: usize) -> Result<Self> {
        Self::new(4, hidden, 6)
    }

    pub fn validate(&self) -> Result<()> {
        if self.inputs == 0 || self.hidden == 0 || self.outputs == 0 {
            return Err(Error::InvalidParams(format!(
                "every layer needs at least one unit, got {}-{}-{}",
                self.inputs, self.hidden, self.outputs
            )));
        }
        Ok(())
    }

    /// Incoming weights per hidden unit, bias included.
    pub fn hidden_fan_in(&self) -> usize {
        self.inputs + self.bias as usize
    }

    pub fn output_fan_in(&self) -> usize {
        self.hidden + self.bias as usize
    }

    pub fn weight_count(&self) -> usize {
        self.hidden * self.hidden_fan_in() + self.outputs * self.output_fan_in()
    }
}

impl std::fmt::Display for NetworkTopology {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}-{}-{}", self.inputs, self.hidden, self.outputs)
    }
}

/// Fixed-point weight encoding onto the open interval (-1, 1).
///
/// A group of `bits_per_weight` bits, most significant first, is read as an
/// unsigned integer `u` and mapped to `2 (u + 0.5) / 2^b - 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct WeightCodec {
    bits_per_weight: u32,
}

impl Default for WeightCodec {
    fn default() -> Self {
        WeightCodec {
            bits_per_weight: 16,
        }
    }
}

impl WeightCodec {
    pub fn new(bits_per_weight: u32) -> Result<Self> {
        if !(4..=32).contains(&bits_per_weight) {
            return Err(Error::InvalidParams(format!(
                "bits per weight must be in [4, 32], got {bits_per_weight}"
            )));
        }
        Ok(WeightCodec { bits_per_weight })
    }

    pub fn bits_per_weight(&self) -> u32 {
        self.bits_per_weight
    }

    pub fn genome_len(&self, topology: &NetworkTopology) -> usize {
        self.bits_per_weight as usize * topology.weight_count()
    }

    fn levels(&self) -> f64 {
        (1u64 << self.bits_per_weight) as f64
    }

    pub fn value(&self, u: u64) -> f64 {
        (u as f64 + 0.5) / self.levels() * 2.0 - 1.0
    }

    /// Integer level whose value is nearest to `w`, and whether it hits `w` exactly.
    pub fn level(&self, w: f64) -> (u64, bool) {
        let max = (1u64 << self.bits_per_weight) - 1;
        let u = ((w + 1.0) / 2.0 * self.levels() - 0.5)
            .round()
            .clamp(0.0, max as f64) as u64;
        (u, self.value(u) == w)
    }

    pub fn decode_bits(&self, bits: &[bool]) -> Vec<f64> {
        bits.chunks_exact(self.bits_per_weight as usize)
            .map(|group| self.value(group.iter().fold(0u64, |acc, &b| (acc << 1) | b as u64)))
            .collect()
    }

    pub fn encode_level(&self, u: u64, out: &mut Vec<bool>) {
        for i in (0..self.bits_per_weight).rev() {
            out.push((u >> i) & 1 == 1);
        }
    }
}
