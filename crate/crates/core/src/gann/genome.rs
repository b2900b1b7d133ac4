use rand::Rng;

use super::{NetworkTopology, WeightCodec};
use crate::error::{Error, Result};

/// Fixed-length bit string encoding one complete weight set.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Genome {
    bits: Vec<bool>,
}

impl Genome {
    pub fn from_bits(bits: Vec<bool>) -> Self {
        Genome { bits }
    }

    /// Parses `'0'`/`'1'` characters; anything else is rejected.
    pub fn parse(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::InvalidInput(format!(
                    "bit string contains {other:?}"
                ))),
            })
            .collect::<Result<Vec<_>>>()
            .map(Genome::from_bits)
    }

    pub fn random<R: Rng + ?Sized>(len: usize, rng: &mut R) -> Self {
        Genome {
            bits: (0..len).map(|_| rng.gen::<bool>()).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub(crate) fn bits_mut(&mut self) -> &mut [bool] {
        &mut self.bits
    }

    pub fn count_ones(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    /// Decoded weights, layer by layer and unit by unit, bias last per unit.
    pub fn decode(&self, codec: &WeightCodec, topology: &NetworkTopology) -> Result<Vec<f64>> {
        let expected = codec.genome_len(topology);
        if self.bits.len() != expected {
            return Err(Error::InvalidGenome {
                expected,
                actual: self.bits.len(),
            });
        }
        Ok(codec.decode_bits(&self.bits))
    }

    /// Exact inverse of [`Genome::decode`] for weights that lie on the codec grid.
    pub fn encode(weights: &[f64], codec: &WeightCodec) -> Result<Self> {
        let mut bits = Vec::with_capacity(weights.len() * codec.bits_per_weight() as usize);
        for &w in weights {
            let (u, exact) = codec.level(w);
            if !exact {
                return Err(Error::InvalidInput(format!(
                    "weight {w} is not representable with {} bits",
                    codec.bits_per_weight()
                )));
            }
            codec.encode_level(u, &mut bits);
        }
        Ok(Genome { bits })
    }
}

impl std::fmt::Display for Genome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// One generation of equal-length genomes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Population {
    pub members: Vec<Genome>,
    pub generation: u64,
}

impl Population {
    pub fn new(members: Vec<Genome>, generation: u64) -> Result<Self> {
        let Some(first) = members.first() else {
            return Err(Error::InvalidParams("population must not be empty".into()));
        };
        let n = first.len();
        if n == 0 {
            return Err(Error::InvalidParams(
                "genomes must have at least one bit".into(),
            ));
        }
        if let Some(g) = members.iter().find(|g| g.len() != n) {
            return Err(Error::InvalidGenome {
                expected: n,
                actual: g.len(),
            });
        }
        Ok(Population {
            members,
            generation,
        })
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn genome_len(&self) -> usize {
        self.members.first().map_or(0, Genome::len)
    }
}

/// Fails unless `1 <= size < 2^genome_len`.
pub(crate) fn check_population_size(size: usize, genome_len: usize) -> Result<()> {
    if size == 0 {
        return Err(Error::InvalidParams(
            "population size must be at least 1".into(),
        ));
    }
    if genome_len < 64 && (size as u128) >= (1u128 << genome_len) {
        return Err(Error::InvalidParams(format!(
            "population size {size} must be below 2^{genome_len}"
        )));
    }
    Ok(())
}

/// `size` genomes of independent uniform bits.
pub fn init_population<R: Rng + ?Sized>(
    size: usize,
    codec: &WeightCodec,
    topology: &NetworkTopology,
    rng: &mut R,
) -> Result<Population> {
    topology.validate()?;
    let n = codec.genome_len(topology);
    check_population_size(size, n)?;
    let members = (0..size).map(|_| Genome::random(n, rng)).collect();
    Population::new(members, 0)
}
