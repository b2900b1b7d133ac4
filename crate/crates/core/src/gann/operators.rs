use rand::Rng;
use rayon::prelude::*;

use super::{GaParams, Genome, Population};
use crate::error::{Error, Result};
use crate::seed;

/// Indices of members whose fitness is strictly above the population mean.
/// When none is (all fitnesses equal), every member survives.
pub fn select(fitnesses: &[f64]) -> Vec<usize> {
    if fitnesses.is_empty() {
        return Vec::new();
    }
    let mean = fitnesses.iter().sum::<f64>() / fitnesses.len() as f64;
    let survivors: Vec<usize> = (0..fitnesses.len())
        .filter(|&i| fitnesses[i] > mean)
        .collect();
    if survivors.is_empty() {
        (0..fitnesses.len()).collect()
    } else {
        survivors
    }
}

/// One-point crossover: both children keep their parent's first `split` bits
/// and take the remaining bits from the other parent.
pub fn crossover(a: &Genome, b: &Genome, split: usize) -> Result<(Genome, Genome)> {
    if a.len() != b.len() {
        return Err(Error::InvalidInput(format!(
            "crossover of genomes with lengths {} and {}",
            a.len(),
            b.len()
        )));
    }
    if split == 0 || split >= a.len() {
        return Err(Error::InvalidInput(format!(
            "split point {split} outside [1, {}]",
            a.len().saturating_sub(1)
        )));
    }
    let (ah, at) = a.bits().split_at(split);
    let (bh, bt) = b.bits().split_at(split);
    Ok((
        Genome::from_bits([ah, bt].concat()),
        Genome::from_bits([bh, at].concat()),
    ))
}

/// Flips each bit whose draw from `draws` is below `rate`; one draw per bit,
/// left to right.
pub fn mutate_with_draws(g: &Genome, rate: f64, mut draws: impl FnMut() -> f64) -> Genome {
    let mut out = g.clone();
    for bit in out.bits_mut() {
        if draws() < rate {
            *bit = !*bit;
        }
    }
    out
}

/// Per-bit mutation: every bit flips independently with probability `rate`.
///
/// Rather than one draw per bit, the distance to the next flipped bit is
/// drawn from the matching geometric distribution, which gives the same
/// flip pattern distribution at a fraction of the cost for small rates.
pub fn mutate<R: Rng + ?Sized>(g: &Genome, rate: f64, rng: &mut R) -> Genome {
    let mut out = g.clone();
    let bits = out.bits_mut();
    if rate <= 0.0 {
        return out;
    }
    if rate >= 1.0 {
        bits.iter_mut().for_each(|b| *b = !*b);
        return out;
    }
    let log_keep = (-rate).ln_1p();
    let mut i = 0usize;
    loop {
        // u in (0, 1]
        let u = 1.0 - rng.gen::<f64>();
        let gap = (u.ln() / log_keep).floor();
        if gap >= (bits.len() - i) as f64 {
            break;
        }
        i += gap as usize;
        bits[i] = !bits[i];
        i += 1;
    }
    out
}

/// Produces the next generation from `pop` and its member fitnesses.
///
/// Offspring come in pairs. Each pair draws two survivors uniformly with
/// replacement, crosses them with probability `crossover_rate` (otherwise
/// copies them) and mutates both children. Pair `k` uses its own random
/// stream derived from `stream_seed`, so the result does not depend on how
/// pairs are scheduled across threads. The fittest old member (first on
/// ties) replaces offspring 0.
pub fn evolve(
    pop: &Population,
    fitnesses: &[f64],
    params: &GaParams,
    stream_seed: u64,
) -> Result<Population> {
    if fitnesses.len() != pop.len() {
        return Err(Error::InvalidInput(format!(
            "{} fitness values for {} members",
            fitnesses.len(),
            pop.len()
        )));
    }
    params.validate()?;
    let survivors = select(fitnesses);
    let m = params.population_size;
    let n = pop.genome_len();

    let mut offspring: Vec<Genome> = (0..m.div_ceil(2))
        .into_par_iter()
        .flat_map_iter(|k| {
            let mut rng = seed::stream(stream_seed, k as u64);
            let a = &pop.members[survivors[rng.gen_range(0..survivors.len())]];
            let b = &pop.members[survivors[rng.gen_range(0..survivors.len())]];
            let (c1, c2) = if n >= 2 && rng.gen::<f64>() < params.crossover_rate {
                let split = rng.gen_range(1..n);
                crossover(a, b, split).expect("equal lengths, valid split")
            } else {
                (a.clone(), b.clone())
            };
            let c1 = mutate(&c1, params.mutation_rate, &mut rng);
            let c2 = mutate(&c2, params.mutation_rate, &mut rng);
            [c1, c2]
        })
        .collect();
    offspring.truncate(m);

    let elite = fitnesses.iter().enumerate().fold(
        0,
        |best, (i, &f)| if f > fitnesses[best] { i } else { best },
    );
    offspring[0] = pop.members[elite].clone();
    Population::new(offspring, pop.generation + 1)
}
