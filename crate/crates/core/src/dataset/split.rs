use super::DefectClass;
use crate::error::{Error, Result};

/// Share of the corpus used for training in every round (53 of 100).
pub const TRAIN_FRACTION: f64 = 0.53;

/// Disjoint train/test index sets for one round.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitPlan {
    pub round: usize,
    /// Sorted corpus indices.
    pub train: Vec<usize>,
    /// Sorted corpus indices; everything not in `train`.
    pub test: Vec<usize>,
}

/// Largest-remainder apportionment of `total` over `weights`; ties go to the
/// earlier entry.
fn apportion(weights: &[usize], total: usize) -> Vec<usize> {
    let sum: usize = weights.iter().sum();
    if sum == 0 {
        return vec![0; weights.len()];
    }
    let mut out: Vec<usize> = weights.iter().map(|&w| w * total / sum).collect();
    let mut order: Vec<usize> = (0..weights.len()).collect();
    order.sort_by_key(|&i| std::cmp::Reverse(weights[i] * total % sum));
    let short = total - out.iter().sum::<usize>();
    for &i in order.iter().take(short) {
        out[i] += 1;
    }
    out
}

/// Training and testing sizes for a corpus of `n` items.
pub fn split_sizes(n: usize) -> (usize, usize) {
    let train = ((n as f64 * TRAIN_FRACTION).round() as usize).min(n);
    (train, n - train)
}

fn by_class(labels: &[DefectClass], members: &[usize]) -> Vec<Vec<usize>> {
    let mut groups = vec![Vec::new(); DefectClass::ALL.len()];
    for &i in members {
        groups[labels[i].index()].push(i);
    }
    groups
}

/// Split for `round` of the rotating protocol.
///
/// Round 0 trains on the first 53% of each class (largest-remainder
/// rounding, 53 of 100 for the default corpus). Each later round keeps half
/// of the previous training set, the most recently added members of each
/// class, and fills the other half from the previous test set, oldest first,
/// so every class keeps its round-0 training count.
pub fn make_split(labels: &[DefectClass], round: usize) -> Result<SplitPlan> {
    if labels.is_empty() {
        return Err(Error::InvalidInput("cannot split an empty corpus".into()));
    }
    let n = labels.len();
    let all: Vec<usize> = (0..n).collect();
    let class_sizes: Vec<usize> = by_class(labels, &all).iter().map(Vec::len).collect();
    let (train_total, _) = split_sizes(n);
    let quota = apportion(&class_sizes, train_total);

    let mut train: Vec<usize> = by_class(labels, &all)
        .iter()
        .zip(&quota)
        .flat_map(|(members, &q)| members[..q].to_vec())
        .collect();
    train.sort_unstable();

    for _ in 0..round {
        let test = complement(n, &train);
        let train_groups = by_class(labels, &train);
        let test_groups = by_class(labels, &test);
        let keep = apportion(&quota, train_total / 2);

        let mut next = Vec::with_capacity(train_total);
        for c in 0..DefectClass::ALL.len() {
            let t = &train_groups[c];
            let k = keep[c].min(t.len());
            next.extend_from_slice(&t[t.len() - k..]);
            let need = quota[c] - k;
            next.extend(test_groups[c].iter().take(need));
        }
        // Classes too small to refill leave a gap; close it from the rest of
        // the test pool.
        if next.len() < train_total {
            let missing = train_total - next.len();
            let extra: Vec<usize> = test
                .iter()
                .copied()
                .filter(|i| !next.contains(i))
                .take(missing)
                .collect();
            next.extend(extra);
        }
        next.sort_unstable();
        train = next;
    }

    let test = complement(n, &train);
    Ok(SplitPlan { round, train, test })
}

fn complement(n: usize, members: &[usize]) -> Vec<usize> {
    let mut inside = vec![false; n];
    for &i in members {
        inside[i] = true;
    }
    (0..n).filter(|&i| !inside[i]).collect()
}
