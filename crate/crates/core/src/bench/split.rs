use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::BenchError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SplitSpec {
    pub train_fraction: f64,
    pub stratified: bool,
    pub seed: u64,
}

impl Default for SplitSpec {
    fn default() -> Self {
        Self {
            train_fraction: 0.6,
            stratified: true,
            seed: 0,
        }
    }
}

/// Row indices of the two halves, each in ascending order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Split {
    pub train: Vec<usize>,
    pub test: Vec<usize>,
}

/// Splits rows into train and test halves. The test half has
/// `ceil((1 - train_fraction) n)` rows; with stratification they are shared
/// between the classes by largest remainder.
pub fn train_test_split(y: &[bool], spec: &SplitSpec) -> Result<Split, BenchError> {
    if !(spec.train_fraction > 0.0 && spec.train_fraction < 1.0) {
        return Err(BenchError::InvalidSplit(format!(
            "train fraction {} outside (0, 1)",
            spec.train_fraction
        )));
    }
    let n = y.len();
    let n_test = ((1.0 - spec.train_fraction) * n as f64 - 1e-9).ceil() as usize;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut test = Vec::with_capacity(n_test);
    if spec.stratified {
        let mut classes: Vec<Vec<usize>> = [true, false]
            .iter()
            .map(|&c| (0..n).filter(|&i| y[i] == c).collect())
            .collect();
        let share: Vec<f64> = classes.iter().map(|c| n_test as f64 * c.len() as f64 / n as f64).collect();
        let mut take: Vec<usize> = share.iter().map(|s| s.floor() as usize).collect();
        let mut order = [0usize, 1];
        order.sort_by(|&a, &b| {
            let fa = share[a] - share[a].floor();
            let fb = share[b] - share[b].floor();
            fb.partial_cmp(&fa).unwrap().then(classes[b].len().cmp(&classes[a].len()))
        });
        let mut left = n_test - take.iter().sum::<usize>();
        for &c in order.iter().cycle() {
            if left == 0 {
                break;
            }
            take[c] += 1;
            left -= 1;
        }
        for (c, members) in classes.iter_mut().enumerate() {
            members.shuffle(&mut rng);
            test.extend_from_slice(&members[..take[c].min(members.len())]);
        }
    } else {
        let mut all: Vec<usize> = (0..n).collect();
        all.shuffle(&mut rng);
        test.extend_from_slice(&all[..n_test]);
    }
    test.sort_unstable();
    let train: Vec<usize> = (0..n).filter(|i| test.binary_search(i).is_err()).collect();
    for (half, idx) in [("train", &train), ("test", &test)] {
        let pos = idx.iter().filter(|&&i| y[i]).count();
        if pos == 0 || pos == idx.len() {
            return Err(BenchError::DegenerateSplit(half));
        }
    }
    Ok(Split { train, test })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventy_two_rumours_split_like_the_reference() {
        let y: Vec<bool> = (0..72).map(|i| i < 41).collect();
        let s = train_test_split(&y, &SplitSpec::default()).unwrap();
        assert_eq!(s.test.len(), 29);
        assert_eq!(s.test.iter().filter(|&&i| y[i]).count(), 17);
        assert_eq!(s.train.iter().filter(|&&i| y[i]).count(), 24);
        let mut all: Vec<usize> = s.train.iter().chain(&s.test).copied().collect();
        all.sort_unstable();
        assert_eq!(all, (0..72).collect::<Vec<_>>());
    }

    #[test]
    fn single_class_half_is_rejected() {
        let y = [true, true, true, false];
        let err = train_test_split(&y, &SplitSpec { train_fraction: 0.75, ..SplitSpec::default() }).unwrap_err();
        assert!(matches!(err, BenchError::DegenerateSplit(_)));
    }

    #[test]
    fn deterministic_under_seed() {
        let y: Vec<bool> = (0..50).map(|i| i % 3 == 0).collect();
        let spec = SplitSpec { seed: 9, ..SplitSpec::default() };
        assert_eq!(train_test_split(&y, &spec).unwrap(), train_test_split(&y, &spec).unwrap());
    }
}
