//! Synthetic designs and hand-checkable learner fixtures.
#![allow(dead_code)]

use ndarray::Array2;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rumour_core::learn::{Criterion, DecisionTree, Design};

pub fn names(m: usize) -> Vec<String> {
    (0..m).map(|j| format!("f{j:02}")).collect()
}

/// `n` rows of `m` standard-normal columns; the label is the sign of column
/// `planted` plus Gaussian noise of scale `noise`.
pub fn planted_design(n: usize, m: usize, planted: usize, noise: f64, seed: u64) -> Design<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let x = Array2::from_shape_fn((n, m), |_| rng.sample::<f64, _>(StandardNormal));
    let y = (0..n)
        .map(|i| x[[i, planted]] + noise * rng.sample::<f64, _>(StandardNormal) > 0.0)
        .collect();
    Design::new(names(m), x, y)
}

/// Pure noise: features and labels independent.
pub fn null_design(n: usize, m: usize, seed: u64) -> Design<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let x = Array2::from_shape_fn((n, m), |_| rng.sample::<f64, _>(StandardNormal));
    let y = (0..n).map(|_| rng.random_bool(0.5)).collect();
    Design::new(names(m), x, y)
}

pub fn xor() -> (Array2<f64>, Vec<bool>) {
    let x = ndarray::array![[0.0, 0.0], [0.0, 1.0], [1.0, 0.0], [1.0, 1.0]];
    (x, vec![false, true, true, false])
}

/// Weighted child impurity of splitting `rows` on `x[f] <= t`.
pub fn child_impurity(x: &Array2<f64>, y: &[bool], f: usize, t: f64, criterion: Criterion) -> f64 {
    let (mut nl, mut pl, mut nr, mut pr) = (0usize, 0usize, 0usize, 0usize);
    for i in 0..x.nrows() {
        if x[[i, f]] <= t {
            nl += 1;
            pl += y[i] as usize;
        } else {
            nr += 1;
            pr += y[i] as usize;
        }
    }
    let imp = |p: usize, n: usize| -> f64 {
        if n == 0 {
            return 0.0;
        }
        let q = p as f64 / n as f64;
        match criterion {
            Criterion::Gini => 1.0 - q * q - (1.0 - q) * (1.0 - q),
            Criterion::Entropy => [q, 1.0 - q].iter().filter(|&&v| v > 0.0).map(|&v| -v * v.log2()).sum(),
        }
    };
    let n = x.nrows() as f64;
    nl as f64 / n * imp(pl, nl) + nr as f64 / n * imp(pr, nr)
}

/// Every `(feature, midpoint)` candidate with its child impurity, in
/// feature-then-threshold order.
pub fn all_root_splits(x: &Array2<f64>, y: &[bool], criterion: Criterion) -> Vec<(usize, f64, f64)> {
    let mut out = Vec::new();
    for f in 0..x.ncols() {
        let mut v: Vec<f64> = x.column(f).to_vec();
        v.sort_by(f64::total_cmp);
        v.dedup();
        for w in v.windows(2) {
            let t = (w[0] + w[1]) / 2.0;
            out.push((f, t, child_impurity(x, y, f, t, criterion)));
        }
    }
    out
}

/// Brute-force root split: lowest child impurity, then lowest feature, then
/// lowest threshold (within `tol`).
pub fn reference_root_split(x: &Array2<f64>, y: &[bool], criterion: Criterion, tol: f64) -> Option<(usize, f64)> {
    let all = all_root_splits(x, y, criterion);
    let best = all.iter().map(|c| c.2).fold(f64::INFINITY, f64::min);
    all.into_iter().find(|c| c.2 <= best + tol).map(|c| (c.0, c.1))
}

pub fn training_accuracy(tree: &DecisionTree<f64>, x: &Array2<f64>, y: &[bool]) -> f64 {
    let hits = (0..x.nrows()).filter(|&i| (tree.predict_proba(x.row(i)) >= 0.5) == y[i]).count();
    hits as f64 / x.nrows() as f64
}

/// Central-difference gradient of `f` at `theta`.
pub fn numeric_gradient(f: impl Fn(&[f64]) -> f64, theta: &[f64], h: f64) -> Vec<f64> {
    (0..theta.len())
        .map(|j| {
            let mut a = theta.to_vec();
            let mut b = theta.to_vec();
            a[j] += h;
            b[j] -= h;
            (f(&a) - f(&b)) / (2.0 * h)
        })
        .collect()
}

/// `‖a - b‖∞ / max(‖b‖∞, 1)`.
pub fn relative_error(a: &[f64], b: &[f64]) -> f64 {
    let diff = a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
    let scale = b.iter().map(|v| v.abs()).fold(1.0, f64::max);
    diff / scale
}

/// Fraction of `seeds` on which `method` picks the planted column first.
pub fn planted_first_rate(method: rumour_core::select::Method, seeds: std::ops::Range<u64>) -> f64 {
    use rumour_core::learn::{Family, Hyperparams};
    use rumour_core::select::{reduce_features, ReduceOptions};
    let n = seeds.end - seeds.start;
    let hits = seeds
        .filter(|&seed| {
            let d = planted_design(60, 6, 3, 0.3, seed);
            let opts = ReduceOptions { budget: 1, k_folds: 5, seed };
            let trace = reduce_features(method, Family::LogReg, &Hyperparams::default(), &d, &opts).unwrap();
            trace.selected().first().map(String::as_str) == Some("f03")
        })
        .count();
    hits as f64 / n as f64
}
