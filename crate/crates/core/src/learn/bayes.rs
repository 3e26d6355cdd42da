use ndarray::{Array2, ArrayView1};
use serde::{Deserialize, Serialize};

use crate::Scalar;

/// Gaussian naive Bayes. Variances get `smoothing * max column variance` added.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct GaussianNb<T> {
    /// Class priors `[false, true]`.
    pub priors: [T; 2],
    pub means: [Vec<T>; 2],
    pub variances: [Vec<T>; 2],
}

fn mean_var<T: Scalar>(vals: impl Iterator<Item = T> + Clone) -> (T, T) {
    let n = T::of_usize(vals.clone().count().max(1));
    let m = vals.clone().sum::<T>() / n;
    let v = vals.map(|a| (a - m) * (a - m)).sum::<T>() / n;
    (m, v)
}

impl<T: Scalar> GaussianNb<T> {
    pub fn fit(x: &Array2<T>, y: &[bool], smoothing: T) -> Self {
        let m = x.ncols();
        let max_var = (0..m)
            .map(|j| mean_var(x.column(j).iter().copied()).1)
            .fold(T::zero(), T::max);
        let eps = smoothing * max_var.max(T::min_positive_value());
        let n_pos = y.iter().filter(|&&b| b).count();
        let n = y.len();
        let mut means = [Vec::with_capacity(m), Vec::with_capacity(m)];
        let mut variances = [Vec::with_capacity(m), Vec::with_capacity(m)];
        for (c, label) in [false, true].into_iter().enumerate() {
            for j in 0..m {
                let vals = x.column(j).into_iter().zip(y).filter(move |(_, &l)| l == label).map(|(&v, _)| v);
                let (mu, var) = mean_var(vals);
                means[c].push(mu);
                variances[c].push(var + eps);
            }
        }
        Self {
            priors: [T::of_usize(n - n_pos) / T::of_usize(n), T::of_usize(n_pos) / T::of_usize(n)],
            means,
            variances,
        }
    }

    /// Joint log density `log P(c) + Σ log N(x_j; μ_cj, σ²_cj)`.
    pub fn joint_log_likelihood(&self, row: ArrayView1<'_, T>) -> [T; 2] {
        let two_pi = T::of(std::f64::consts::TAU);
        let mut out = [T::zero(); 2];
        for (c, o) in out.iter_mut().enumerate() {
            let mut s = self.priors[c].ln();
            for (j, &v) in row.iter().enumerate() {
                let var = self.variances[c][j];
                let d = v - self.means[c][j];
                s -= ((two_pi * var).ln() + d * d / var) / T::of(2.0);
            }
            *o = s;
        }
        out
    }

    pub fn predict_proba(&self, row: ArrayView1<'_, T>) -> T {
        let [l0, l1] = self.joint_log_likelihood(row);
        crate::scalar::sigmoid(l1 - l0)
    }
}
