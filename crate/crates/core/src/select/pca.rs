use ndarray::{s, Array2};
use serde::{Deserialize, Serialize};

use crate::learn::Scaler;
use crate::linalg::symmetric_eigen;
use crate::Scalar;

/// Principal components of standardised features.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct Pca<T> {
    pub scaler: Scaler<T>,
    /// Non-increasing.
    pub eigenvalues: Vec<T>,
    /// Column `i` is the loading vector of component `i`.
    pub components: Array2<T>,
}

impl<T: Scalar> Pca<T> {
    pub fn fit(x: &Array2<T>) -> Self {
        let scaler = Scaler::fit(x);
        let xs = scaler.transform(x);
        let denom = T::of_usize(x.nrows().saturating_sub(1).max(1));
        let cov = xs.t().dot(&xs).mapv(|v| v / denom);
        let (eigenvalues, components) = symmetric_eigen(&cov);
        Self {
            scaler,
            eigenvalues,
            components,
        }
    }

    pub fn standardise(&self, x: &Array2<T>) -> Array2<T> {
        self.scaler.transform(x)
    }

    /// Scores on the `k` leading components.
    pub fn transform(&self, x: &Array2<T>, k: usize) -> Array2<T> {
        self.standardise(x).dot(&self.components.slice(s![.., ..k]))
    }

    /// Standardised rows rebuilt from their first `k` scores.
    pub fn reconstruct(&self, scores: &Array2<T>) -> Array2<T> {
        let k = scores.ncols();
        scores.dot(&self.components.slice(s![.., ..k]).t())
    }

    pub fn explained_variance_ratio(&self) -> Vec<T> {
        let total = self.eigenvalues.iter().map(|&v| v.max(T::zero())).sum::<T>();
        self.eigenvalues
            .iter()
            .map(|&v| if total > T::zero() { v.max(T::zero()) / total } else { T::zero() })
            .collect()
    }

    /// Largest absolute entry of `standardised(x) - reconstruct(transform(x, all))`.
    pub fn reconstruction_error(&self, x: &Array2<T>) -> T {
        let m = self.components.ncols();
        let back = self.reconstruct(&self.transform(x, m));
        let xs = self.standardise(x);
        (&xs - &back).iter().fold(T::zero(), |a, v| a.max(v.abs()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    #[test]
    fn full_reconstruction_and_ordering() {
        let x: Array2<f64> = array![[1.0, 2.0, 0.5], [2.0, 4.1, 0.1], [3.0, 6.2, 0.9], [4.0, 7.9, 0.3], [5.0, 10.0, 0.7]];
        let p = Pca::fit(&x);
        assert!(p.eigenvalues.windows(2).all(|w| w[0] >= w[1]));
        assert!(p.reconstruction_error(&x) <= 1e-10);
        let r = p.explained_variance_ratio();
        assert!(r[0] > 0.6);
        assert!((r.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }
}
