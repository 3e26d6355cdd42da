use ndarray::{Array2, ArrayView1};
use serde::{Deserialize, Serialize};

use super::Scaler;
use crate::scalar::sigmoid;
use crate::Scalar;

/// Linear SVM trained by full-batch subgradient descent on
/// `λ/2 ‖w‖² + mean(max(0, 1 - y (w·x + b)))`, with `y ∈ {-1, 1}`.
/// The iterate with the lowest objective is kept.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct LinearSvm<T> {
    pub scaler: Scaler<T>,
    pub weights: Vec<T>,
    pub bias: T,
    pub objective: T,
}

fn objective<T: Scalar>(x: &Array2<T>, ys: &[T], w: &[T], b: T, lambda: T) -> T {
    let n = T::of_usize(ys.len());
    let hinge = x
        .rows()
        .into_iter()
        .zip(ys)
        .map(|(r, &y)| {
            let z = r.iter().zip(w).map(|(&a, &c)| a * c).sum::<T>() + b;
            (T::one() - y * z).max(T::zero())
        })
        .sum::<T>();
    lambda / T::of(2.0) * w.iter().map(|&a| a * a).sum::<T>() + hinge / n
}

impl<T: Scalar> LinearSvm<T> {
    pub fn fit(x: &Array2<T>, y: &[bool], lambda: T, iterations: usize) -> Self {
        let scaler = Scaler::fit(x);
        let xs = scaler.transform(x);
        let ys: Vec<T> = y.iter().map(|&l| if l { T::one() } else { -T::one() }).collect();
        let m = xs.ncols();
        let n = T::of_usize(ys.len());
        let mut w = vec![T::zero(); m];
        let mut b = T::zero();
        let mut best = (objective(&xs, &ys, &w, b, lambda), w.clone(), b);
        for t in 1..=iterations {
            let mut gw: Vec<T> = w.iter().map(|&a| lambda * a).collect();
            let mut gb = T::zero();
            for (r, &yi) in xs.rows().into_iter().zip(&ys) {
                let z = r.iter().zip(&w).map(|(&a, &c)| a * c).sum::<T>() + b;
                if yi * z < T::one() {
                    for (g, &a) in gw.iter_mut().zip(r.iter()) {
                        *g -= yi * a / n;
                    }
                    gb -= yi / n;
                }
            }
            let eta = T::one() / (lambda * T::of_usize(t + 1));
            let eta = eta.min(T::one());
            for (a, g) in w.iter_mut().zip(&gw) {
                *a -= eta * *g;
            }
            b -= eta * gb;
            let f = objective(&xs, &ys, &w, b, lambda);
            if f < best.0 {
                best = (f, w.clone(), b);
            }
        }
        Self {
            scaler,
            weights: best.1,
            bias: best.2,
            objective: best.0,
        }
    }

    pub fn margin(&self, row: ArrayView1<'_, T>) -> T {
        let s = self.scaler.transform_row(row);
        s.iter().zip(&self.weights).map(|(&a, &w)| a * w).sum::<T>() + self.bias
    }

    /// Sigmoid of the margin; not a calibrated probability.
    pub fn predict_proba(&self, row: ArrayView1<'_, T>) -> T {
        sigmoid(self.margin(row))
    }
}
