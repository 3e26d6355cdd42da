use ndarray::{Array1, Array2, ArrayView1};
use serde::{Deserialize, Serialize};

use super::{LearnError, Scaler};
use crate::linalg::solve;
use crate::scalar::{sigmoid, softplus};
use crate::Scalar;

const MAX_NEWTON_STEPS: usize = 200;

/// L2-penalised logistic regression fitted on standardised inputs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct LogisticModel<T> {
    pub scaler: Scaler<T>,
    /// Weights on the standardised scale.
    pub weights: Vec<T>,
    pub bias: T,
    pub penalty: T,
    pub iterations: usize,
}

/// Penalised negative log-likelihood `Σ softplus(z) - y z + λ/2 ‖w‖²` with
/// `z = x·w + b`. The last parameter is the unpenalised bias.
pub struct LogisticObjective<'a, T> {
    pub x: &'a Array2<T>,
    pub y: &'a [bool],
    pub penalty: T,
}

impl<'a, T: Scalar> LogisticObjective<'a, T> {
    fn margins(&self, theta: &[T]) -> Vec<T> {
        let m = self.x.ncols();
        let (w, b) = (&theta[..m], theta[m]);
        self.x
            .rows()
            .into_iter()
            .map(|r| r.iter().zip(w).map(|(&a, &c)| a * c).sum::<T>() + b)
            .collect()
    }

    pub fn value(&self, theta: &[T]) -> T {
        let m = self.x.ncols();
        let nll = self
            .margins(theta)
            .into_iter()
            .zip(self.y)
            .map(|(z, &y)| softplus(z) - if y { z } else { T::zero() })
            .sum::<T>();
        let reg = theta[..m].iter().map(|&w| w * w).sum::<T>();
        nll + self.penalty * reg / T::of(2.0)
    }

    pub fn gradient(&self, theta: &[T]) -> Vec<T> {
        let m = self.x.ncols();
        let mut g = vec![T::zero(); m + 1];
        for ((row, z), &y) in self.x.rows().into_iter().zip(self.margins(theta)).zip(self.y) {
            let r = sigmoid(z) - if y { T::one() } else { T::zero() };
            for (gj, &xj) in g.iter_mut().zip(row.iter()) {
                *gj += r * xj;
            }
            g[m] += r;
        }
        for j in 0..m {
            g[j] += self.penalty * theta[j];
        }
        g
    }

    pub fn hessian(&self, theta: &[T]) -> Array2<T> {
        let m = self.x.ncols();
        let mut h = Array2::<T>::zeros((m + 1, m + 1));
        for (row, z) in self.x.rows().into_iter().zip(self.margins(theta)) {
            let p = sigmoid(z);
            let s = p * (T::one() - p);
            let ext: Vec<T> = row.iter().copied().chain(std::iter::once(T::one())).collect();
            for a in 0..=m {
                let sa = s * ext[a];
                for b in a..=m {
                    h[[a, b]] += sa * ext[b];
                }
            }
        }
        for a in 0..=m {
            for b in 0..a {
                h[[a, b]] = h[[b, a]];
            }
        }
        for j in 0..m {
            h[[j, j]] += self.penalty;
        }
        h
    }
}

/// Objective value and gradient at `theta` (weights then bias) on raw inputs.
pub fn logistic_objective<T: Scalar>(x: &Array2<T>, y: &[bool], penalty: T, theta: &[T]) -> (T, Vec<T>) {
    let obj = LogisticObjective { x, y, penalty };
    (obj.value(theta), obj.gradient(theta))
}

fn norm<T: Scalar>(v: &[T]) -> T {
    v.iter().map(|&a| a * a).sum::<T>().sqrt()
}

/// Gradient-norm tolerance: 1e-6, loosened only where the scalar type cannot
/// resolve it.
fn tolerance<T: Scalar>(n: usize) -> T {
    T::of(1e-6).max(T::epsilon() * T::of(1e3) * T::of_usize(n))
}

/// Damped Newton minimisation of the penalised objective on `x` as given.
pub(crate) fn newton<T: Scalar>(x: &Array2<T>, y: &[bool], penalty: T) -> Result<(Vec<T>, usize), LearnError> {
    let obj = LogisticObjective { x, y, penalty };
    let m = x.ncols();
    let tol = tolerance::<T>(x.nrows());
    let mut theta = vec![T::zero(); m + 1];
    let mut f = obj.value(&theta);
    for it in 0..MAX_NEWTON_STEPS {
        let g = obj.gradient(&theta);
        let gn = norm(&g);
        if gn <= tol {
            return Ok((theta, it));
        }
        let h = obj.hessian(&theta);
        let dir = solve(&h, &Array1::from(g.clone())).unwrap_or_else(|| Array1::from(g.clone()));
        let slope = dir.iter().zip(&g).map(|(&d, &gi)| d * gi).sum::<T>();
        let mut step = T::one();
        let mut moved = false;
        for _ in 0..60 {
            let cand: Vec<T> = theta.iter().zip(dir.iter()).map(|(&t, &d)| t - step * d).collect();
            let fc = obj.value(&cand);
            if fc <= f - T::of(1e-4) * step * slope {
                theta = cand;
                f = fc;
                moved = true;
                break;
            }
            step /= T::of(2.0);
        }
        if !moved {
            let gn = norm(&obj.gradient(&theta));
            if gn <= tol {
                return Ok((theta, it));
            }
            return Err(LearnError::NotConverged { grad_norm: gn.as_f64() });
        }
    }
    let gn = norm(&obj.gradient(&theta));
    if gn <= tol {
        Ok((theta, MAX_NEWTON_STEPS))
    } else {
        Err(LearnError::NotConverged { grad_norm: gn.as_f64() })
    }
}

impl<T: Scalar> LogisticModel<T> {
    pub fn fit(x: &Array2<T>, y: &[bool], penalty: T) -> Result<Self, LearnError> {
        let scaler = Scaler::fit(x);
        let xs = scaler.transform(x);
        let (theta, iterations) = newton(&xs, y, penalty)?;
        let m = x.ncols();
        Ok(Self {
            scaler,
            weights: theta[..m].to_vec(),
            bias: theta[m],
            penalty,
            iterations,
        })
    }

    pub fn margin(&self, row: ArrayView1<'_, T>) -> T {
        let s = self.scaler.transform_row(row);
        s.iter().zip(&self.weights).map(|(&a, &w)| a * w).sum::<T>() + self.bias
    }

    pub fn predict_proba(&self, row: ArrayView1<'_, T>) -> T {
        sigmoid(self.margin(row))
    }

    /// Unpenalised log-likelihood `Σ y log p + (1-y) log(1-p)`.
    pub fn log_likelihood(&self, x: &Array2<T>, y: &[bool]) -> T {
        x.rows()
            .into_iter()
            .zip(y)
            .map(|(r, &yi)| {
                let z = self.margin(r);
                -(softplus(z) - if yi { z } else { T::zero() })
            })
            .sum()
    }
}
