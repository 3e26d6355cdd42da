use ndarray::{Array1, Array2, ArrayView1, Axis};
use serde::{Deserialize, Serialize};

use crate::Scalar;

/// Per-column standardisation `(x - mean) / std`; constant columns keep unit scale.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct Scaler<T> {
    pub mean: Vec<T>,
    pub scale: Vec<T>,
}

impl<T: Scalar> Scaler<T> {
    pub fn fit(x: &Array2<T>) -> Self {
        let n = T::of_usize(x.nrows().max(1));
        let mut mean = Vec::with_capacity(x.ncols());
        let mut scale = Vec::with_capacity(x.ncols());
        for col in x.axis_iter(Axis(1)) {
            let m = col.iter().copied().sum::<T>() / n;
            let var = col.iter().map(|&v| (v - m) * (v - m)).sum::<T>() / n;
            let sd = var.sqrt();
            mean.push(m);
            scale.push(if sd > T::epsilon() { sd } else { T::one() });
        }
        Self { mean, scale }
    }

    pub fn transform(&self, x: &Array2<T>) -> Array2<T> {
        let mut out = x.clone();
        for (j, mut col) in out.axis_iter_mut(Axis(1)).enumerate() {
            col.mapv_inplace(|v| (v - self.mean[j]) / self.scale[j]);
        }
        out
    }

    pub fn transform_row(&self, row: ArrayView1<'_, T>) -> Array1<T> {
        row.iter()
            .enumerate()
            .map(|(j, &v)| (v - self.mean[j]) / self.scale[j])
            .collect()
    }
}
