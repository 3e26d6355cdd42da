use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF};

use super::{Design, LearnError, LogisticModel, ModelParams, TrainedModel};
use crate::Scalar;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FeatureSignificance {
    pub feature: String,
    /// `2 (LL_full - LL_without_feature)`, clamped at zero.
    pub statistic: f64,
    pub p_value: f64,
    pub significant: bool,
}

/// Likelihood-ratio test of each feature of a fitted logistic model against
/// chi-square with one degree of freedom. Restricted models are refitted with
/// the same penalty.
pub fn loglik_significance<T: Scalar>(
    model: &TrainedModel<T>,
    data: &Design<T>,
    alpha: f64,
) -> Result<Vec<FeatureSignificance>, LearnError> {
    let ModelParams::LogReg(full) = &model.params else {
        return Err(LearnError::WrongFamily {
            expected: super::Family::LogReg,
            found: model.family,
        });
    };
    let cols = data.columns_by_name(&model.features)?;
    let ll_full = full.log_likelihood(&cols.x, &cols.y).as_f64();
    let chi = ChiSquared::new(1.0).expect("one degree of freedom");
    let m = cols.n_features();
    (0..m)
        .map(|j| {
            let keep: Vec<usize> = (0..m).filter(|&k| k != j).collect();
            let restricted = cols.columns(&keep);
            let fit = LogisticModel::fit(&restricted.x, &restricted.y, full.penalty)?;
            let ll = fit.log_likelihood(&restricted.x, &restricted.y).as_f64();
            let statistic = (2.0 * (ll_full - ll)).max(0.0);
            let p_value = 1.0 - chi.cdf(statistic);
            Ok(FeatureSignificance {
                feature: cols.names[j].clone(),
                statistic,
                p_value,
                significant: p_value < alpha,
            })
        })
        .collect()
}
