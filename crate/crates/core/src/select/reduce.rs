use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{kfold_cv, top_by_anova, CvResult, Pca, SelectError};
use crate::learn::{Design, Family, Hyperparams};
use crate::Scalar;

/// Upper bound on the number of selected features or components.
pub const FEATURE_BUDGET: usize = 30;
/// Size of the exhaustive starting subset of method 1.
pub const METHOD1_SUBSET: usize = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Method {
    /// ANOVA filter, exhaustive best triple, then greedy additions.
    FilterTripleForward = 1,
    /// Greedy forward selection over every feature.
    Forward = 2,
    /// ANOVA filter, then greedy forward selection.
    FilterForward = 3,
    /// Leading principal components.
    Pca = 4,
}

impl Method {
    pub const ALL: [Method; 4] = [Method::FilterTripleForward, Method::Forward, Method::FilterForward, Method::Pca];

    pub fn id(self) -> u8 {
        self as u8
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.id())
    }
}

impl FromStr for Method {
    type Err = SelectError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Method::ALL
            .into_iter()
            .find(|m| m.id().to_string() == s)
            .ok_or_else(|| SelectError::UnknownMethod(s.to_string()))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SelectionStep {
    /// Features or components in use after this step.
    pub size: usize,
    /// Features (or `pc<i>` components) added at this step.
    pub added: Vec<String>,
    pub f1_mean: f64,
    pub f1_std: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SelectionTrace {
    pub method: Method,
    pub family: Family,
    pub seed: u64,
    pub k_folds: usize,
    /// Features surviving the ANOVA filter (methods 1 and 3).
    pub filtered: Vec<String>,
    /// Number of starting triples scored by method 1.
    pub combinations_evaluated: usize,
    pub steps: Vec<SelectionStep>,
    /// Explained-variance ratio of each kept component (method 4).
    pub explained_variance: Vec<f64>,
}

impl SelectionTrace {
    /// Features (or components) in selection order.
    pub fn selected(&self) -> Vec<String> {
        self.steps.iter().flat_map(|s| s.added.iter().cloned()).collect()
    }

    /// The first `size` selected names.
    pub fn prefix(&self, size: usize) -> Vec<String> {
        self.selected().into_iter().take(size).collect()
    }

    /// The step with the highest mean F1; earlier (smaller) wins ties.
    pub fn best_step(&self) -> Option<&SelectionStep> {
        self.steps.iter().fold(None, |best: Option<&SelectionStep>, s| match best {
            Some(b) if b.f1_mean >= s.f1_mean => Some(b),
            _ => Some(s),
        })
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("method,family,step,n_features,added,f1_mean,f1_std\n");
        for (i, s) in self.steps.iter().enumerate() {
            out.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                self.method,
                self.family,
                i + 1,
                s.size,
                s.added.join("+"),
                s.f1_mean,
                s.f1_std
            ));
        }
        out
    }
}

/// Options shared by the reduction methods.
#[derive(Clone, Debug)]
pub struct ReduceOptions {
    pub budget: usize,
    pub k_folds: usize,
    pub seed: u64,
}

impl Default for ReduceOptions {
    fn default() -> Self {
        Self {
            budget: FEATURE_BUDGET,
            k_folds: 10,
            seed: 0,
        }
    }
}

fn score<T: Scalar>(
    family: Family,
    hp: &Hyperparams<T>,
    data: &Design<T>,
    cols: &[usize],
    opts: &ReduceOptions,
) -> Result<CvResult, SelectError> {
    kfold_cv(family, hp, &data.columns(cols), opts.k_folds, opts.seed)
}

/// Index of the best candidate by mean F1; the earliest wins ties.
fn argmax(results: &[CvResult]) -> usize {
    let mut best = 0;
    for (i, r) in results.iter().enumerate() {
        if r.f1.mean > results[best].f1.mean {
            best = i;
        }
    }
    best
}

fn forward<T: Scalar>(
    family: Family,
    hp: &Hyperparams<T>,
    data: &Design<T>,
    mut chosen: Vec<usize>,
    mut pool: Vec<usize>,
    budget: usize,
    opts: &ReduceOptions,
    steps: &mut Vec<SelectionStep>,
) -> Result<(), SelectError> {
    while chosen.len() < budget && !pool.is_empty() {
        let results = pool
            .par_iter()
            .map(|&c| {
                let mut cols = chosen.clone();
                cols.push(c);
                score(family, hp, data, &cols, opts)
            })
            .collect::<Result<Vec<_>, _>>()?;
        let b = argmax(&results);
        let pick = pool.remove(b);
        chosen.push(pick);
        steps.push(SelectionStep {
            size: chosen.len(),
            added: vec![data.names[pick].clone()],
            f1_mean: results[b].f1.mean,
            f1_std: results[b].f1.std,
        });
    }
    Ok(())
}

/// All `r`-subsets of `0..n` in lexicographic order.
pub fn combinations(n: usize, r: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if r > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..r).collect();
    loop {
        out.push(idx.clone());
        let Some(i) = (0..r).rev().find(|&i| idx[i] != i + n - r) else {
            return out;
        };
        idx[i] += 1;
        for j in i + 1..r {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Runs one feature-reduction method and records the CV F1 of every step.
pub fn reduce_features<T: Scalar>(
    method: Method,
    family: Family,
    hp: &Hyperparams<T>,
    data: &Design<T>,
    opts: &ReduceOptions,
) -> Result<SelectionTrace, SelectError> {
    let m = data.n_features();
    if m == 0 {
        return Err(SelectError::Learn(crate::learn::LearnError::NoFeatures));
    }
    let budget = opts.budget.min(m).min(FEATURE_BUDGET);
    if budget == 0 {
        return Err(SelectError::ZeroBudget);
    }
    let mut trace = SelectionTrace {
        method,
        family,
        seed: opts.seed,
        k_folds: opts.k_folds,
        filtered: Vec::new(),
        combinations_evaluated: 0,
        steps: Vec::new(),
        explained_variance: Vec::new(),
    };
    match method {
        Method::Forward => {
            forward(family, hp, data, Vec::new(), (0..m).collect(), budget, opts, &mut trace.steps)?;
        }
        Method::FilterForward => {
            let kept = top_by_anova(data, FEATURE_BUDGET);
            trace.filtered = kept.iter().map(|&j| data.names[j].clone()).collect();
            forward(family, hp, data, Vec::new(), kept, budget, opts, &mut trace.steps)?;
        }
        Method::FilterTripleForward => {
            let kept = top_by_anova(data, FEATURE_BUDGET);
            trace.filtered = kept.iter().map(|&j| data.names[j].clone()).collect();
            let r = METHOD1_SUBSET.min(kept.len()).min(budget);
            let triples: Vec<Vec<usize>> = combinations(kept.len(), r)
                .into_iter()
                .map(|c| c.into_iter().map(|i| kept[i]).collect())
                .collect();
            let results = triples
                .par_iter()
                .map(|cols| score(family, hp, data, cols, opts))
                .collect::<Result<Vec<_>, _>>()?;
            trace.combinations_evaluated = triples.len();
            let b = argmax(&results);
            let start = triples[b].clone();
            trace.steps.push(SelectionStep {
                size: start.len(),
                added: start.iter().map(|&j| data.names[j].clone()).collect(),
                f1_mean: results[b].f1.mean,
                f1_std: results[b].f1.std,
            });
            let pool: Vec<usize> = kept.into_iter().filter(|j| !start.contains(j)).collect();
            forward(family, hp, data, start, pool, budget, opts, &mut trace.steps)?;
        }
        Method::Pca => {
            let pca = Pca::fit(&data.x);
            let ratios = pca.explained_variance_ratio();
            let scores = pca.transform(&data.x, budget);
            let names: Vec<String> = (1..=budget).map(|i| format!("pc{i}")).collect();
            let projected = Design {
                names,
                catalog_version: data.catalog_version.clone(),
                x: scores,
                y: data.y.clone(),
            };
            let results = (1..=budget)
                .into_par_iter()
                .map(|k| score(family, hp, &projected, &(0..k).collect::<Vec<_>>(), opts))
                .collect::<Result<Vec<_>, _>>()?;
            for (k, r) in results.iter().enumerate() {
                trace.steps.push(SelectionStep {
                    size: k + 1,
                    added: vec![projected.names[k].clone()],
                    f1_mean: r.f1.mean,
                    f1_std: r.f1.std,
                });
            }
            trace.explained_variance = ratios[..budget].iter().map(|v| v.as_f64()).collect();
        }
    }
    Ok(trace)
}
