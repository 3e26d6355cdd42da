use std::cmp::Ordering;

use ndarray::{Array2, ArrayView1};
use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Criterion {
    Gini,
    Entropy,
}

impl Criterion {
    /// Impurity of a node holding `pos` true rows out of `n`.
    pub fn impurity<T: Scalar>(self, pos: usize, n: usize) -> T {
        if n == 0 {
            return T::zero();
        }
        let p = T::of_usize(pos) / T::of_usize(n);
        let q = T::one() - p;
        match self {
            Criterion::Gini => T::one() - p * p - q * q,
            Criterion::Entropy => {
                let h = |v: T| if v > T::zero() { -v * v.log2() } else { T::zero() };
                h(p) + h(q)
            }
        }
    }
}

impl std::str::FromStr for Criterion {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "gini" => Ok(Criterion::Gini),
            "entropy" => Ok(Criterion::Entropy),
            _ => Err(format!("unknown split criterion {s:?}")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct Split<T> {
    pub feature: usize,
    /// Rows with `x[feature] <= threshold` go left.
    pub threshold: T,
    pub left: usize,
    pub right: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct Node<T> {
    /// Training rows reaching the node, counting bootstrap duplicates.
    pub samples: usize,
    pub impurity: T,
    /// Class fractions `[false, true]`.
    pub fractions: [T; 2],
    pub split: Option<Split<T>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct DecisionTree<T> {
    pub n_features: usize,
    pub criterion: Criterion,
    /// Node 0 is the root.
    pub nodes: Vec<Node<T>>,
}

struct Candidate<T> {
    child_impurity: T,
    feature: usize,
    threshold: T,
}

/// Settings shared by a single growth run.
pub(crate) struct Grower<'a, T, R> {
    pub x: &'a Array2<T>,
    pub y: &'a [bool],
    pub criterion: Criterion,
    pub max_depth: Option<usize>,
    /// `(features per split, rng)`; `None` examines every feature.
    pub sampling: Option<(usize, R)>,
}

impl<T: Scalar> DecisionTree<T> {
    /// Grows a full tree on every row and every feature.
    pub fn fit(x: &Array2<T>, y: &[bool], criterion: Criterion, max_depth: Option<usize>) -> Self {
        let rows: Vec<usize> = (0..x.nrows()).collect();
        Grower::<T, rand_chacha::ChaCha8Rng> {
            x,
            y,
            criterion,
            max_depth,
            sampling: None,
        }
        .grow(rows)
    }

    fn leaf_of(&self, row: ArrayView1<'_, T>) -> &Node<T> {
        let mut node = &self.nodes[0];
        while let Some(s) = &node.split {
            node = if row[s.feature] <= s.threshold {
                &self.nodes[s.left]
            } else {
                &self.nodes[s.right]
            };
        }
        node
    }

    pub fn predict_proba(&self, row: ArrayView1<'_, T>) -> T {
        self.leaf_of(row).fractions[1]
    }

    pub fn depth(&self) -> usize {
        fn walk<T>(nodes: &[Node<T>], i: usize) -> usize {
            match &nodes[i].split {
                None => 0,
                Some(s) => 1 + walk(nodes, s.left).max(walk(nodes, s.right)),
            }
        }
        walk(&self.nodes, 0)
    }

    pub fn leaf_count(&self) -> usize {
        self.nodes.iter().filter(|n| n.split.is_none()).count()
    }

    /// Unnormalised impurity decrease per feature, each node weighted by the
    /// fraction of training rows reaching it.
    pub fn raw_importances(&self) -> Vec<T> {
        let mut imp = vec![T::zero(); self.n_features];
        let total = T::of_usize(self.nodes[0].samples.max(1));
        for node in &self.nodes {
            if let Some(s) = &node.split {
                let (l, r) = (&self.nodes[s.left], &self.nodes[s.right]);
                let dec = T::of_usize(node.samples) * node.impurity
                    - T::of_usize(l.samples) * l.impurity
                    - T::of_usize(r.samples) * r.impurity;
                imp[s.feature] += dec / total;
            }
        }
        imp
    }

    /// Importances normalised to sum to one; all zero for a single-leaf tree.
    pub fn feature_importances(&self) -> Vec<T> {
        let mut imp = self.raw_importances();
        let sum = imp.iter().copied().sum::<T>();
        if sum > T::zero() {
            imp.iter_mut().for_each(|v| *v /= sum);
        }
        imp
    }
}

/// Impurities closer than a few ulps are treated as equal so the
/// lowest-feature, lowest-threshold rule is not decided by rounding.
fn ties<T: Scalar>(a: T, b: T) -> bool {
    (a - b).abs() <= T::epsilon() * T::of(16.0)
}

impl<'a, T: Scalar, R: Rng> Grower<'a, T, R> {
    pub fn grow(mut self, rows: Vec<usize>) -> DecisionTree<T> {
        let mut nodes = Vec::new();
        self.build(&mut nodes, rows, 0);
        DecisionTree {
            n_features: self.x.ncols(),
            criterion: self.criterion,
            nodes,
        }
    }

    fn build(&mut self, nodes: &mut Vec<Node<T>>, rows: Vec<usize>, depth: usize) -> usize {
        let n = rows.len();
        let pos = rows.iter().filter(|&&i| self.y[i]).count();
        let p = T::of_usize(pos) / T::of_usize(n.max(1));
        let id = nodes.len();
        nodes.push(Node {
            samples: n,
            impurity: self.criterion.impurity(pos, n),
            fractions: [T::one() - p, p],
            split: None,
        });
        let pure = pos == 0 || pos == n;
        let capped = self.max_depth.is_some_and(|d| depth >= d);
        if pure || capped {
            return id;
        }
        let Some(best) = self.best_split(&rows) else {
            return id;
        };
        let (l, r): (Vec<usize>, Vec<usize>) = rows
            .iter()
            .partition(|&&i| self.x[[i, best.feature]] <= best.threshold);
        let left = self.build(nodes, l, depth + 1);
        let right = self.build(nodes, r, depth + 1);
        nodes[id].split = Some(Split {
            feature: best.feature,
            threshold: best.threshold,
            left,
            right,
        });
        id
    }

    /// Best split over the examined features. With feature sampling, features
    /// are visited in random order until `k` of them admit a split.
    fn best_split(&mut self, rows: &[usize]) -> Option<Candidate<T>> {
        let m = self.x.ncols();
        let (order, quota) = match &mut self.sampling {
            None => ((0..m).collect::<Vec<_>>(), m),
            Some((k, rng)) => {
                let mut f: Vec<usize> = (0..m).collect();
                f.shuffle(rng);
                (f, *k)
            }
        };
        let mut found = 0;
        let mut best: Option<Candidate<T>> = None;
        for f in order {
            if found == quota {
                break;
            }
            if let Some(c) = self.best_for_feature(rows, f) {
                found += 1;
                let better = match &best {
                    None => true,
                    Some(b) if ties(c.child_impurity, b.child_impurity) => {
                        (c.feature, c.threshold.as_f64()) < (b.feature, b.threshold.as_f64())
                    }
                    Some(b) => c.child_impurity < b.child_impurity,
                };
                if better {
                    best = Some(c);
                }
            }
        }
        best
    }

    fn best_for_feature(&self, rows: &[usize], f: usize) -> Option<Candidate<T>> {
        let mut vals: Vec<(T, bool)> = rows.iter().map(|&i| (self.x[[i, f]], self.y[i])).collect();
        vals.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(Ordering::Equal));
        let n = vals.len();
        let total_pos = vals.iter().filter(|v| v.1).count();
        let mut left_pos = 0;
        let mut best: Option<Candidate<T>> = None;
        for i in 0..n - 1 {
            if vals[i].1 {
                left_pos += 1;
            }
            let (a, b) = (vals[i].0, vals[i + 1].0);
            if !(a < b) {
                continue;
            }
            let nl = i + 1;
            let nr = n - nl;
            let il: T = self.criterion.impurity(left_pos, nl);
            let ir: T = self.criterion.impurity(total_pos - left_pos, nr);
            let child = (T::of_usize(nl) * il + T::of_usize(nr) * ir) / T::of_usize(n);
            let mut threshold = (a + b) / T::of(2.0);
            if !(threshold < b) {
                threshold = a;
            }
            if best
                .as_ref()
                .is_none_or(|c| child < c.child_impurity && !ties(child, c.child_impurity))
            {
                best = Some(Candidate {
                    child_impurity: child,
                    feature: f,
                    threshold,
                });
            }
        }
        best
    }
}
