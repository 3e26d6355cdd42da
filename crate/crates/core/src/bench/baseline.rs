use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::BenchError;
use crate::corpus::StanceCounts;
use crate::learn::tree_seed;

/// Support-to-against tweet ratio above which `single_attr_2` says true.
pub const SUPPORT_AGAINST_RATIO: f64 = 2.22;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Benchmark {
    Random,
    AlwaysTrue,
    SingleAttr1,
    SingleAttr2,
}

impl Benchmark {
    pub const ALL: [Benchmark; 4] = [
        Benchmark::Random,
        Benchmark::AlwaysTrue,
        Benchmark::SingleAttr1,
        Benchmark::SingleAttr2,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Benchmark::Random => "random",
            Benchmark::AlwaysTrue => "always_true",
            Benchmark::SingleAttr1 => "single_attr_1",
            Benchmark::SingleAttr2 => "single_attr_2",
        }
    }
}

impl fmt::Display for Benchmark {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Benchmark {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Benchmark::ALL
            .into_iter()
            .find(|b| b.name() == s)
            .ok_or_else(|| BenchError::UnknownBenchmark(s.to_string()))
    }
}

/// Support and against tweet counts seen up to some cutoff.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct WindowStats {
    pub support: usize,
    pub against: usize,
}

impl From<&StanceCounts> for WindowStats {
    fn from(c: &StanceCounts) -> Self {
        Self {
            support: c.support,
            against: c.against,
        }
    }
}

/// `single_attr_2` on a ratio: strictly greater than the threshold.
pub fn ratio_rule(ratio: f64) -> bool {
    ratio > SUPPORT_AGAINST_RATIO
}

/// Prediction of a benchmark; `seed` only drives the random coin.
pub fn benchmark_predict(model: Benchmark, stats: WindowStats, seed: u64) -> bool {
    match model {
        Benchmark::Random => tree_seed(seed, 0) >> 63 == 1,
        Benchmark::AlwaysTrue => true,
        Benchmark::SingleAttr1 => stats.support > stats.against,
        Benchmark::SingleAttr2 => {
            stats.against == 0 || ratio_rule(stats.support as f64 / stats.against as f64)
        }
    }
}
