use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use super::{Dataset, Rumour, Stance, Tweet, MS_PER_HOUR};

/// Per-stance tweet counts.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct StanceCounts {
    pub support: usize,
    pub neutral: usize,
    pub against: usize,
    pub unannotated: usize,
}

impl StanceCounts {
    pub fn from_tweets<'a>(tweets: impl IntoIterator<Item = &'a Tweet>) -> Self {
        let mut c = Self::default();
        for t in tweets {
            c.add(t.stance);
        }
        c
    }

    pub fn add(&mut self, stance: Option<Stance>) {
        match stance {
            Some(Stance::Support) => self.support += 1,
            Some(Stance::Neutral) => self.neutral += 1,
            Some(Stance::Against) => self.against += 1,
            None => self.unannotated += 1,
        }
    }

    pub fn total(&self) -> usize {
        self.support + self.neutral + self.against + self.unannotated
    }

    pub fn get(&self, stance: Stance) -> usize {
        match stance {
            Stance::Support => self.support,
            Stance::Neutral => self.neutral,
            Stance::Against => self.against,
        }
    }

    fn fraction(&self, n: usize) -> f64 {
        match self.total() {
            0 => 0.0,
            t => n as f64 / t as f64,
        }
    }

    pub fn support_fraction(&self) -> f64 {
        self.fraction(self.support)
    }

    pub fn neutral_fraction(&self) -> f64 {
        self.fraction(self.neutral)
    }

    pub fn against_fraction(&self) -> f64 {
        self.fraction(self.against)
    }
}

/// One row of the corpus summary table.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RumourSummary {
    pub rumour_id: String,
    pub tweets: usize,
    pub support_pct: f64,
    pub against_pct: f64,
    pub users: usize,
    /// Past tweets collected for the participating users.
    pub user_tweets: usize,
    pub duration_hours: f64,
}

impl RumourSummary {
    pub fn of(rumour: &Rumour, dataset: &Dataset) -> Self {
        let counts = rumour.stance_counts();
        let users: BTreeSet<&str> = rumour.tweets.iter().map(|t| t.author_id.as_str()).collect();
        let user_tweets = users
            .iter()
            .filter_map(|u| dataset.users.get(*u))
            .map(|u| u.past_tweets_before(rumour.started_at).count())
            .sum();
        Self {
            rumour_id: rumour.rumour_id.clone(),
            tweets: rumour.tweets.len(),
            support_pct: 100.0 * counts.support_fraction(),
            against_pct: 100.0 * counts.against_fraction(),
            users: users.len(),
            user_tweets,
            duration_hours: rumour.duration_ms() as f64 / MS_PER_HOUR as f64,
        }
    }
}

/// Descriptive statistics of one column across rumours.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SummaryStats {
    pub mean: f64,
    pub median: f64,
    /// Sample standard deviation (n - 1 denominator); 0 for a single rumour.
    pub std: f64,
    pub min: f64,
    pub max: f64,
}

impl SummaryStats {
    pub fn of(values: &[f64]) -> Self {
        let n = values.len();
        if n == 0 {
            return Self { mean: 0.0, median: 0.0, std: 0.0, min: 0.0, max: 0.0 };
        }
        let mut sorted = values.to_vec();
        sorted.sort_by(f64::total_cmp);
        let mean = values.iter().sum::<f64>() / n as f64;
        let median = if n % 2 == 1 {
            sorted[n / 2]
        } else {
            0.5 * (sorted[n / 2 - 1] + sorted[n / 2])
        };
        let std = if n > 1 {
            (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt()
        } else {
            0.0
        };
        Self { mean, median, std, min: sorted[0], max: sorted[n - 1] }
    }
}

/// Corpus-level summary: totals, distribution statistics and per-rumour rows.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SummaryTable {
    pub rows: Vec<RumourSummary>,
    pub total_tweets: usize,
    pub total_support_pct: f64,
    pub total_against_pct: f64,
    pub total_users: usize,
    pub total_user_tweets: usize,
    /// Columns: tweets, %support, %against, users, user tweets, duration.
    pub stats: [SummaryStats; 6],
}

impl SummaryTable {
    pub fn from_dataset(dataset: &Dataset) -> Self {
        let rows: Vec<RumourSummary> = dataset
            .rumours
            .iter()
            .map(|r| RumourSummary::of(r, dataset))
            .collect();
        let all = StanceCounts::from_tweets(dataset.rumours.iter().flat_map(|r| &r.tweets));
        let users: BTreeSet<&str> = dataset
            .rumours
            .iter()
            .flat_map(|r| &r.tweets)
            .map(|t| t.author_id.as_str())
            .collect();
        let col = |f: &dyn Fn(&RumourSummary) -> f64| {
            SummaryStats::of(&rows.iter().map(f).collect::<Vec<_>>())
        };
        let stats = [
            col(&|r| r.tweets as f64),
            col(&|r| r.support_pct),
            col(&|r| r.against_pct),
            col(&|r| r.users as f64),
            col(&|r| r.user_tweets as f64),
            col(&|r| r.duration_hours),
        ];
        Self {
            total_tweets: all.total(),
            total_support_pct: 100.0 * all.support_fraction(),
            total_against_pct: 100.0 * all.against_fraction(),
            total_users: users.len(),
            total_user_tweets: rows.iter().map(|r| r.user_tweets).sum(),
            rows,
            stats,
        }
    }
}

impl fmt::Display for SummaryTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{:<16} {:>10} {:>9} {:>9} {:>9} {:>12} {:>15}",
            "", "Tweets", "%Support", "%Against", "Users", "Users Tweets", "Duration(hours)"
        )?;
        writeln!(
            f,
            "{:<16} {:>10} {:>8.1}% {:>8.1}% {:>9} {:>12} {:>15}",
            "Total",
            self.total_tweets,
            self.total_support_pct,
            self.total_against_pct,
            self.total_users,
            self.total_user_tweets,
            "N/A"
        )?;
        let names = ["Mean", "Median", "Std", "Min", "Max"];
        for (i, name) in names.iter().enumerate() {
            let pick = |s: &SummaryStats| [s.mean, s.median, s.std, s.min, s.max][i];
            let s = &self.stats;
            writeln!(
                f,
                "{:<16} {:>10.0} {:>8.1}% {:>8.1}% {:>9.0} {:>12.0} {:>15.2}",
                name,
                pick(&s[0]),
                pick(&s[1]),
                pick(&s[2]),
                pick(&s[3]),
                pick(&s[4]),
                pick(&s[5])
            )?;
        }
        for r in &self.rows {
            writeln!(
                f,
                "{:<16} {:>10} {:>8.1}% {:>8.1}% {:>9} {:>12} {:>15.2}",
                r.rumour_id,
                r.tweets,
                r.support_pct,
                r.against_pct,
                r.users,
                r.user_tweets,
                r.duration_hours
            )?;
        }
        Ok(())
    }
}
