use std::collections::{BTreeMap, BTreeSet, HashMap};

use rayon::prelude::*;
use serde::Serialize;

use super::{aggregate_ratio, aggregate_sentiment, Attribute, CatalogError, FeatureCatalog, FeatureVector, Rule, StanceAggregate};
use crate::corpus::{FolloweeIndex, Rumour, Stance, StanceCounts, Timestamp, Tweet, UserProfile, MS_PER_DAY};
use crate::graph::{build_stance_forests, network_attributes, NetworkAttributes};
use crate::lingua::{message_attributes, user_past_sentiment, Lexicon, MessageAttributes};

/// Number of cumulative time windows per rumour.
pub const WINDOWS: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct FeatureConfig {
    /// Apply `ln(1 + x)` to follower, friend, status and like counts, tenure
    /// and post frequency before averaging.
    pub log_scale_user_counts: bool,
}

impl Default for FeatureConfig {
    fn default() -> Self {
        Self {
            log_scale_user_counts: true,
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum FeatureError {
    #[error("unknown attribute {0:?}")]
    UnknownAttribute(String),
    #[error("tweet {0} has no stance; close annotations first")]
    Unannotated(String),
    #[error("author {0} has no user profile")]
    MissingUser(String),
    #[error("rumour {rumour_id}: feature {feature} is not finite")]
    NonFinite { rumour_id: String, feature: String },
    #[error("rumour {0} has non-positive duration")]
    ZeroDuration(String),
    #[error(transparent)]
    Catalog(#[from] CatalogError),
}

/// End of cumulative window `k` (1-based): `started_at + k * duration / 20`.
pub fn window_cutoff(rumour: &Rumour, k: usize) -> Timestamp {
    let offset = i128::from(rumour.duration_ms()) * k as i128 / WINDOWS as i128;
    rumour.started_at + offset as i64
}

/// Feature vectors of the 20 cumulative windows of one rumour.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RumourTimeSeries {
    pub rumour_id: String,
    pub veracity: bool,
    pub cutoffs: Vec<Timestamp>,
    pub tweet_counts: Vec<usize>,
    pub stance_counts: Vec<StanceCounts>,
    pub windows: Vec<FeatureVector>,
}

impl RumourTimeSeries {
    /// Window `k`, 1-based.
    pub fn window(&self, k: usize) -> &FeatureVector {
        &self.windows[k - 1]
    }

    pub fn full(&self) -> &FeatureVector {
        &self.windows[WINDOWS - 1]
    }
}

struct UserValues {
    followers: f64,
    friends: f64,
    statuses: f64,
    likes: f64,
    verified: f64,
    has_description: f64,
    has_location: f64,
    tenure_days: f64,
    post_frequency: f64,
    past_sentiment: f64,
}

/// Per-rumour values computed once and shared by all windows.
struct RumourContext<'r> {
    rumour: &'r Rumour,
    messages: Vec<MessageAttributes>,
    users: HashMap<&'r str, UserValues>,
}

/// Extracts feature vectors for rumours against a fixed user table,
/// followee index, lexicon and catalog.
pub struct FeatureExtractor<'a> {
    users: &'a BTreeMap<String, UserProfile>,
    followees: &'a FolloweeIndex,
    lexicon: &'a Lexicon,
    catalog: &'a FeatureCatalog,
    config: FeatureConfig,
}

impl<'a> FeatureExtractor<'a> {
    pub fn new(
        users: &'a BTreeMap<String, UserProfile>,
        followees: &'a FolloweeIndex,
        lexicon: &'a Lexicon,
        catalog: &'a FeatureCatalog,
    ) -> Self {
        Self {
            users,
            followees,
            lexicon,
            catalog,
            config: FeatureConfig::default(),
        }
    }

    pub fn with_config(mut self, config: FeatureConfig) -> Self {
        self.config = config;
        self
    }

    pub fn catalog(&self) -> &FeatureCatalog {
        self.catalog
    }

    fn user_values(&self, profile: &UserProfile, start: Timestamp) -> UserValues {
        let scale = |x: f64| if self.config.log_scale_user_counts { x.ln_1p() } else { x };
        let flag = |b: bool| f64::from(u8::from(b));
        let tenure = ((start - profile.registered_at).max(0) / MS_PER_DAY) as f64;
        let frequency = profile.statuses_count as f64 / tenure.max(1.0);
        UserValues {
            followers: scale(profile.followers_count as f64),
            friends: scale(profile.friends_count as f64),
            statuses: scale(profile.statuses_count as f64),
            likes: scale(profile.likes_count as f64),
            verified: flag(profile.verified),
            has_description: flag(profile.has_description),
            has_location: flag(profile.has_location),
            tenure_days: scale(tenure),
            post_frequency: scale(frequency),
            past_sentiment: user_past_sentiment(profile, self.lexicon, start),
        }
    }

    fn context<'r>(&self, rumour: &'r Rumour) -> Result<RumourContext<'r>, FeatureError> {
        let mut users = HashMap::new();
        for t in &rumour.tweets {
            if t.stance.is_none() {
                return Err(FeatureError::Unannotated(t.tweet_id.clone()));
            }
            if !users.contains_key(t.author_id.as_str()) {
                let profile = self
                    .users
                    .get(&t.author_id)
                    .ok_or_else(|| FeatureError::MissingUser(t.author_id.clone()))?;
                users.insert(t.author_id.as_str(), self.user_values(profile, rumour.started_at));
            }
        }
        Ok(RumourContext {
            rumour,
            messages: rumour
                .tweets
                .iter()
                .map(|t| message_attributes(t, self.lexicon))
                .collect(),
            users,
        })
    }

    /// Feature vector of the whole rumour.
    pub fn extract(&self, rumour: &Rumour) -> Result<FeatureVector, FeatureError> {
        let ctx = self.context(rumour)?;
        self.window_vector(&ctx, rumour.tweets.len())
    }

    /// Feature vector of the tweets posted up to and including `cutoff`.
    pub fn extract_until(&self, rumour: &Rumour, cutoff: Timestamp) -> Result<FeatureVector, FeatureError> {
        let ctx = self.context(rumour)?;
        let n = rumour.tweets.partition_point(|t| t.timestamp <= cutoff);
        self.window_vector(&ctx, n)
    }

    pub fn extract_timeseries(&self, rumour: &Rumour) -> Result<RumourTimeSeries, FeatureError> {
        if rumour.duration_ms() <= 0 {
            return Err(FeatureError::ZeroDuration(rumour.rumour_id.clone()));
        }
        let ctx = self.context(rumour)?;
        let mut series = RumourTimeSeries {
            rumour_id: rumour.rumour_id.clone(),
            veracity: rumour.veracity,
            cutoffs: Vec::with_capacity(WINDOWS),
            tweet_counts: Vec::with_capacity(WINDOWS),
            stance_counts: Vec::with_capacity(WINDOWS),
            windows: Vec::with_capacity(WINDOWS),
        };
        for k in 1..=WINDOWS {
            let cutoff = window_cutoff(rumour, k);
            let n = rumour.tweets.partition_point(|t| t.timestamp <= cutoff);
            series.cutoffs.push(cutoff);
            series.tweet_counts.push(n);
            series.stance_counts.push(StanceCounts::from_tweets(&rumour.tweets[..n]));
            series.windows.push(self.window_vector(&ctx, n)?);
        }
        Ok(series)
    }

    /// Time series of many rumours, extracted in parallel; output order
    /// follows the input.
    pub fn extract_all(&self, rumours: &[Rumour]) -> Result<Vec<RumourTimeSeries>, FeatureError> {
        rumours.par_iter().map(|r| self.extract_timeseries(r)).collect()
    }

    /// Per-side means of the named attribute over the whole rumour.
    pub fn stance_means(&self, rumour: &Rumour, attribute: &str) -> Result<StanceAggregate<f64>, FeatureError> {
        let attr: Attribute = attribute
            .parse()
            .map_err(|_| FeatureError::UnknownAttribute(attribute.to_string()))?;
        let ctx = self.context(rumour)?;
        let window = Window::new(&ctx, rumour.tweets.len());
        Ok(self.means(&ctx, &window, &attr))
    }

    fn window_vector(&self, ctx: &RumourContext<'_>, n: usize) -> Result<FeatureVector, FeatureError> {
        let mut window = Window::new(ctx, n);
        let needs_network = self
            .catalog
            .features
            .iter()
            .any(|f| f.attribute.source() == super::Source::Network);
        if needs_network {
            let forests = build_stance_forests(&ctx.rumour.tweets[..n], self.followees);
            window.network = Some(forests.map(|f| network_attributes(&f, self.users)));
        }
        let total = n as f64;
        let mut values = Vec::with_capacity(self.catalog.len());
        for def in &self.catalog.features {
            let v = match def.rule {
                Rule::PlainFraction => {
                    let count = match def.attribute {
                        Attribute::SupportFraction => window.counts.support,
                        _ => window.counts.against,
                    };
                    if n == 0 {
                        0.0
                    } else {
                        count as f64 / total
                    }
                }
                Rule::Ratio => aggregate_ratio(&self.means(ctx, &window, &def.attribute)),
                Rule::Difference => aggregate_sentiment(&self.means(ctx, &window, &def.attribute)),
            };
            if !v.is_finite() {
                return Err(FeatureError::NonFinite {
                    rumour_id: ctx.rumour.rumour_id.clone(),
                    feature: def.name.clone(),
                });
            }
            values.push(v);
        }
        Ok(FeatureVector {
            catalog_version: self.catalog.version.clone(),
            names: self.catalog.names(),
            values,
        })
    }

    fn means(&self, ctx: &RumourContext<'_>, window: &Window<'_>, attr: &Attribute) -> StanceAggregate<f64> {
        match attr.source() {
            super::Source::Message => {
                let mut sum = [0.0; 3];
                let mut count = [0usize; 3];
                for (i, t) in ctx.rumour.tweets[..window.len].iter().enumerate() {
                    let slot = t.stance.expect("checked in context").slot();
                    sum[slot] += message_value(t, &ctx.messages[i], attr);
                    count[slot] += 1;
                }
                side_means(sum, count)
            }
            super::Source::User => {
                let mut sum = [0.0; 3];
                let mut count = [0usize; 3];
                for s in Stance::ALL {
                    for u in &window.authors[s.slot()] {
                        sum[s.slot()] += user_value(&ctx.users[u], attr);
                        count[s.slot()] += 1;
                    }
                }
                side_means(sum, count)
            }
            super::Source::Network => {
                let net = window.network.as_ref();
                let side = |s: Stance| net.map_or(0.0, |n| network_value(&n[s.slot()], attr));
                StanceAggregate::new(side(Stance::Support), side(Stance::Neutral), side(Stance::Against))
            }
        }
    }
}

struct Window<'r> {
    len: usize,
    counts: StanceCounts,
    /// Distinct authors per stance slot; a user on two sides counts on both.
    authors: [BTreeSet<&'r str>; 3],
    network: Option<[NetworkAttributes; 3]>,
}

impl<'r> Window<'r> {
    fn new(ctx: &RumourContext<'r>, len: usize) -> Self {
        let tweets = &ctx.rumour.tweets[..len];
        let mut authors: [BTreeSet<&'r str>; 3] = Default::default();
        for t in tweets {
            if let Some(s) = t.stance {
                authors[s.slot()].insert(t.author_id.as_str());
            }
        }
        Self {
            len,
            counts: StanceCounts::from_tweets(tweets),
            authors,
            network: None,
        }
    }
}

fn side_means(sum: [f64; 3], count: [usize; 3]) -> StanceAggregate<f64> {
    let mean = |i: usize| if count[i] == 0 { 0.0 } else { sum[i] / count[i] as f64 };
    StanceAggregate::new(mean(0), mean(1), mean(2))
}

fn message_value(tweet: &Tweet, m: &MessageAttributes, attr: &Attribute) -> f64 {
    match attr {
        Attribute::WordCount => m.word_count,
        Attribute::HasUrl => m.has_url,
        Attribute::Negation => m.negation,
        Attribute::ParseDepth => m.parse_depth,
        Attribute::Lexical(c) => m.lexical.get(*c),
        Attribute::TweetAttr(name) => tweet.attribute(name).unwrap_or(0.0),
        _ => 0.0,
    }
}

fn user_value(u: &UserValues, attr: &Attribute) -> f64 {
    match attr {
        Attribute::Followers => u.followers,
        Attribute::Friends => u.friends,
        Attribute::Statuses => u.statuses,
        Attribute::Likes => u.likes,
        Attribute::Verified => u.verified,
        Attribute::HasDescription => u.has_description,
        Attribute::HasLocation => u.has_location,
        Attribute::TenureDays => u.tenure_days,
        Attribute::PostFrequency => u.post_frequency,
        Attribute::PastSentiment => u.past_sentiment,
        _ => 0.0,
    }
}

fn network_value(n: &NetworkAttributes, attr: &Attribute) -> f64 {
    match attr {
        Attribute::TreeCount => n.tree_count as f64,
        Attribute::LccRootDegree => n.lcc_root_degree as f64,
        Attribute::RetweetsWithinNetwork => n.retweets_within_network,
        Attribute::QuotesWithinNetwork => n.quotes_within_network,
        Attribute::LowToHighDiffusion => n.low_to_high_diffusion,
        _ => 0.0,
    }
}
