//! Seeded generator of labelled corpora with planted class signal.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Beta, Distribution, LogNormal};
use serde::{Deserialize, Serialize};

use super::BenchError;
use crate::corpus::{
    write_corpus, CorpusPaths, Dataset, FolloweeIndex, PastTweet, Rumour, Stance, Timestamp, Tweet,
    TweetKind, UserProfile, MS_PER_DAY, MS_PER_HOUR,
};

/// Generative parameters of one class of rumours.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassParams {
    /// Mean of the Beta-distributed fraction of against tweets.
    pub deny_mean: f64,
    pub deny_concentration: f64,
    /// Mean share of the non-against tweets that support.
    pub support_share_mean: f64,
    pub support_share_concentration: f64,
    /// Fraction of each stance partition's tweets that start a new cascade.
    pub original_fraction: f64,
    /// Probability that a supporting author is drawn from the verified users.
    pub supporter_verified_rate: f64,
    /// Per-word probabilities in tweet text.
    pub positive_rate: f64,
    pub negative_rate: f64,
    pub negation_rate: f64,
    /// Probability that a tweet carries a link.
    pub url_rate: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SynthSpec {
    pub rumours: usize,
    pub true_rumours: usize,
    pub users: usize,
    pub verified_rate: f64,
    /// Random followees per user before cascade links are added.
    pub base_followees: usize,
    pub min_tweets: usize,
    pub max_tweets: usize,
    pub min_duration_hours: f64,
    pub max_duration_hours: f64,
    /// Probability that an original in the neutral partition is untranslatable.
    pub untranslatable_rate: f64,
    /// Probability that a non-retweet quotes or replies to an earlier tweet.
    pub quote_rate: f64,
    pub reply_rate: f64,
    pub true_class: ClassParams,
    pub false_class: ClassParams,
    pub seed: u64,
}

impl Default for SynthSpec {
    fn default() -> Self {
        Self {
            rumours: 72,
            true_rumours: 41,
            users: 3000,
            verified_rate: 0.08,
            base_followees: 12,
            min_tweets: 30,
            max_tweets: 80,
            min_duration_hours: 12.0,
            max_duration_hours: 96.0,
            untranslatable_rate: 0.03,
            quote_rate: 0.05,
            reply_rate: 0.05,
            true_class: ClassParams {
                deny_mean: 0.1,
                deny_concentration: 30.0,
                support_share_mean: 0.4,
                support_share_concentration: 2.0,
                original_fraction: 0.3,
                supporter_verified_rate: 0.35,
                positive_rate: 0.12,
                negative_rate: 0.06,
                negation_rate: 0.03,
                url_rate: 0.5,
            },
            false_class: ClassParams {
                deny_mean: 0.4,
                deny_concentration: 30.0,
                support_share_mean: 0.5,
                support_share_concentration: 2.0,
                original_fraction: 0.55,
                supporter_verified_rate: 0.1,
                positive_rate: 0.08,
                negative_rate: 0.1,
                negation_rate: 0.06,
                url_rate: 0.35,
            },
            seed: 0,
        }
    }
}

fn check_prob(name: &str, v: f64) -> Result<(), BenchError> {
    if (0.0..=1.0).contains(&v) {
        Ok(())
    } else {
        Err(BenchError::InfeasibleSpec(format!("{name} = {v} is not a probability")))
    }
}

impl ClassParams {
    fn validate(&self, class: &str) -> Result<(), BenchError> {
        for (n, v) in [
            ("support_share_mean", self.support_share_mean),
            ("original_fraction", self.original_fraction),
            ("supporter_verified_rate", self.supporter_verified_rate),
            ("positive_rate", self.positive_rate),
            ("negative_rate", self.negative_rate),
            ("negation_rate", self.negation_rate),
            ("url_rate", self.url_rate),
        ] {
            check_prob(&format!("{class}.{n}"), v)?;
        }
        if !(self.deny_mean > 0.0 && self.deny_mean < 1.0)
            || !(self.support_share_mean > 0.0 && self.support_share_mean < 1.0)
        {
            return Err(BenchError::InfeasibleSpec(format!("{class}: Beta means must lie in (0, 1)")));
        }
        if !(self.deny_concentration > 0.0 && self.support_share_concentration > 0.0) {
            return Err(BenchError::InfeasibleSpec(format!("{class}: concentrations must be positive")));
        }
        if self.positive_rate + self.negative_rate + self.negation_rate > 1.0 {
            return Err(BenchError::InfeasibleSpec(format!("{class}: word rates exceed 1")));
        }
        Ok(())
    }
}

impl SynthSpec {
    pub fn validate(&self) -> Result<(), BenchError> {
        let bad = |m: &str| Err(BenchError::InfeasibleSpec(m.to_string()));
        if self.rumours == 0 {
            return bad("zero rumours");
        }
        if self.true_rumours > self.rumours {
            return bad("more true rumours than rumours");
        }
        if self.users < 2 {
            return bad("at least two users are needed");
        }
        if self.min_tweets == 0 || self.min_tweets > self.max_tweets {
            return bad("tweet count range is empty");
        }
        if self.max_tweets > self.users {
            return bad("more tweets per rumour than users");
        }
        if !(self.min_duration_hours > 0.0 && self.min_duration_hours <= self.max_duration_hours) {
            return bad("duration range is empty or non-positive");
        }
        for (n, v) in [
            ("verified_rate", self.verified_rate),
            ("untranslatable_rate", self.untranslatable_rate),
            ("quote_rate", self.quote_rate),
            ("reply_rate", self.reply_rate),
        ] {
            check_prob(n, v)?;
        }
        if self.quote_rate + self.reply_rate > 1.0 {
            return bad("quote_rate + reply_rate exceeds 1");
        }
        self.true_class.validate("true_class")?;
        self.false_class.validate("false_class")
    }
}

const POSITIVE: &[&str] = &["good", "great", "safe", "thanks", "hope", "relief", "brave", "support", "love"];
const NEGATIVE: &[&str] = &["bad", "awful", "sad", "fear", "terrible", "killed", "dead", "attack", "panic"];
const NEGATION: &[&str] = &["not", "no", "never", "nothing", "nobody"];
const FILLER: &[&str] = &[
    "the", "police", "say", "report", "city", "people", "news", "now", "just", "here", "update", "witness",
    "official", "video", "photo", "confirmed", "breaking", "story", "claims", "source", "today", "street",
    "think", "because", "know", "maybe", "should", "why", "see", "what",
];
const TOPICS: &[&str] = &["storm", "election", "outbreak", "siege", "crash", "protest"];

/// Epoch milliseconds of 2015-01-01, the synthetic corpus start.
const EPOCH: Timestamp = 1_420_070_400_000;

struct Gen<'a> {
    spec: &'a SynthSpec,
    rng: ChaCha8Rng,
    verified: Vec<usize>,
    plain: Vec<usize>,
    follows: Vec<BTreeSet<usize>>,
}

fn user_id(i: usize) -> String {
    format!("u{i:05}")
}

impl Gen<'_> {
    fn words(&mut self, p: &ClassParams, stance: Stance) -> String {
        let boost = |base: f64, on: bool| if on { (base * 2.0).min(0.4) } else { base };
        let pos = boost(p.positive_rate, stance == Stance::Support);
        let neg = boost(p.negative_rate, stance == Stance::Against);
        let negation = boost(p.negation_rate, stance == Stance::Against);
        let n = self.rng.random_range(5..=22);
        let mut out = Vec::with_capacity(n + 1);
        for _ in 0..n {
            let u: f64 = self.rng.random();
            let list = if u < pos {
                POSITIVE
            } else if u < pos + neg {
                NEGATIVE
            } else if u < pos + neg + negation {
                NEGATION
            } else {
                FILLER
            };
            out.push(*list.choose(&mut self.rng).expect("non-empty word list"));
        }
        let mut text = out.join(" ");
        if self.rng.random_bool(p.url_rate) {
            let id: u32 = self.rng.random();
            text.push_str(&format!(" https://t.co/{id:08x}"));
        }
        text
    }

    fn author(&mut self, p: &ClassParams, stance: Stance, taken: &BTreeSet<usize>) -> usize {
        let pool_verified = stance == Stance::Support && self.rng.random_bool(p.supporter_verified_rate);
        for _ in 0..64 {
            let pool = if pool_verified && !self.verified.is_empty() { &self.verified } else { &self.plain };
            let pool = if pool.is_empty() { &self.verified } else { pool };
            let u = *pool.choose(&mut self.rng).expect("user pool is non-empty");
            if !taken.contains(&u) {
                return u;
            }
        }
        loop {
            let u = self.rng.random_range(0..self.spec.users);
            if !taken.contains(&u) {
                return u;
            }
        }
    }

    fn time_fraction(&mut self, stance: Stance) -> f64 {
        let u: f64 = self.rng.random();
        match stance {
            Stance::Support => u * u,
            Stance::Neutral => u,
            Stance::Against => u.sqrt(),
        }
    }

    fn rumour(&mut self, index: usize, veracity: bool, started_at: Timestamp) -> Result<Rumour, BenchError> {
        let spec = self.spec;
        let p = if veracity { &spec.true_class } else { &spec.false_class };
        let beta = |m: f64, k: f64| Beta::new(m * k, (1.0 - m) * k).map_err(|e| BenchError::InfeasibleSpec(e.to_string()));
        let deny = beta(p.deny_mean, p.deny_concentration)?.sample(&mut self.rng);
        let share = beta(p.support_share_mean, p.support_share_concentration)?.sample(&mut self.rng);
        let total = self.rng.random_range(spec.min_tweets..=spec.max_tweets);
        let n_against = ((deny * total as f64).round() as usize).min(total);
        let n_support = ((share * (total - n_against) as f64).round() as usize).min(total - n_against);
        let n_neutral = total - n_against - n_support;
        let hours = self.rng.random_range(spec.min_duration_hours..=spec.max_duration_hours);
        let duration = ((hours * MS_PER_HOUR as f64) as i64).max(2 * total as i64 + 10);
        let verified_at = started_at + duration;
        let rumour_id = format!("r{:03}", index + 1);

        let mut tweets: Vec<Tweet> = Vec::with_capacity(total);
        let mut originals_so_far: Vec<(Timestamp, String)> = Vec::new();
        let mut next_id = 0usize;
        let mut new_id = |rid: &str| {
            next_id += 1;
            format!("{rid}-t{next_id:04}")
        };

        for (stance, count) in [(Stance::Support, n_support), (Stance::Neutral, n_neutral), (Stance::Against, n_against)] {
            if count == 0 {
                continue;
            }
            let n_orig = ((p.original_fraction * count as f64).round() as usize).clamp(1, count);
            let mut taken = BTreeSet::new();
            let mut cascades: Vec<(String, Timestamp, usize, String)> = Vec::new();
            for _ in 0..n_orig {
                let author = self.author(p, stance, &taken);
                taken.insert(author);
                let frac = self.time_fraction(stance);
                let ts = started_at + (frac * 0.9 * duration as f64) as i64;
                let text = self.words(p, stance);
                let tweet_id = new_id(&rumour_id);
                let untranslatable = stance == Stance::Neutral && self.rng.random_bool(spec.untranslatable_rate);
                let u: f64 = self.rng.random();
                let earlier: Vec<&(Timestamp, String)> = originals_so_far.iter().filter(|(t, _)| *t < ts).collect();
                let (kind, source) = if !untranslatable && !earlier.is_empty() && u < spec.quote_rate + spec.reply_rate {
                    let src = earlier.choose(&mut self.rng).map(|(_, id)| id.clone());
                    let kind = if u < spec.quote_rate { TweetKind::Quote } else { TweetKind::Reply };
                    (kind, src)
                } else {
                    (TweetKind::Original, None)
                };
                tweets.push(Tweet {
                    tweet_id: tweet_id.clone(),
                    rumour_id: rumour_id.clone(),
                    author_id: user_id(author),
                    timestamp: ts,
                    text: text.clone(),
                    kind,
                    source_tweet_id: source,
                    stance: (!untranslatable).then_some(stance),
                    untranslatable,
                    attributes: BTreeMap::new(),
                });
                cascades.push((tweet_id, ts, author, text));
            }
            originals_so_far.extend(cascades.iter().map(|c| (c.1, c.0.clone())));

            // retweets: spread over cascades, later than their original
            let mut plan: Vec<(usize, Timestamp)> = (0..count - n_orig)
                .map(|_| {
                    let c = self.rng.random_range(0..cascades.len());
                    let t0 = cascades[c].1;
                    let room = (verified_at - 1 - t0).max(1) as f64;
                    let u: f64 = self.rng.random();
                    (c, t0 + 1 + (u * u * (room - 1.0).max(0.0)) as i64)
                })
                .collect();
            plan.sort_by_key(|&(c, t)| (t, c));
            let mut members: Vec<Vec<(usize, Timestamp)>> = cascades.iter().map(|c| vec![(c.2, c.1)]).collect();
            for (c, ts) in plan {
                let retweeter = self.author(p, stance, &taken);
                taken.insert(retweeter);
                let earlier: Vec<usize> = members[c].iter().filter(|(_, t)| *t < ts).map(|(u, _)| *u).collect();
                let target = if self.rng.random_bool(0.4) {
                    cascades[c].2
                } else {
                    *earlier.choose(&mut self.rng).expect("the original precedes its retweets")
                };
                self.follows[retweeter].insert(target);
                members[c].push((retweeter, ts));
                tweets.push(Tweet {
                    tweet_id: new_id(&rumour_id),
                    rumour_id: rumour_id.clone(),
                    author_id: user_id(retweeter),
                    timestamp: ts,
                    text: format!("RT {}", cascades[c].3),
                    kind: TweetKind::Retweet,
                    source_tweet_id: Some(cascades[c].0.clone()),
                    stance: None,
                    untranslatable: false,
                    attributes: BTreeMap::new(),
                });
            }
        }
        tweets.sort_by(|a, b| a.timestamp.cmp(&b.timestamp).then_with(|| a.tweet_id.cmp(&b.tweet_id)));
        Ok(Rumour {
            rumour_id,
            topic: TOPICS[index % TOPICS.len()].to_string(),
            claim: format!("Synthetic claim {} about the {}", index + 1, TOPICS[index % TOPICS.len()]),
            veracity,
            started_at,
            verified_at,
            tweets,
        })
    }

    fn profile(&mut self, i: usize) -> UserProfile {
        let verified = self.verified.binary_search(&i).is_ok();
        let followers = LogNormal::new(if verified { 9.0 } else { 5.0 }, 1.5).expect("valid lognormal");
        let friends = LogNormal::new(5.5, 1.0).expect("valid lognormal");
        let statuses = LogNormal::new(8.0, 1.5).expect("valid lognormal");
        let likes = LogNormal::new(7.0, 2.0).expect("valid lognormal");
        let tenure_days = self.rng.random_range(30..4000);
        let mood = self.rng.random_range(-1.0..1.0f64);
        let n_past = self.rng.random_range(0..6);
        let past_tweets = (0..n_past)
            .map(|k| {
                let w = if mood > 0.0 { POSITIVE } else { NEGATIVE };
                let mut words: Vec<&str> = (0..6).map(|_| *FILLER.choose(&mut self.rng).expect("filler")).collect();
                if self.rng.random_bool(mood.abs()) {
                    words.push(w.choose(&mut self.rng).expect("words"));
                }
                PastTweet {
                    timestamp: EPOCH - (k as i64 + 1) * MS_PER_DAY,
                    text: words.join(" "),
                }
            })
            .collect();
        UserProfile {
            user_id: user_id(i),
            registered_at: EPOCH - tenure_days * MS_PER_DAY,
            verified,
            followers_count: followers.sample(&mut self.rng) as u64,
            friends_count: friends.sample(&mut self.rng) as u64,
            statuses_count: statuses.sample(&mut self.rng) as u64,
            likes_count: likes.sample(&mut self.rng) as u64,
            has_description: self.rng.random_bool(if verified { 0.95 } else { 0.7 }),
            has_location: self.rng.random_bool(0.5),
            past_tweets,
        }
    }
}

/// Builds a corpus from `spec`. Retweets carry no stance, so the result
/// needs annotation closure like an ingested corpus. Deterministic in the seed.
pub fn generate_synthetic(spec: &SynthSpec) -> Result<Dataset, BenchError> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut ids: Vec<usize> = (0..spec.users).collect();
    ids.shuffle(&mut rng);
    let n_verified = ((spec.verified_rate * spec.users as f64).round() as usize).min(spec.users);
    let mut verified = ids[..n_verified].to_vec();
    let mut plain = ids[n_verified..].to_vec();
    verified.sort_unstable();
    plain.sort_unstable();
    let follows = (0..spec.users)
        .map(|u| {
            (0..spec.base_followees)
                .map(|_| rng.random_range(0..spec.users))
                .filter(|&v| v != u)
                .collect()
        })
        .collect();
    let mut g = Gen {
        spec,
        rng,
        verified,
        plain,
        follows,
    };

    let mut labels: Vec<bool> = (0..spec.rumours).map(|i| i < spec.true_rumours).collect();
    labels.shuffle(&mut g.rng);
    let mut rumours = Vec::with_capacity(spec.rumours);
    for (i, &v) in labels.iter().enumerate() {
        let start = EPOCH + i as i64 * 3 * MS_PER_DAY;
        rumours.push(g.rumour(i, v, start)?);
    }

    let active: BTreeSet<usize> = rumours
        .iter()
        .flat_map(|r| &r.tweets)
        .map(|t| t.author_id[1..].parse::<usize>().expect("generated user id"))
        .collect();
    let mut users = BTreeMap::new();
    let mut followees = FolloweeIndex::new();
    for i in 0..spec.users {
        let profile = g.profile(i);
        if active.contains(&i) {
            followees.insert(&profile.user_id, g.follows[i].iter().map(|&v| user_id(v)));
            users.insert(profile.user_id.clone(), profile);
        }
    }
    Ok(Dataset {
        rumours,
        users,
        followees,
    })
}

/// Generates a corpus and writes its four files into `dir`.
pub fn write_synthetic(spec: &SynthSpec, dir: impl AsRef<Path>) -> Result<CorpusPaths, BenchError> {
    let ds = generate_synthetic(spec)?;
    Ok(write_corpus(&ds, dir)?)
}
