//! Tweets, users, followees and rumours: the annotated corpus data model.
//!
//! A corpus is four line-delimited JSON files (`tweets.jsonl`, `users.jsonl`,
//! `followees.jsonl`, `rumours.jsonl`). [`load_corpus`] parses and validates
//! them into an immutable [`Dataset`]; [`close_annotations`] propagates stance
//! labels from source tweets to their retweets.

mod closure;
mod io;
mod summary;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

pub use closure::close_annotations;
pub use io::{load_corpus, parse_corpus, write_corpus, CorpusPaths, CorpusText, Loaded, LoadWarning};
pub use summary::{RumourSummary, StanceCounts, SummaryStats, SummaryTable};

/// Milliseconds since the Unix epoch, UTC.
pub type Timestamp = i64;

pub const MS_PER_DAY: i64 = 86_400_000;
pub const MS_PER_HOUR: i64 = 3_600_000;

/// Most recent past tweets retained per user.
pub const PAST_TWEET_CAP: usize = 400;

/// Stance of a tweet towards the rumour claim.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "i8", into = "i8")]
pub enum Stance {
    Against,
    Neutral,
    Support,
}

impl Stance {
    /// Partition order used throughout: support, neutral, against.
    pub const ALL: [Stance; 3] = [Stance::Support, Stance::Neutral, Stance::Against];

    pub fn value(self) -> i8 {
        match self {
            Stance::Against => -1,
            Stance::Neutral => 0,
            Stance::Support => 1,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Stance::Against => "against",
            Stance::Neutral => "neutral",
            Stance::Support => "support",
        }
    }

    /// Index into `[support, neutral, against]` arrays.
    pub fn slot(self) -> usize {
        match self {
            Stance::Support => 0,
            Stance::Neutral => 1,
            Stance::Against => 2,
        }
    }
}

impl TryFrom<i8> for Stance {
    type Error = String;

    fn try_from(v: i8) -> Result<Self, Self::Error> {
        match v {
            -1 => Ok(Stance::Against),
            0 => Ok(Stance::Neutral),
            1 => Ok(Stance::Support),
            other => Err(format!("stance must be -1, 0 or 1, got {other}")),
        }
    }
}

impl From<Stance> for i8 {
    fn from(s: Stance) -> i8 {
        s.value()
    }
}

impl fmt::Display for Stance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TweetKind {
    Original,
    Retweet,
    Quote,
    Reply,
}

/// A named tweet attribute as it appears in the corpus: a flag or a number.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AttrValue {
    Flag(bool),
    Number(f64),
}

impl AttrValue {
    pub fn as_f64(self) -> f64 {
        match self {
            AttrValue::Flag(b) => f64::from(u8::from(b)),
            AttrValue::Number(x) => x,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tweet {
    pub tweet_id: String,
    pub rumour_id: String,
    pub author_id: String,
    pub timestamp: Timestamp,
    pub text: String,
    pub kind: TweetKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source_tweet_id: Option<String>,
    #[serde(default)]
    pub stance: Option<Stance>,
    /// Non-English text that could not be translated; annotated neutral.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub untranslatable: bool,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub attributes: BTreeMap<String, AttrValue>,
}

impl Tweet {
    pub fn attribute(&self, name: &str) -> Option<f64> {
        self.attributes.get(name).map(|v| v.as_f64())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PastTweet {
    pub timestamp: Timestamp,
    pub text: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UserProfile {
    pub user_id: String,
    pub registered_at: Timestamp,
    pub verified: bool,
    pub followers_count: u64,
    pub friends_count: u64,
    pub statuses_count: u64,
    pub likes_count: u64,
    pub has_description: bool,
    pub has_location: bool,
    #[serde(default)]
    pub past_tweets: Vec<PastTweet>,
}

impl UserProfile {
    /// Past tweets posted strictly before `start`, newest first, at most
    /// [`PAST_TWEET_CAP`] of them.
    pub fn past_tweets_before(&self, start: Timestamp) -> impl Iterator<Item = &PastTweet> {
        self.past_tweets
            .iter()
            .filter(move |p| p.timestamp < start)
            .take(PAST_TWEET_CAP)
    }
}

/// Followee (friend) lists keyed by user.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct FolloweeIndex {
    map: BTreeMap<String, BTreeSet<String>>,
}

impl FolloweeIndex {
    pub fn new() -> Self {
        Self::default()
    }

    /// Inserts `user`'s followee list, dropping any self-reference.
    pub fn insert<I, S>(&mut self, user: &str, followees: I)
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let set = self.map.entry(user.to_string()).or_default();
        for f in followees {
            let f = f.into();
            if f != user {
                set.insert(f);
            }
        }
    }

    /// `true` when `follower` has `followee` in its followee list.
    pub fn follows(&self, follower: &str, followee: &str) -> bool {
        self.map
            .get(follower)
            .is_some_and(|s| s.contains(followee))
    }

    /// `None` when no followee data was collected for `user`.
    pub fn followees_of(&self, user: &str) -> Option<&BTreeSet<String>> {
        self.map.get(user)
    }

    pub fn users(&self) -> impl Iterator<Item = (&String, &BTreeSet<String>)> {
        self.map.iter()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Rumour {
    pub rumour_id: String,
    pub topic: String,
    pub claim: String,
    /// Ground truth: `true` when the claim was confirmed.
    pub veracity: bool,
    pub started_at: Timestamp,
    pub verified_at: Timestamp,
    /// Sorted by `(timestamp, tweet_id)`.
    pub tweets: Vec<Tweet>,
}

impl Rumour {
    pub fn duration_ms(&self) -> i64 {
        self.verified_at - self.started_at
    }

    pub fn stance_counts(&self) -> StanceCounts {
        StanceCounts::from_tweets(self.tweets.iter())
    }

    pub fn first_tweet_at(&self) -> Option<Timestamp> {
        self.tweets.first().map(|t| t.timestamp)
    }
}

/// A validated corpus. Immutable once loaded.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Dataset {
    pub rumours: Vec<Rumour>,
    pub users: BTreeMap<String, UserProfile>,
    pub followees: FolloweeIndex,
}

impl Dataset {
    pub fn rumour(&self, id: &str) -> Option<&Rumour> {
        self.rumours.iter().find(|r| r.rumour_id == id)
    }

    pub fn tweet_count(&self) -> usize {
        self.rumours.iter().map(|r| r.tweets.len()).sum()
    }

    /// Number of tweets still lacking a stance label.
    pub fn unannotated_count(&self) -> usize {
        self.rumours
            .iter()
            .flat_map(|r| &r.tweets)
            .filter(|t| t.stance.is_none())
            .count()
    }

    pub fn summary(&self) -> SummaryTable {
        SummaryTable::from_dataset(self)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CorpusError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{file}:{line}: malformed record: {message}")]
    Malformed {
        file: String,
        line: usize,
        message: String,
    },
    #[error("{file}:{line}: unsupported schema version {found} (expected 1)")]
    SchemaVersion { file: String, line: usize, found: u64 },
    #[error("corpus has zero rumours")]
    ZeroRumours,
    #[error("duplicate tweet_id {0}")]
    DuplicateTweet(String),
    #[error("duplicate user_id {0}")]
    DuplicateUser(String),
    #[error("duplicate rumour_id {0}")]
    DuplicateRumour(String),
    #[error("tweet {tweet_id}: author {author_id} has no user profile")]
    UnresolvedAuthor { tweet_id: String, author_id: String },
    #[error("tweet {tweet_id}: unknown rumour {rumour_id}")]
    UnknownRumour { tweet_id: String, rumour_id: String },
    #[error("tweet {tweet_id}: {reason}")]
    InvalidTweet { tweet_id: String, reason: String },
    #[error("rumour {rumour_id}: {reason}")]
    InvalidRumour { rumour_id: String, reason: String },
    #[error("user {user_id}: {reason}")]
    InvalidUser { user_id: String, reason: String },
    #[error("user {0} lists itself as a followee")]
    SelfFollow(String),
    #[error("tweet {tweet_id} ({kind:?}) has no stance annotation")]
    MissingStance { tweet_id: String, kind: TweetKind },
    #[error("retweet {tweet_id}: chain ends at unannotated tweet {root_id}")]
    UnannotatedRoot { tweet_id: String, root_id: String },
    #[error("retweet {0}: source chain contains a cycle")]
    CyclicChain(String),
}
