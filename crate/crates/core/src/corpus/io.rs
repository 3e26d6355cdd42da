use std::collections::{BTreeMap, HashMap, HashSet};
use std::fs;
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use super::{
    CorpusError, Dataset, FolloweeIndex, Rumour, Timestamp, Tweet, TweetKind, UserProfile,
    PAST_TWEET_CAP,
};

const SCHEMA_VERSION: u64 = 1;

pub const TWEETS_FILE: &str = "tweets.jsonl";
pub const USERS_FILE: &str = "users.jsonl";
pub const FOLLOWEES_FILE: &str = "followees.jsonl";
pub const RUMOURS_FILE: &str = "rumours.jsonl";

/// Locations of the four corpus files.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorpusPaths {
    pub tweets: PathBuf,
    pub users: PathBuf,
    pub followees: PathBuf,
    pub rumours: PathBuf,
}

impl CorpusPaths {
    /// The standard file names inside `dir`.
    pub fn in_dir(dir: impl AsRef<Path>) -> Self {
        let dir = dir.as_ref();
        Self {
            tweets: dir.join(TWEETS_FILE),
            users: dir.join(USERS_FILE),
            followees: dir.join(FOLLOWEES_FILE),
            rumours: dir.join(RUMOURS_FILE),
        }
    }
}

/// The four corpus files held in memory.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CorpusText {
    pub tweets: String,
    pub users: String,
    pub followees: String,
    pub rumours: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LoadWarning {
    /// The source tweet is not part of the rumour; the tweet is treated as a root.
    DanglingSource {
        rumour_id: String,
        tweet_id: String,
        source_tweet_id: String,
    },
    PastTweetsTruncated { user_id: String, dropped: usize },
}

#[derive(Clone, Debug)]
pub struct Loaded {
    pub dataset: Dataset,
    pub warnings: Vec<LoadWarning>,
}

impl Loaded {
    pub fn dangling_count(&self) -> usize {
        self.warnings
            .iter()
            .filter(|w| matches!(w, LoadWarning::DanglingSource { .. }))
            .count()
    }
}

#[derive(Serialize, Deserialize)]
struct Versioned<T> {
    v: u64,
    #[serde(flatten)]
    record: T,
}

#[derive(Serialize, Deserialize)]
struct FolloweeRecord {
    user_id: String,
    followees: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct RumourRecord {
    rumour_id: String,
    topic: String,
    claim: String,
    veracity: bool,
    started_at: Timestamp,
    verified_at: Timestamp,
}

fn read_file(path: &Path) -> Result<String, CorpusError> {
    fs::read_to_string(path).map_err(|source| CorpusError::Io {
        path: path.display().to_string(),
        source,
    })
}

pub fn load_corpus(paths: &CorpusPaths) -> Result<Loaded, CorpusError> {
    let text = CorpusText {
        tweets: read_file(&paths.tweets)?,
        users: read_file(&paths.users)?,
        followees: read_file(&paths.followees)?,
        rumours: read_file(&paths.rumours)?,
    };
    parse_corpus(&text)
}

fn parse_lines<T: DeserializeOwned>(file: &str, text: &str) -> Result<Vec<T>, CorpusError> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        if line.trim().is_empty() {
            continue;
        }
        let malformed = |e: serde_json::Error| CorpusError::Malformed {
            file: file.to_string(),
            line: line_no,
            message: e.to_string(),
        };
        let raw: serde_json::Value = serde_json::from_str(line).map_err(malformed)?;
        match raw.get("v").and_then(|v| v.as_u64()) {
            Some(SCHEMA_VERSION) => {}
            Some(found) => {
                return Err(CorpusError::SchemaVersion {
                    file: file.to_string(),
                    line: line_no,
                    found,
                })
            }
            None => {
                return Err(CorpusError::Malformed {
                    file: file.to_string(),
                    line: line_no,
                    message: "missing schema version field \"v\"".into(),
                })
            }
        }
        let rec: Versioned<T> = serde_json::from_value(raw).map_err(malformed)?;
        out.push(rec.record);
    }
    Ok(out)
}

/// Parses and validates an in-memory corpus.
pub fn parse_corpus(text: &CorpusText) -> Result<Loaded, CorpusError> {
    let rumour_recs: Vec<RumourRecord> = parse_lines(RUMOURS_FILE, &text.rumours)?;
    let tweets: Vec<Tweet> = parse_lines(TWEETS_FILE, &text.tweets)?;
    let user_recs: Vec<UserProfile> = parse_lines(USERS_FILE, &text.users)?;
    let followee_recs: Vec<FolloweeRecord> = parse_lines(FOLLOWEES_FILE, &text.followees)?;

    if rumour_recs.is_empty() || tweets.is_empty() {
        return Err(CorpusError::ZeroRumours);
    }
    let mut warnings = Vec::new();

    let mut users = BTreeMap::new();
    for mut u in user_recs {
        u.past_tweets.sort_by(|a, b| b.timestamp.cmp(&a.timestamp).then(a.text.cmp(&b.text)));
        if u.past_tweets.len() > PAST_TWEET_CAP {
            let dropped = u.past_tweets.len() - PAST_TWEET_CAP;
            u.past_tweets.truncate(PAST_TWEET_CAP);
            warnings.push(LoadWarning::PastTweetsTruncated {
                user_id: u.user_id.clone(),
                dropped,
            });
        }
        let id = u.user_id.clone();
        if users.insert(id.clone(), u).is_some() {
            return Err(CorpusError::DuplicateUser(id));
        }
    }

    let mut followees = FolloweeIndex::new();
    for rec in followee_recs {
        if rec.followees.contains(&rec.user_id) {
            return Err(CorpusError::SelfFollow(rec.user_id));
        }
        followees.insert(&rec.user_id, rec.followees);
    }

    let mut rumours: BTreeMap<String, Rumour> = BTreeMap::new();
    for r in rumour_recs {
        if r.verified_at <= r.started_at {
            return Err(CorpusError::InvalidRumour {
                rumour_id: r.rumour_id,
                reason: "verified_at must be after started_at".into(),
            });
        }
        let id = r.rumour_id.clone();
        let rumour = Rumour {
            rumour_id: r.rumour_id,
            topic: r.topic,
            claim: r.claim,
            veracity: r.veracity,
            started_at: r.started_at,
            verified_at: r.verified_at,
            tweets: Vec::new(),
        };
        if rumours.insert(id.clone(), rumour).is_some() {
            return Err(CorpusError::DuplicateRumour(id));
        }
    }

    let mut seen = HashSet::new();
    let mut earliest_by_user: HashMap<String, Timestamp> = HashMap::new();
    for t in tweets {
        if !seen.insert(t.tweet_id.clone()) {
            return Err(CorpusError::DuplicateTweet(t.tweet_id));
        }
        validate_tweet(&t)?;
        if !users.contains_key(&t.author_id) {
            return Err(CorpusError::UnresolvedAuthor {
                tweet_id: t.tweet_id,
                author_id: t.author_id,
            });
        }
        let Some(rumour) = rumours.get_mut(&t.rumour_id) else {
            return Err(CorpusError::UnknownRumour {
                tweet_id: t.tweet_id,
                rumour_id: t.rumour_id,
            });
        };
        if t.timestamp < rumour.started_at || t.timestamp > rumour.verified_at {
            return Err(CorpusError::InvalidTweet {
                tweet_id: t.tweet_id,
                reason: format!(
                    "timestamp {} outside rumour window [{}, {}]",
                    t.timestamp, rumour.started_at, rumour.verified_at
                ),
            });
        }
        earliest_by_user
            .entry(t.author_id.clone())
            .and_modify(|e| *e = (*e).min(t.timestamp))
            .or_insert(t.timestamp);
        rumour.tweets.push(t);
    }

    for (user_id, earliest) in &earliest_by_user {
        if users[user_id].registered_at > *earliest {
            return Err(CorpusError::InvalidUser {
                user_id: user_id.clone(),
                reason: "registered after its earliest corpus tweet".into(),
            });
        }
    }

    let mut out = Vec::with_capacity(rumours.len());
    for (_, mut rumour) in rumours {
        if rumour.tweets.is_empty() {
            return Err(CorpusError::InvalidRumour {
                rumour_id: rumour.rumour_id,
                reason: "rumour has no tweets".into(),
            });
        }
        rumour
            .tweets
            .sort_by(|a, b| a.timestamp.cmp(&b.timestamp).then_with(|| a.tweet_id.cmp(&b.tweet_id)));
        let ids: HashSet<&str> = rumour.tweets.iter().map(|t| t.tweet_id.as_str()).collect();
        for t in &rumour.tweets {
            if let Some(src) = &t.source_tweet_id {
                if !ids.contains(src.as_str()) {
                    log::warn!(
                        "rumour {}: tweet {} references missing source {}",
                        rumour.rumour_id,
                        t.tweet_id,
                        src
                    );
                    warnings.push(LoadWarning::DanglingSource {
                        rumour_id: rumour.rumour_id.clone(),
                        tweet_id: t.tweet_id.clone(),
                        source_tweet_id: src.clone(),
                    });
                }
            }
        }
        out.push(rumour);
    }

    Ok(Loaded {
        dataset: Dataset {
            rumours: out,
            users,
            followees,
        },
        warnings,
    })
}

fn validate_tweet(t: &Tweet) -> Result<(), CorpusError> {
    let invalid = |reason: &str| CorpusError::InvalidTweet {
        tweet_id: t.tweet_id.clone(),
        reason: reason.to_string(),
    };
    match (&t.kind, &t.source_tweet_id) {
        (TweetKind::Original, _) => Ok(()),
        (_, None) => Err(invalid("non-original tweet requires source_tweet_id")),
        (_, Some(src)) if *src == t.tweet_id => Err(invalid("tweet cannot be its own source")),
        _ => Ok(()),
    }
}

fn to_line<T: Serialize>(record: T) -> String {
    let mut s = serde_json::to_string(&Versioned {
        v: SCHEMA_VERSION,
        record,
    })
    .expect("corpus records serialise");
    s.push('\n');
    s
}

impl Dataset {
    /// Canonical serialisation: rumours, users and followees by id, tweets by
    /// `(rumour, timestamp, tweet_id)`.
    pub fn to_text(&self) -> CorpusText {
        let mut text = CorpusText::default();
        let mut rumours: Vec<&Rumour> = self.rumours.iter().collect();
        rumours.sort_by(|a, b| a.rumour_id.cmp(&b.rumour_id));
        for r in rumours {
            text.rumours.push_str(&to_line(RumourRecord {
                rumour_id: r.rumour_id.clone(),
                topic: r.topic.clone(),
                claim: r.claim.clone(),
                veracity: r.veracity,
                started_at: r.started_at,
                verified_at: r.verified_at,
            }));
            let mut tweets: Vec<&Tweet> = r.tweets.iter().collect();
            tweets.sort_by(|a, b| a.timestamp.cmp(&b.timestamp).then_with(|| a.tweet_id.cmp(&b.tweet_id)));
            for t in tweets {
                text.tweets.push_str(&to_line(t));
            }
        }
        for u in self.users.values() {
            text.users.push_str(&to_line(u));
        }
        for (user, set) in self.followees.users() {
            text.followees.push_str(&to_line(FolloweeRecord {
                user_id: user.clone(),
                followees: set.iter().cloned().collect(),
            }));
        }
        text
    }
}

/// Writes the canonical form of `dataset` into `dir` (created if missing).
pub fn write_corpus(dataset: &Dataset, dir: impl AsRef<Path>) -> Result<CorpusPaths, CorpusError> {
    let dir = dir.as_ref();
    let io_err = |path: &Path| {
        let path = path.display().to_string();
        move |source| CorpusError::Io { path, source }
    };
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    let paths = CorpusPaths::in_dir(dir);
    let text = dataset.to_text();
    for (path, body) in [
        (&paths.tweets, &text.tweets),
        (&paths.users, &text.users),
        (&paths.followees, &text.followees),
        (&paths.rumours, &text.rumours),
    ] {
        fs::write(path, body).map_err(io_err(path))?;
    }
    Ok(paths)
}
