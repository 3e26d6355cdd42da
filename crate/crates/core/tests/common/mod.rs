#![allow(dead_code)]

pub mod fixtures;
pub mod oracle;

use std::collections::BTreeMap;

use rumour_core::corpus::{Dataset, FolloweeIndex, Rumour, Stance, Timestamp, Tweet, TweetKind, UserProfile};

pub fn tweet(id: &str, author: &str, ts: Timestamp, kind: TweetKind, source: Option<&str>, stance: Option<Stance>) -> Tweet {
    Tweet {
        tweet_id: id.to_string(),
        rumour_id: "r1".to_string(),
        author_id: author.to_string(),
        timestamp: ts,
        text: String::new(),
        kind,
        source_tweet_id: source.map(str::to_string),
        stance,
        untranslatable: false,
        attributes: BTreeMap::new(),
    }
}

pub fn original(id: &str, author: &str, ts: Timestamp, stance: Stance) -> Tweet {
    tweet(id, author, ts, TweetKind::Original, None, Some(stance))
}

pub fn retweet(id: &str, author: &str, ts: Timestamp, source: &str, stance: Stance) -> Tweet {
    tweet(id, author, ts, TweetKind::Retweet, Some(source), Some(stance))
}

pub fn user(id: &str) -> UserProfile {
    UserProfile {
        user_id: id.to_string(),
        registered_at: 0,
        verified: false,
        followers_count: 10,
        friends_count: 10,
        statuses_count: 100,
        likes_count: 5,
        has_description: false,
        has_location: false,
        past_tweets: Vec::new(),
    }
}

pub fn rumour(id: &str, veracity: bool, start: Timestamp, end: Timestamp, mut tweets: Vec<Tweet>) -> Rumour {
    for t in &mut tweets {
        t.rumour_id = id.to_string();
    }
    tweets.sort_by(|a, b| a.timestamp.cmp(&b.timestamp).then_with(|| a.tweet_id.cmp(&b.tweet_id)));
    Rumour {
        rumour_id: id.to_string(),
        topic: "t".to_string(),
        claim: "c".to_string(),
        veracity,
        started_at: start,
        verified_at: end,
        tweets,
    }
}

/// A dataset whose users are every tweet author, with no followee data.
pub fn dataset(rumours: Vec<Rumour>) -> Dataset {
    let mut users = BTreeMap::new();
    for t in rumours.iter().flat_map(|r| &r.tweets) {
        users.entry(t.author_id.clone()).or_insert_with(|| user(&t.author_id));
    }
    Dataset {
        rumours,
        users,
        followees: FolloweeIndex::new(),
    }
}
