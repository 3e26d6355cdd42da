//! Independent reference computations used to cross-check the pipeline.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::IndexedRandom;
use rand::Rng;
use rumour_core::corpus::{
    AttrValue, FolloweeIndex, PastTweet, Rumour, Stance, Tweet, TweetKind, UserProfile, MS_PER_DAY,
};
use rumour_core::lingua::{message_attributes, score_text, Category, Lexicon};

const WORDS: &[&str] = &[
    "good", "great", "sad", "awful", "fear", "think", "because", "maybe", "definitely", "damn", "lol",
    "not", "never", "don't", "police", "city", "the", "news", "#breaking", "@someone", "thanks",
];

/// A random annotation-closed rumour with at most `max_tweets` tweets over
/// up to 8 users, with profiles and partial followee data.
pub fn random_rumour(
    rng: &mut impl Rng,
    max_tweets: usize,
) -> (Rumour, BTreeMap<String, UserProfile>, FolloweeIndex) {
    let n_users = rng.random_range(1..=8);
    let start = 1_000 * MS_PER_DAY;
    let duration = rng.random_range(20..2_000i64);
    let users: Vec<String> = (0..n_users).map(|i| format!("u{i}")).collect();
    let mut profiles = BTreeMap::new();
    for u in &users {
        let past = (0..rng.random_range(0..4))
            .map(|k| PastTweet {
                timestamp: start + rng.random_range(-5i64..3) * MS_PER_DAY + k,
                text: text(rng),
            })
            .collect();
        profiles.insert(
            u.clone(),
            UserProfile {
                user_id: u.clone(),
                registered_at: start - rng.random_range(0..3_000i64) * MS_PER_DAY - rng.random_range(0..MS_PER_DAY),
                verified: rng.random_bool(0.3),
                followers_count: rng.random_range(0..5_000),
                friends_count: rng.random_range(0..800),
                statuses_count: rng.random_range(0..20_000),
                likes_count: rng.random_range(0..9_000),
                has_description: rng.random_bool(0.5),
                has_location: rng.random_bool(0.5),
                past_tweets: past,
            },
        );
    }
    let mut followees = FolloweeIndex::new();
    for u in &users {
        if rng.random_bool(0.85) {
            let f: Vec<String> = users.iter().filter(|v| *v != u && rng.random_bool(0.4)).cloned().collect();
            followees.insert(u, f);
        }
    }

    let n = rng.random_range(1..=max_tweets);
    let mut times: Vec<i64> = (0..n).map(|_| start + rng.random_range(0..=duration)).collect();
    times.sort_unstable();
    let mut tweets: Vec<Tweet> = Vec::with_capacity(n);
    for (i, &ts) in times.iter().enumerate() {
        let author = users.choose(rng).unwrap().clone();
        let earlier: Vec<usize> = (0..tweets.len()).filter(|&j| tweets[j].timestamp < ts).collect();
        let roll: f64 = rng.random();
        let (kind, source) = if !earlier.is_empty() && roll < 0.45 {
            (TweetKind::Retweet, Some(*earlier.choose(rng).unwrap()))
        } else if !earlier.is_empty() && roll < 0.55 {
            (TweetKind::Quote, Some(*earlier.choose(rng).unwrap()))
        } else if !earlier.is_empty() && roll < 0.6 {
            (TweetKind::Reply, Some(*earlier.choose(rng).unwrap()))
        } else {
            (TweetKind::Original, None)
        };
        let stance = match (kind, source) {
            (TweetKind::Retweet, Some(j)) => tweets[j].stance,
            _ => Some(*[Stance::Support, Stance::Neutral, Stance::Against].choose(rng).unwrap()),
        };
        let mut attributes = BTreeMap::new();
        if rng.random_bool(0.15) {
            attributes.insert("parse_depth".to_string(), AttrValue::Number(rng.random_range(1..9) as f64));
        }
        if rng.random_bool(0.1) {
            attributes.insert("has_url".to_string(), AttrValue::Flag(rng.random_bool(0.5)));
        }
        let mut source_id = source.map(|j| tweets[j].tweet_id.clone());
        if kind == TweetKind::Retweet && rng.random_bool(0.05) {
            source_id = Some("missing".to_string());
        }
        tweets.push(Tweet {
            tweet_id: format!("t{i:03}"),
            rumour_id: "r".to_string(),
            author_id: author,
            timestamp: ts,
            text: text(rng),
            kind,
            source_tweet_id: source_id,
            stance,
            untranslatable: false,
            attributes,
        });
    }
    let rumour = Rumour {
        rumour_id: "r".to_string(),
        topic: "t".to_string(),
        claim: "c".to_string(),
        veracity: rng.random_bool(0.5),
        started_at: start,
        verified_at: start + duration,
        tweets,
    };
    (rumour, profiles, followees)
}

fn text(rng: &mut impl Rng) -> String {
    let n = rng.random_range(0..10);
    let mut w: Vec<String> = (0..n).map(|_| WORDS.choose(rng).unwrap().to_string()).collect();
    if rng.random_bool(0.3) {
        w.push("https://t.co/x".to_string());
    }
    w.join(" ")
}

fn mean(v: &[f64]) -> f64 {
    if v.is_empty() {
        0.0
    } else {
        v.iter().sum::<f64>() / v.len() as f64
    }
}

fn ratio(s: f64, n: f64, a: f64) -> f64 {
    (s + n + 1.0) / (a + n + 1.0)
}

fn sides<F: Fn(Stance) -> f64>(f: F) -> (f64, f64, f64) {
    (f(Stance::Support), f(Stance::Neutral), f(Stance::Against))
}

/// Parent of `author`'s retweet at position `pos` of `part`, by direct
/// application of the rule. `part` is sorted and single-stance.
pub fn reference_parent(
    part: &[&Tweet],
    pos: usize,
    all: &[Tweet],
    followees: &FolloweeIndex,
) -> Option<String> {
    let t = part[pos];
    let key = cascade_root(t, all);
    let earlier: Vec<&str> = part[..pos]
        .iter()
        .filter(|p| p.timestamp < t.timestamp && p.author_id != t.author_id)
        .filter(|p| std::ptr::eq(cascade_root(p, all), key))
        .map(|p| p.author_id.as_str())
        .collect();
    let source_author = if std::ptr::eq(key, t) {
        None
    } else {
        earlier.iter().find(|u| **u == key.author_id).map(|u| u.to_string())
    };
    match followees.followees_of(&t.author_id) {
        None => source_author,
        Some(f) => earlier
            .iter()
            .rev()
            .find(|u| f.contains(**u))
            .map(|u| u.to_string())
            .or(source_author),
    }
}

fn cascade_root<'a>(t: &'a Tweet, all: &'a [Tweet]) -> &'a Tweet {
    let mut cur = t;
    for _ in 0..=all.len() {
        if cur.kind != TweetKind::Retweet {
            break;
        }
        match cur.source_tweet_id.as_deref().and_then(|s| all.iter().find(|x| x.tweet_id == s)) {
            Some(src) => cur = src,
            None => break,
        }
    }
    cur
}

pub struct RefForest {
    /// `(user, parent)` in order of first appearance.
    pub nodes: Vec<(String, Option<String>)>,
    pub edges: Vec<(String, String)>,
    pub quotes: Vec<(String, String)>,
}

/// Forest of one stance over the window `all`, rebuilt from the rule.
pub fn reference_forest(stance: Stance, all: &[Tweet], followees: &FolloweeIndex) -> RefForest {
    let mut part: Vec<&Tweet> = all.iter().filter(|t| t.stance == Some(stance)).collect();
    part.sort_by(|a, b| (a.timestamp, &a.tweet_id).cmp(&(b.timestamp, &b.tweet_id)));
    let mut f = RefForest {
        nodes: Vec::new(),
        edges: Vec::new(),
        quotes: Vec::new(),
    };
    for (pos, t) in part.iter().enumerate() {
        let known = f.nodes.iter().any(|(u, _)| *u == t.author_id);
        if t.kind != TweetKind::Retweet {
            if !known {
                f.nodes.push((t.author_id.clone(), None));
            }
            if t.kind == TweetKind::Quote {
                if let Some(src) = all.iter().find(|x| Some(&x.tweet_id) == t.source_tweet_id.as_ref()) {
                    if src.author_id != t.author_id {
                        f.quotes.push((t.author_id.clone(), src.author_id.clone()));
                    }
                }
            }
            continue;
        }
        if !known {
            let p = reference_parent(&part, pos, all, followees);
            if let Some(p) = &p {
                f.edges.push((p.clone(), t.author_id.clone()));
            }
            f.nodes.push((t.author_id.clone(), p));
        }
    }
    f
}

fn network_values(
    f: &RefForest,
    profiles: &BTreeMap<String, UserProfile>,
    followees: &FolloweeIndex,
) -> [f64; 5] {
    let frac = |a: usize, b: usize| if b == 0 { 0.0 } else { a as f64 / b as f64 };
    let root_of = |u: &str| {
        let mut cur = u.to_string();
        while let Some((_, Some(p))) = f.nodes.iter().find(|(x, _)| *x == cur) {
            cur = p.clone();
        }
        cur
    };
    let roots: Vec<&String> = f.nodes.iter().filter(|(_, p)| p.is_none()).map(|(u, _)| u).collect();
    let mut best: Option<(&String, usize)> = None;
    for r in &roots {
        let size = f.nodes.iter().filter(|(u, _)| root_of(u) == **r).count();
        if best.is_none_or(|(_, s)| size > s) {
            best = Some((r, size));
        }
    }
    let lcc_degree = best.map_or(0, |(r, _)| f.nodes.iter().filter(|(_, p)| p.as_ref() == Some(r)).count());
    let followers = |u: &str| profiles.get(u).map_or(0, |p| p.followers_count);
    [
        roots.len() as f64,
        lcc_degree as f64,
        frac(f.edges.iter().filter(|(p, c)| followees.follows(c, p)).count(), f.edges.len()),
        frac(f.quotes.iter().filter(|(q, s)| followees.follows(q, s)).count(), f.quotes.len()),
        frac(f.edges.iter().filter(|(p, c)| followers(c) > followers(p)).count(), f.edges.len()),
    ]
}

fn user_values(p: &UserProfile, start: i64, lexicon: &Lexicon) -> [f64; 10] {
    let flag = |b: bool| if b { 1.0 } else { 0.0 };
    let tenure = ((start - p.registered_at).max(0) / MS_PER_DAY) as f64;
    let mut past: Vec<&PastTweet> = p.past_tweets.iter().filter(|t| t.timestamp < start).collect();
    past.sort_by(|a, b| b.timestamp.cmp(&a.timestamp));
    past.truncate(400);
    let pol: Vec<f64> = past
        .iter()
        .map(|t| {
            let s = score_text(&t.text, lexicon);
            s.get(Category::Positive) - s.get(Category::Negative)
        })
        .collect();
    [
        (p.followers_count as f64).ln_1p(),
        (p.friends_count as f64).ln_1p(),
        (p.statuses_count as f64).ln_1p(),
        (p.likes_count as f64).ln_1p(),
        flag(p.verified),
        flag(p.has_description),
        flag(p.has_location),
        tenure.ln_1p(),
        (p.statuses_count as f64 / tenure.max(1.0)).ln_1p(),
        mean(&pol),
    ]
}

/// Every default-catalog feature of `tweets` (a window of `rumour`), by name.
pub fn reference_features(
    rumour: &Rumour,
    tweets: &[Tweet],
    profiles: &BTreeMap<String, UserProfile>,
    followees: &FolloweeIndex,
    lexicon: &Lexicon,
) -> BTreeMap<String, f64> {
    let mut out = BTreeMap::new();
    let n = tweets.len() as f64;
    let count = |s: Stance| tweets.iter().filter(|t| t.stance == Some(s)).count() as f64;
    out.insert("fraction_support".to_string(), if n == 0.0 { 0.0 } else { count(Stance::Support) / n });
    out.insert("fraction_deny".to_string(), if n == 0.0 { 0.0 } else { count(Stance::Against) / n });

    // message attributes: one value per tweet, averaged per side
    let msg = |s: Stance, f: &dyn Fn(&Tweet) -> f64| {
        mean(&tweets.iter().filter(|t| t.stance == Some(s)).map(f).collect::<Vec<_>>())
    };
    let message_features: Vec<(&str, Box<dyn Fn(&Tweet) -> f64>, bool)> = vec![
        ("msg_word_count", Box::new(|t: &Tweet| message_attributes(t, lexicon).word_count), false),
        ("msg_has_url", Box::new(|t: &Tweet| message_attributes(t, lexicon).has_url), false),
        ("msg_negation", Box::new(|t: &Tweet| message_attributes(t, lexicon).negation), false),
        ("msg_parse_depth", Box::new(|t: &Tweet| message_attributes(t, lexicon).parse_depth), false),
    ];
    for (name, f, _) in &message_features {
        let (s, nn, a) = sides(|st| msg(st, f.as_ref()));
        out.insert(name.to_string(), ratio(s, nn, a));
    }
    for c in Category::ALL {
        let f = |t: &Tweet| score_text(&t.text, lexicon).get(c);
        let (s, nn, a) = sides(|st| msg(st, &f));
        let v = match c {
            Category::Positive | Category::Negative => s - a,
            _ => ratio(s, nn, a),
        };
        out.insert(format!("msg_{}", c.name()), v);
    }

    // user attributes: distinct authors per side
    let authors = |s: Stance| -> Vec<&str> {
        let set: BTreeSet<&str> = tweets
            .iter()
            .filter(|t| t.stance == Some(s))
            .map(|t| t.author_id.as_str())
            .collect();
        set.into_iter().collect()
    };
    let user_names = [
        "user_followers",
        "user_friends",
        "user_statuses",
        "user_likes",
        "user_verified",
        "user_description",
        "user_location",
        "user_tenure_days",
        "user_post_frequency",
        "user_past_sentiment",
    ];
    for (k, name) in user_names.iter().enumerate() {
        let side = |s: Stance| {
            mean(
                &authors(s)
                    .iter()
                    .map(|u| user_values(&profiles[*u], rumour.started_at, lexicon)[k])
                    .collect::<Vec<_>>(),
            )
        };
        let (s, nn, a) = sides(side);
        out.insert(name.to_string(), if k == 9 { s - a } else { ratio(s, nn, a) });
    }

    // network attributes: one forest per side
    let net: Vec<[f64; 5]> = [Stance::Support, Stance::Neutral, Stance::Against]
        .iter()
        .map(|&s| network_values(&reference_forest(s, tweets, followees), profiles, followees))
        .collect();
    let net_names = [
        "net_tree_count",
        "net_lcc_root_degree",
        "net_retweets_within_network",
        "net_quotes_within_network",
        "net_low_to_high_diffusion",
    ];
    for (k, name) in net_names.iter().enumerate() {
        out.insert(name.to_string(), ratio(net[0][k], net[1][k], net[2][k]));
    }
    out
}
