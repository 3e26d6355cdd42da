//! Stance-partitioned retweet propagation forests.
//!
//! The retweet source reported for a tweet is always the cascade's original,
//! which hides who the retweeter actually saw. The parent of a retweet by
//! user C is therefore inferred: the most recent earlier participant of the
//! same cascade that C follows, falling back to the original author. Nodes
//! are users; each user enters the forest once, at its first appearance.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::corpus::{FolloweeIndex, Stance, Timestamp, Tweet, TweetKind, UserProfile};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ForestNode {
    pub user_id: String,
    pub first_seen: Timestamp,
    pub parent: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ForestEdge {
    pub parent: String,
    pub child: String,
    /// Time of the child's retweet.
    pub timestamp: Timestamp,
    /// The child follows the parent.
    pub followee_link: bool,
}

/// A quote of another user's tweet; kept apart from the retweet forest.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuoteRelation {
    pub quoter: String,
    pub quoted: String,
    pub timestamp: Timestamp,
    pub followee_link: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PropagationForest {
    pub stance: Stance,
    /// In order of first appearance.
    pub nodes: Vec<ForestNode>,
    pub edges: Vec<ForestEdge>,
    pub quotes: Vec<QuoteRelation>,
    /// Retweeters without followee data whose parent fell back to the source author.
    pub missing_followee_retweets: usize,
    index: HashMap<String, usize>,
}

/// One connected tree of a forest.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tree {
    pub root: usize,
    pub size: usize,
}

impl PropagationForest {
    fn empty(stance: Stance) -> Self {
        Self {
            stance,
            nodes: Vec::new(),
            edges: Vec::new(),
            quotes: Vec::new(),
            missing_followee_retweets: 0,
            index: HashMap::new(),
        }
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn contains(&self, user: &str) -> bool {
        self.index.contains_key(user)
    }

    pub fn parent_of(&self, user: &str) -> Option<&str> {
        let i = *self.index.get(user)?;
        self.nodes[i].parent.map(|p| self.nodes[p].user_id.as_str())
    }

    pub fn out_degree(&self, node: usize) -> usize {
        self.nodes.iter().filter(|n| n.parent == Some(node)).count()
    }

    fn root_of(&self, mut node: usize) -> usize {
        while let Some(p) = self.nodes[node].parent {
            node = p;
        }
        node
    }

    /// Trees ordered by root first appearance.
    pub fn trees(&self) -> Vec<Tree> {
        let mut sizes: HashMap<usize, usize> = HashMap::new();
        for i in 0..self.nodes.len() {
            *sizes.entry(self.root_of(i)).or_default() += 1;
        }
        let mut trees: Vec<Tree> = sizes.into_iter().map(|(root, size)| Tree { root, size }).collect();
        trees.sort_by_key(|t| t.root);
        trees
    }

    /// The largest tree; ties go to the earliest root.
    pub fn largest_tree(&self) -> Option<Tree> {
        self.trees()
            .into_iter()
            .max_by(|a, b| a.size.cmp(&b.size).then(b.root.cmp(&a.root)))
    }

    /// Export rows: one per node, roots with `parent: None`.
    pub fn records(&self, rumour_id: &str) -> Vec<ForestRecord> {
        self.nodes
            .iter()
            .map(|n| ForestRecord {
                rumour_id: rumour_id.to_string(),
                stance: self.stance,
                parent: n.parent.map(|p| self.nodes[p].user_id.clone()),
                child: n.user_id.clone(),
                ts: n.first_seen,
            })
            .collect()
    }

    fn add_node(&mut self, user: &str, at: Timestamp, parent: Option<usize>) -> usize {
        let i = self.nodes.len();
        self.nodes.push(ForestNode {
            user_id: user.to_string(),
            first_seen: at,
            parent,
        });
        self.index.insert(user.to_string(), i);
        i
    }
}

/// Line-delimited forest export row.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ForestRecord {
    pub rumour_id: String,
    pub stance: Stance,
    pub parent: Option<String>,
    pub child: String,
    pub ts: Timestamp,
}

/// Resolves a tweet to the key of its cascade: the first non-retweet on its
/// source chain, or the last retweet before the chain leaves `lookup`.
fn cascade_key<'a>(tweet: &'a Tweet, lookup: &HashMap<&str, &'a Tweet>) -> &'a Tweet {
    let mut cur = tweet;
    let mut hops = 0;
    while cur.kind == TweetKind::Retweet {
        let Some(src) = cur.source_tweet_id.as_deref().and_then(|s| lookup.get(s)) else {
            break;
        };
        cur = src;
        hops += 1;
        if hops > lookup.len() {
            break;
        }
    }
    cur
}

/// Builds the forest of one stance partition.
///
/// `tweets` are the partition's tweets; `lookup` indexes every tweet of the
/// rumour by id so quote sources in other partitions resolve.
pub fn build_forest(
    stance: Stance,
    tweets: &[&Tweet],
    lookup: &HashMap<&str, &Tweet>,
    followees: &FolloweeIndex,
) -> PropagationForest {
    let mut order: Vec<&Tweet> = tweets.to_vec();
    order.sort_by(|a, b| a.timestamp.cmp(&b.timestamp).then_with(|| a.tweet_id.cmp(&b.tweet_id)));

    let mut forest = PropagationForest::empty(stance);
    // cascade root tweet id -> (author, time) of every participant so far
    let mut participants: HashMap<&str, Vec<(&str, Timestamp)>> = HashMap::new();

    for t in order {
        let author = t.author_id.as_str();
        if t.kind != TweetKind::Retweet {
            if !forest.contains(author) {
                forest.add_node(author, t.timestamp, None);
            }
            participants.entry(t.tweet_id.as_str()).or_default().push((author, t.timestamp));
            if t.kind == TweetKind::Quote {
                if let Some(src) = t.source_tweet_id.as_deref().and_then(|s| lookup.get(s)) {
                    if src.author_id != t.author_id {
                        forest.quotes.push(QuoteRelation {
                            quoter: t.author_id.clone(),
                            quoted: src.author_id.clone(),
                            timestamp: t.timestamp,
                            followee_link: followees.follows(author, &src.author_id),
                        });
                    }
                }
            }
            continue;
        }

        let root = cascade_key(t, lookup);
        let key = root.tweet_id.as_str();
        let cascade = participants.entry(key).or_default();
        let earlier = || cascade.iter().filter(|(u, ts)| *ts < t.timestamp && *u != author);
        let source_author = (root.tweet_id != t.tweet_id)
            .then(|| earlier().find(|(u, _)| *u == root.author_id).map(|(u, _)| *u))
            .flatten();

        let parent_user = match followees.followees_of(author) {
            Some(follows) => earlier().rfind(|(u, _)| follows.contains(*u))
                .map(|(u, _)| *u)
                .or(source_author),
            None => {
                if source_author.is_some() {
                    log::debug!("no followee data for {author}; linking to source author");
                    forest.missing_followee_retweets += 1;
                }
                source_author
            }
        };

        if !forest.contains(author) {
            let parent = parent_user.map(|p| forest.index[p]);
            forest.add_node(author, t.timestamp, parent);
            if let Some(p) = parent_user {
                forest.edges.push(ForestEdge {
                    parent: p.to_string(),
                    child: author.to_string(),
                    timestamp: t.timestamp,
                    followee_link: followees.follows(author, p),
                });
            }
        }
        cascade.push((author, t.timestamp));
    }
    forest
}

/// Builds the support, neutral and against forests of a set of
/// annotation-closed tweets. Tweets without a stance are ignored.
pub fn build_stance_forests<'a>(
    tweets: impl IntoIterator<Item = &'a Tweet>,
    followees: &FolloweeIndex,
) -> [PropagationForest; 3] {
    let tweets: Vec<&Tweet> = tweets.into_iter().collect();
    let lookup: HashMap<&str, &Tweet> = tweets.iter().map(|t| (t.tweet_id.as_str(), *t)).collect();
    Stance::ALL.map(|s| {
        let part: Vec<&Tweet> = tweets.iter().copied().filter(|t| t.stance == Some(s)).collect();
        build_forest(s, &part, &lookup, followees)
    })
}

/// Network attributes of one forest.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct NetworkAttributes {
    pub tree_count: usize,
    /// Out-degree of the root of the largest tree.
    pub lcc_root_degree: usize,
    /// Fraction of retweet edges whose child follows its parent.
    pub retweets_within_network: f64,
    /// Fraction of quote relations whose quoter follows the quoted user.
    pub quotes_within_network: f64,
    /// Fraction of retweet edges where the retweeter has more followers
    /// than the retweeted user.
    pub low_to_high_diffusion: f64,
}

fn fraction(hits: usize, total: usize) -> f64 {
    if total == 0 {
        0.0
    } else {
        hits as f64 / total as f64
    }
}

pub fn network_attributes(
    forest: &PropagationForest,
    users: &std::collections::BTreeMap<String, UserProfile>,
) -> NetworkAttributes {
    if forest.nodes.is_empty() {
        return NetworkAttributes {
            quotes_within_network: fraction(
                forest.quotes.iter().filter(|q| q.followee_link).count(),
                forest.quotes.len(),
            ),
            ..Default::default()
        };
    }
    let followers = |u: &str| users.get(u).map_or(0, |p| p.followers_count);
    let trees = forest.trees();
    let lcc_root_degree = forest
        .largest_tree()
        .map_or(0, |t| forest.out_degree(t.root));
    let edges = forest.edges.len();
    NetworkAttributes {
        tree_count: trees.len(),
        lcc_root_degree,
        retweets_within_network: fraction(
            forest.edges.iter().filter(|e| e.followee_link).count(),
            edges,
        ),
        quotes_within_network: fraction(
            forest.quotes.iter().filter(|q| q.followee_link).count(),
            forest.quotes.len(),
        ),
        low_to_high_diffusion: fraction(
            forest
                .edges
                .iter()
                .filter(|e| followers(&e.child) > followers(&e.parent))
                .count(),
            edges,
        ),
    }
}
