mod common;

use std::collections::{BTreeSet, HashMap};

use proptest::prelude::*;
use rumour_core::corpus::{FolloweeIndex, Stance, Tweet};
use rumour_core::graph::{build_forest, build_stance_forests, PropagationForest};

use common::{original, retweet};

/// Random single-stance cascades: tweet `i` is an original or a retweet of
/// an earlier original; followee lists drawn per user.
fn cascades() -> impl Strategy<Value = (Vec<Tweet>, FolloweeIndex)> {
    (2usize..7, 1usize..18).prop_flat_map(|(users, n)| {
        (
            prop::collection::vec((0..users, 0i64..40, any::<bool>(), any::<prop::sample::Index>()), n),
            prop::collection::vec(prop::collection::vec(any::<bool>(), users), users),
        )
            .prop_map(move |(spec, follow)| {
                let mut tweets: Vec<Tweet> = Vec::new();
                let mut originals: Vec<(String, i64)> = Vec::new();
                for (i, (author, ts, is_rt, pick)) in spec.into_iter().enumerate() {
                    let id = format!("t{i:02}");
                    let a = format!("u{author}");
                    let earlier: Vec<&(String, i64)> = originals.iter().filter(|o| o.1 < ts).collect();
                    if is_rt && !earlier.is_empty() {
                        let src = &pick.get(&earlier).0;
                        tweets.push(retweet(&id, &a, ts, src, Stance::Support));
                    } else {
                        originals.push((id.clone(), ts));
                        tweets.push(original(&id, &a, ts, Stance::Support));
                    }
                }
                let mut idx = FolloweeIndex::new();
                for (u, row) in follow.iter().enumerate() {
                    let f: Vec<String> = row.iter().enumerate().filter(|(_, &b)| b).map(|(v, _)| format!("u{v}")).collect();
                    idx.insert(&format!("u{u}"), f);
                }
                (tweets, idx)
            })
    })
}

fn forest_of(tweets: &[Tweet], followees: &FolloweeIndex) -> PropagationForest {
    let lookup: HashMap<&str, &Tweet> = tweets.iter().map(|t| (t.tweet_id.as_str(), t)).collect();
    let refs: Vec<&Tweet> = tweets.iter().collect();
    build_forest(Stance::Support, &refs, &lookup, followees)
}

fn parents(f: &PropagationForest) -> Vec<(String, Option<String>)> {
    let mut v: Vec<(String, Option<String>)> = f
        .nodes
        .iter()
        .map(|n| (n.user_id.clone(), f.parent_of(&n.user_id).map(str::to_string)))
        .collect();
    v.sort();
    v
}

proptest! {
    #[test]
    fn input_order_does_not_matter((tweets, fol) in cascades(), seed in any::<u64>()) {
        let mut shuffled = tweets.clone();
        let n = shuffled.len();
        for i in (1..n).rev() {
            let j = (seed.wrapping_mul(6364136223846793005).wrapping_add(i as u64) % (i as u64 + 1)) as usize;
            shuffled.swap(i, j);
        }
        prop_assert_eq!(parents(&forest_of(&tweets, &fol)), parents(&forest_of(&shuffled, &fol)));
    }

    #[test]
    fn edges_equal_nodes_minus_trees((tweets, fol) in cascades()) {
        let f = forest_of(&tweets, &fol);
        let trees = f.trees();
        prop_assert_eq!(f.edges.len() + trees.len(), f.node_count());
        prop_assert_eq!(trees.iter().map(|t| t.size).sum::<usize>(), f.node_count());
        for n in &f.nodes {
            if let Some(p) = n.parent {
                prop_assert!(f.nodes[p].first_seen <= n.first_seen);
            }
        }
    }

    #[test]
    fn one_node_per_distinct_user((tweets, fol) in cascades()) {
        let f = forest_of(&tweets, &fol);
        let users: BTreeSet<&str> = tweets.iter().map(|t| t.author_id.as_str()).collect();
        prop_assert_eq!(f.node_count(), users.len());
    }

    #[test]
    fn earlier_prefix_is_a_subforest((tweets, fol) in cascades(), cut in 0i64..40) {
        let full = parents(&forest_of(&tweets, &fol));
        let prefix: Vec<Tweet> = tweets.iter().filter(|t| t.timestamp <= cut).cloned().collect();
        for node in parents(&forest_of(&prefix, &fol)) {
            prop_assert!(full.contains(&node), "{:?}", node);
        }
    }

    #[test]
    fn stance_partitions_are_disjoint((tweets, fol) in cascades(), flip in prop::collection::vec(0u8..3, 18)) {
        let mut tweets = tweets;
        let mut by_id: HashMap<String, Stance> = HashMap::new();
        for (i, t) in tweets.iter_mut().enumerate() {
            let s = match t.source_tweet_id.as_ref().and_then(|s| by_id.get(s)) {
                Some(&s) => s,
                None => [Stance::Support, Stance::Neutral, Stance::Against][flip[i % flip.len()] as usize],
            };
            t.stance = Some(s);
            by_id.insert(t.tweet_id.clone(), s);
        }
        let forests = build_stance_forests(&tweets, &fol);
        let total: usize = forests.iter().map(|f| f.edges.len() + f.trees().len()).sum();
        let per_stance: usize = Stance::ALL
            .iter()
            .map(|s| tweets.iter().filter(|t| t.stance == Some(*s)).map(|t| t.author_id.as_str()).collect::<BTreeSet<_>>().len())
            .sum();
        prop_assert_eq!(total, per_stance);
    }
}
