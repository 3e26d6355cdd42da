use std::collections::HashMap;

use super::{CorpusError, Dataset, Stance, TweetKind};

/// Completes the stance annotation of every tweet.
///
/// Untranslatable tweets become neutral. Every retweet takes the stance of
/// the first non-retweet reached by following its source chain; a retweet
/// whose chain leaves the rumour keeps its own label (it is a tree root).
/// Originals, quotes and replies must already carry a stance.
pub fn close_annotations(mut dataset: Dataset) -> Result<Dataset, CorpusError> {
    for rumour in &mut dataset.rumours {
        for t in rumour.tweets.iter_mut() {
            if t.untranslatable {
                t.stance = Some(Stance::Neutral);
            }
            if t.kind != TweetKind::Retweet && t.stance.is_none() {
                return Err(CorpusError::MissingStance {
                    tweet_id: t.tweet_id.clone(),
                    kind: t.kind,
                });
            }
        }

        let index: HashMap<&str, usize> = rumour
            .tweets
            .iter()
            .enumerate()
            .map(|(i, t)| (t.tweet_id.as_str(), i))
            .collect();

        let mut resolved: Vec<Option<Stance>> = Vec::with_capacity(rumour.tweets.len());
        for (i, t) in rumour.tweets.iter().enumerate() {
            if t.kind != TweetKind::Retweet || t.untranslatable {
                resolved.push(t.stance);
                continue;
            }
            let mut cur = i;
            let mut hops = 0;
            let stance = loop {
                let tw = &rumour.tweets[cur];
                let next = match (&tw.kind, &tw.source_tweet_id) {
                    (TweetKind::Retweet, Some(src)) => index.get(src.as_str()).copied(),
                    _ => None,
                };
                match next {
                    Some(n) => {
                        cur = n;
                        hops += 1;
                        if hops > rumour.tweets.len() {
                            return Err(CorpusError::CyclicChain(t.tweet_id.clone()));
                        }
                    }
                    None => {
                        break tw.stance.ok_or_else(|| CorpusError::UnannotatedRoot {
                            tweet_id: t.tweet_id.clone(),
                            root_id: tw.tweet_id.clone(),
                        })?
                    }
                }
            };
            resolved.push(Some(stance));
        }
        for (t, s) in rumour.tweets.iter_mut().zip(resolved) {
            t.stance = s;
        }
    }
    Ok(dataset)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{Rumour, Tweet};
    use std::collections::BTreeMap;

    fn tw(id: &str, kind: TweetKind, src: Option<&str>, stance: Option<Stance>) -> Tweet {
        Tweet {
            tweet_id: id.into(),
            rumour_id: "r".into(),
            author_id: format!("u_{id}"),
            timestamp: 0,
            text: String::new(),
            kind,
            source_tweet_id: src.map(Into::into),
            stance,
            untranslatable: false,
            attributes: BTreeMap::new(),
        }
    }

    fn dataset(tweets: Vec<Tweet>) -> Dataset {
        Dataset {
            rumours: vec![Rumour {
                rumour_id: "r".into(),
                topic: "t".into(),
                claim: "c".into(),
                veracity: true,
                started_at: 0,
                verified_at: 1,
                tweets,
            }],
            ..Default::default()
        }
    }

    fn stances(d: &Dataset) -> Vec<Option<Stance>> {
        d.rumours[0].tweets.iter().map(|t| t.stance).collect()
    }

    #[test]
    fn retweet_inherits_source_stance() {
        let d = dataset(vec![
            tw("o", TweetKind::Original, None, Some(Stance::Support)),
            tw("rt", TweetKind::Retweet, Some("o"), None),
        ]);
        let d = close_annotations(d).unwrap();
        assert_eq!(stances(&d)[1], Some(Stance::Support));
    }

    #[test]
    fn chains_resolve_transitively() {
        let d = dataset(vec![
            tw("o", TweetKind::Original, None, Some(Stance::Against)),
            tw("a", TweetKind::Retweet, Some("o"), None),
            tw("b", TweetKind::Retweet, Some("a"), Some(Stance::Support)),
        ]);
        let d = close_annotations(d).unwrap();
        assert_eq!(stances(&d), vec![Some(Stance::Against); 3]);
    }

    #[test]
    fn mixed_fixture_is_fully_annotated() {
        use Stance::*;
        use TweetKind::*;
        // Hand count: support o1, r1, r2, q1 -> 4; against o2, r3, p1 -> 3; neutral o3, u1, r4 -> 3.
        let mut untranslatable = tw("u1", Original, None, None);
        untranslatable.untranslatable = true;
        let d = dataset(vec![
            tw("o1", Original, None, Some(Support)),
            tw("o2", Original, None, Some(Against)),
            tw("o3", Original, None, Some(Neutral)),
            tw("r1", Retweet, Some("o1"), None),
            tw("r2", Retweet, Some("r1"), None),
            tw("r3", Retweet, Some("o2"), None),
            tw("q1", Quote, Some("o2"), Some(Support)),
            tw("p1", Reply, Some("o1"), Some(Against)),
            untranslatable,
            tw("r4", Retweet, Some("u1"), None),
        ]);
        let d = close_annotations(d).unwrap();
        assert_eq!(d.unannotated_count(), 0);
        let counts = d.rumours[0].stance_counts();
        assert_eq!((counts.support, counts.neutral, counts.against), (4, 3, 3));
    }

    #[test]
    fn quotes_need_explicit_stance() {
        let d = dataset(vec![
            tw("o", TweetKind::Original, None, Some(Stance::Support)),
            tw("q", TweetKind::Quote, Some("o"), None),
        ]);
        assert!(matches!(
            close_annotations(d).unwrap_err(),
            CorpusError::MissingStance { .. }
        ));
    }

    #[test]
    fn unannotated_dangling_root_fails() {
        let d = dataset(vec![tw("rt", TweetKind::Retweet, Some("gone"), None)]);
        assert!(matches!(
            close_annotations(d).unwrap_err(),
            CorpusError::UnannotatedRoot { .. }
        ));
    }

    #[test]
    fn cycles_are_detected() {
        let d = dataset(vec![
            tw("a", TweetKind::Retweet, Some("b"), None),
            tw("b", TweetKind::Retweet, Some("a"), None),
        ]);
        assert!(matches!(
            close_annotations(d).unwrap_err(),
            CorpusError::CyclicChain(_)
        ));
    }
}
