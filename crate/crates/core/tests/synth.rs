use rumour_core::bench::{generate_synthetic, write_synthetic, BenchError, SynthSpec};
use rumour_core::corpus::{close_annotations, load_corpus, parse_corpus, CorpusPaths, TweetKind};
use rumour_core::graph::build_stance_forests;

fn small(seed: u64) -> SynthSpec {
    SynthSpec {
        rumours: 12,
        true_rumours: 7,
        users: 800,
        seed,
        ..SynthSpec::default()
    }
}

#[test]
fn same_seed_gives_identical_files() {
    let a = generate_synthetic(&small(4)).unwrap().to_text();
    let b = generate_synthetic(&small(4)).unwrap().to_text();
    assert_eq!(a, b);
    let c = generate_synthetic(&small(5)).unwrap().to_text();
    assert_ne!(a.tweets, c.tweets);

    let d1 = tempfile::tempdir().unwrap();
    let d2 = tempfile::tempdir().unwrap();
    write_synthetic(&small(4), d1.path()).unwrap();
    write_synthetic(&small(4), d2.path()).unwrap();
    for f in ["tweets.jsonl", "users.jsonl", "followees.jsonl", "rumours.jsonl"] {
        let x = std::fs::read(d1.path().join(f)).unwrap();
        let y = std::fs::read(d2.path().join(f)).unwrap();
        assert_eq!(x, y, "{f}");
    }
}

#[test]
fn output_loads_cleanly_and_closes() {
    let spec = small(1);
    let dir = tempfile::tempdir().unwrap();
    write_synthetic(&spec, dir.path()).unwrap();
    let loaded = load_corpus(&CorpusPaths::in_dir(dir.path())).unwrap();
    assert!(loaded.warnings.is_empty());
    let ds = close_annotations(loaded.dataset).unwrap();
    assert_eq!(ds.rumours.len(), 12);
    assert_eq!(ds.rumours.iter().filter(|r| r.veracity).count(), 7);
    assert_eq!(ds.unannotated_count(), 0);
    let kinds: Vec<TweetKind> = ds.rumours.iter().flat_map(|r| &r.tweets).map(|t| t.kind).collect();
    assert!(kinds.contains(&TweetKind::Retweet));
    for r in &ds.rumours {
        let n = r.tweets.len();
        assert!((spec.min_tweets..=spec.max_tweets).contains(&n));
    }
}

#[test]
fn per_class_deny_means_follow_the_spec() {
    let mut spec = SynthSpec {
        rumours: 200,
        true_rumours: 100,
        seed: 11,
        ..SynthSpec::default()
    };
    spec.true_class.deny_mean = 0.05;
    spec.false_class.deny_mean = 0.5;
    let ds = close_annotations(parse_corpus(&generate_synthetic(&spec).unwrap().to_text()).unwrap().dataset).unwrap();
    for (class, want) in [(true, 0.05), (false, 0.5)] {
        let fr: Vec<f64> = ds
            .rumours
            .iter()
            .filter(|r| r.veracity == class)
            .map(|r| r.stance_counts().against_fraction())
            .collect();
        let mean = fr.iter().sum::<f64>() / fr.len() as f64;
        assert!((mean - want).abs() <= 0.05, "class {class}: {mean}");
    }
}

#[test]
fn retweet_parents_are_followed() {
    let ds = close_annotations(generate_synthetic(&small(2)).unwrap()).unwrap();
    let mut edges = 0;
    for r in &ds.rumours {
        for forest in build_stance_forests(&r.tweets, &ds.followees) {
            assert_eq!(forest.missing_followee_retweets, 0);
            for e in &forest.edges {
                assert!(ds.followees.follows(&e.child, &e.parent), "{} -> {}", e.parent, e.child);
                edges += 1;
            }
        }
    }
    assert!(edges > 100);
}

#[test]
fn infeasible_specs_are_rejected() {
    let bad = [
        SynthSpec { users: 0, ..SynthSpec::default() },
        SynthSpec { rumours: 0, ..SynthSpec::default() },
        SynthSpec { true_rumours: 80, ..SynthSpec::default() },
        SynthSpec { min_tweets: 10, max_tweets: 5, ..SynthSpec::default() },
        SynthSpec { verified_rate: 1.5, ..SynthSpec::default() },
    ];
    for spec in bad {
        assert!(matches!(generate_synthetic(&spec), Err(BenchError::InfeasibleSpec(_))));
    }
    let mut spec = SynthSpec::default();
    spec.false_class.deny_concentration = 0.0;
    assert!(generate_synthetic(&spec).is_err());
}
