//! Lexicon-driven linguistic scoring of tweet text.
//!
//! A [`Lexicon`] maps each of eight word categories to literal or
//! prefix-wildcard patterns. [`score_text`] reports, per category, the
//! fraction of tokens matching it.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::corpus::{Timestamp, Tweet, UserProfile};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Category {
    Positive,
    Negative,
    Insight,
    Cause,
    Tentative,
    Certainty,
    Swear,
    Netspeak,
}

impl Category {
    pub const ALL: [Category; 8] = [
        Category::Positive,
        Category::Negative,
        Category::Insight,
        Category::Cause,
        Category::Tentative,
        Category::Certainty,
        Category::Swear,
        Category::Netspeak,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            Category::Positive => "positive",
            Category::Negative => "negative",
            Category::Insight => "insight",
            Category::Cause => "cause",
            Category::Tentative => "tentative",
            Category::Certainty => "certainty",
            Category::Swear => "swear",
            Category::Netspeak => "netspeak",
        }
    }
}

impl FromStr for Category {
    type Err = LexiconError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Category::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| LexiconError::UnknownCategory(s.to_string()))
    }
}

impl fmt::Display for Category {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Pattern {
    Literal(String),
    /// Stem followed by `*` in the lexicon file.
    Prefix(String),
}

impl Pattern {
    pub fn parse(raw: &str) -> Self {
        let raw = raw.trim().to_lowercase();
        match raw.strip_suffix('*') {
            Some(stem) => Pattern::Prefix(stem.to_string()),
            None => Pattern::Literal(raw),
        }
    }

    pub fn matches(&self, token: &str) -> bool {
        match self {
            Pattern::Literal(w) => token == w,
            Pattern::Prefix(stem) => token.starts_with(stem.as_str()),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum LexiconError {
    #[error("unknown lexicon category {0:?}")]
    UnknownCategory(String),
    #[error("line {line}: expected \"category<TAB>pattern\"")]
    Syntax { line: usize },
    #[error("category {0} has no patterns")]
    EmptyCategory(Category),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lexicon {
    patterns: [Vec<Pattern>; 8],
}

const DEMO_LEXICON: &str = include_str!("../data/demo_lexicon.tsv");

impl Lexicon {
    /// Builds a lexicon, failing if any category is left without patterns.
    pub fn new(patterns: [Vec<Pattern>; 8]) -> Result<Self, LexiconError> {
        for c in Category::ALL {
            if patterns[c.index()].is_empty() {
                return Err(LexiconError::EmptyCategory(c));
            }
        }
        Ok(Self { patterns })
    }

    /// Parses the TSV format: `category<TAB>pattern`, `#` comments.
    pub fn parse_tsv(text: &str) -> Result<Self, LexiconError> {
        let mut patterns: [Vec<Pattern>; 8] = Default::default();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim_end();
            if line.trim().is_empty() || line.trim_start().starts_with('#') {
                continue;
            }
            let (cat, pat) = line
                .split_once('\t')
                .filter(|(_, p)| !p.trim().is_empty())
                .ok_or(LexiconError::Syntax { line: i + 1 })?;
            let cat: Category = cat.trim().parse()?;
            patterns[cat.index()].push(Pattern::parse(pat));
        }
        Self::new(patterns)
    }

    pub fn load(path: impl AsRef<std::path::Path>) -> Result<Self, LexiconError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| LexiconError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::parse_tsv(&text)
    }

    /// Small bundled lexicon covering all eight categories.
    pub fn demo() -> Self {
        Self::parse_tsv(DEMO_LEXICON).expect("bundled lexicon is valid")
    }

    pub fn patterns(&self, category: Category) -> &[Pattern] {
        &self.patterns[category.index()]
    }

    pub fn matches(&self, category: Category, token: &str) -> bool {
        self.patterns(category).iter().any(|p| p.matches(token))
    }
}

/// Per-category token fractions of a text.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize)]
pub struct LinguisticScores {
    pub scores: [f64; 8],
    pub word_count: usize,
}

impl LinguisticScores {
    pub fn get(&self, category: Category) -> f64 {
        self.scores[category.index()]
    }

    /// Positive minus negative score.
    pub fn polarity(&self) -> f64 {
        self.get(Category::Positive) - self.get(Category::Negative)
    }
}

fn is_url(word: &str) -> bool {
    let w = word.to_ascii_lowercase();
    w.starts_with("http://") || w.starts_with("https://") || w.starts_with("www.")
}

/// Lowercase tokens of `text` with URLs removed. Tokens are maximal runs of
/// alphanumerics; a leading `#` or `@` is kept as part of the token.
pub fn tokenize(text: &str) -> Vec<String> {
    let mut tokens = Vec::new();
    for word in text.split_whitespace().filter(|w| !is_url(w)) {
        let mut cur = String::new();
        for ch in word.chars() {
            if ch.is_alphanumeric() {
                cur.extend(ch.to_lowercase());
            } else {
                if cur.chars().any(char::is_alphanumeric) {
                    tokens.push(std::mem::take(&mut cur));
                }
                cur.clear();
                if ch == '#' || ch == '@' {
                    cur.push(ch);
                }
            }
        }
        if cur.chars().any(char::is_alphanumeric) {
            tokens.push(cur);
        }
    }
    tokens
}

pub fn score_text(text: &str, lexicon: &Lexicon) -> LinguisticScores {
    let tokens = tokenize(text);
    if tokens.is_empty() {
        return LinguisticScores::default();
    }
    let mut counts = [0usize; 8];
    for tok in &tokens {
        for c in Category::ALL {
            if lexicon.matches(c, tok) {
                counts[c.index()] += 1;
            }
        }
    }
    let n = tokens.len() as f64;
    LinguisticScores {
        scores: counts.map(|k| k as f64 / n),
        word_count: tokens.len(),
    }
}

/// Mean polarity (positive minus negative) of the user's past tweets posted
/// before `before`; 0 when there are none.
pub fn user_past_sentiment(profile: &UserProfile, lexicon: &Lexicon, before: Timestamp) -> f64 {
    let mut sum = 0.0;
    let mut n = 0usize;
    for past in profile.past_tweets_before(before) {
        sum += score_text(&past.text, lexicon).polarity();
        n += 1;
    }
    if n == 0 {
        0.0
    } else {
        sum / n as f64
    }
}

// "n't" contractions tokenize to a stem plus a bare "t".
const NEGATIONS: &[&str] = &[
    "not", "no", "never", "none", "nobody", "nothing", "neither", "nor", "nowhere", "cannot",
    "dont", "doesnt", "didnt", "isnt", "wasnt", "arent", "werent", "wont", "cant", "t",
];

/// Message attributes of one tweet.
///
/// `word_count`, `has_url`, `negation` and `parse_depth` are read from the
/// tweet's precomputed attributes when present. Otherwise they are derived
/// from the text; the parse-depth fallback `ceil(log2(word_count + 1))` is a
/// length heuristic, not a dependency parse.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MessageAttributes {
    pub word_count: f64,
    pub has_url: f64,
    pub negation: f64,
    pub parse_depth: f64,
    pub lexical: LinguisticScores,
}

pub fn parse_depth_fallback(word_count: usize) -> f64 {
    ((word_count as f64) + 1.0).log2().ceil()
}

pub fn message_attributes(tweet: &Tweet, lexicon: &Lexicon) -> MessageAttributes {
    let lexical = score_text(&tweet.text, lexicon);
    let tokens_have_negation = || {
        let toks = tokenize(&tweet.text);
        f64::from(u8::from(toks.iter().any(|t| NEGATIONS.contains(&t.as_str()))))
    };
    let has_url = || {
        f64::from(u8::from(tweet.text.split_whitespace().any(is_url)))
    };
    MessageAttributes {
        word_count: tweet.attribute("word_count").unwrap_or(lexical.word_count as f64),
        has_url: tweet.attribute("has_url").unwrap_or_else(has_url),
        negation: tweet.attribute("negation").unwrap_or_else(tokens_have_negation),
        parse_depth: tweet
            .attribute("parse_depth")
            .unwrap_or_else(|| parse_depth_fallback(lexical.word_count)),
        lexical,
    }
}
