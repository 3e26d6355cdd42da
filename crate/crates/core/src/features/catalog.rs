use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::lingua::Category;

pub const DEFAULT_CATALOG_VERSION: &str = "rumour-features/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Source {
    Message,
    User,
    Network,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Rule {
    /// `(S + N + 1) / (A + N + 1)`
    Ratio,
    /// `S - A`, for signed sentiment attributes
    Difference,
    /// Share of all tweets; only for the support and deny fractions.
    PlainFraction,
}

/// The attribute a feature aggregates. Written in catalogs as a string:
/// `word_count`, `lexicon:positive`, `tweet:<corpus attribute>`, `followers`…
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum Attribute {
    SupportFraction,
    DenyFraction,
    WordCount,
    HasUrl,
    Negation,
    ParseDepth,
    Lexical(Category),
    /// A numeric attribute read from the tweet's `attributes` map (0 if absent).
    TweetAttr(String),
    Followers,
    Friends,
    Statuses,
    Likes,
    Verified,
    HasDescription,
    HasLocation,
    TenureDays,
    PostFrequency,
    PastSentiment,
    TreeCount,
    LccRootDegree,
    RetweetsWithinNetwork,
    QuotesWithinNetwork,
    LowToHighDiffusion,
}

const SIMPLE: &[(&str, Attribute)] = &[
    ("fraction_support", Attribute::SupportFraction),
    ("fraction_deny", Attribute::DenyFraction),
    ("word_count", Attribute::WordCount),
    ("has_url", Attribute::HasUrl),
    ("negation", Attribute::Negation),
    ("parse_depth", Attribute::ParseDepth),
    ("followers", Attribute::Followers),
    ("friends", Attribute::Friends),
    ("statuses", Attribute::Statuses),
    ("likes", Attribute::Likes),
    ("verified", Attribute::Verified),
    ("has_description", Attribute::HasDescription),
    ("has_location", Attribute::HasLocation),
    ("tenure_days", Attribute::TenureDays),
    ("post_frequency", Attribute::PostFrequency),
    ("past_sentiment", Attribute::PastSentiment),
    ("tree_count", Attribute::TreeCount),
    ("lcc_root_degree", Attribute::LccRootDegree),
    ("retweets_within_network", Attribute::RetweetsWithinNetwork),
    ("quotes_within_network", Attribute::QuotesWithinNetwork),
    ("low_to_high_diffusion", Attribute::LowToHighDiffusion),
];

impl Attribute {
    pub fn source(&self) -> Source {
        use Attribute::*;
        match self {
            SupportFraction | DenyFraction | WordCount | HasUrl | Negation | ParseDepth
            | Lexical(_) | TweetAttr(_) => Source::Message,
            Followers | Friends | Statuses | Likes | Verified | HasDescription | HasLocation
            | TenureDays | PostFrequency | PastSentiment => Source::User,
            TreeCount | LccRootDegree | RetweetsWithinNetwork | QuotesWithinNetwork
            | LowToHighDiffusion => Source::Network,
        }
    }

    pub fn is_plain_fraction(&self) -> bool {
        matches!(self, Attribute::SupportFraction | Attribute::DenyFraction)
    }

    /// Unbounded counts that are log1p-scaled when user scaling is enabled.
    pub fn is_user_count(&self) -> bool {
        use Attribute::*;
        matches!(
            self,
            Followers | Friends | Statuses | Likes | TenureDays | PostFrequency
        )
    }
}

impl FromStr for Attribute {
    type Err = CatalogError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if let Some((_, a)) = SIMPLE.iter().find(|(n, _)| *n == s) {
            return Ok(a.clone());
        }
        if let Some(cat) = s.strip_prefix("lexicon:") {
            let c: Category = cat
                .parse()
                .map_err(|_| CatalogError::UnknownAttribute(s.to_string()))?;
            return Ok(Attribute::Lexical(c));
        }
        if let Some(name) = s.strip_prefix("tweet:") {
            if !name.is_empty() {
                return Ok(Attribute::TweetAttr(name.to_string()));
            }
        }
        Err(CatalogError::UnknownAttribute(s.to_string()))
    }
}

impl TryFrom<String> for Attribute {
    type Error = CatalogError;

    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl fmt::Display for Attribute {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Attribute::Lexical(c) => write!(f, "lexicon:{c}"),
            Attribute::TweetAttr(n) => write!(f, "tweet:{n}"),
            other => {
                let name = SIMPLE
                    .iter()
                    .find(|(_, a)| a == other)
                    .map(|(n, _)| *n)
                    .expect("every simple attribute is named");
                f.write_str(name)
            }
        }
    }
}

impl From<Attribute> for String {
    fn from(a: Attribute) -> String {
        a.to_string()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeatureDef {
    pub name: String,
    pub source: Source,
    pub attribute: Attribute,
    pub rule: Rule,
}

impl FeatureDef {
    pub fn new(name: &str, attribute: Attribute, rule: Rule) -> Self {
        Self {
            name: name.to_string(),
            source: attribute.source(),
            attribute,
            rule,
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CatalogError {
    #[error("unknown attribute {0:?}")]
    UnknownAttribute(String),
    #[error("duplicate feature name {0:?}")]
    DuplicateName(String),
    #[error("feature {0:?}: names may contain only ASCII letters, digits, '_', ':' and '.'")]
    BadName(String),
    #[error("feature {name:?}: attribute {attribute} is {actual:?}-based, declared {declared:?}")]
    SourceMismatch {
        name: String,
        attribute: String,
        declared: Source,
        actual: Source,
    },
    #[error("feature {name:?}: rule {rule:?} does not apply to attribute {attribute}")]
    RuleMismatch {
        name: String,
        attribute: String,
        rule: Rule,
    },
    #[error("catalog is empty")]
    Empty,
    #[error("catalog config: {0}")]
    Config(String),
}

/// Versioned, ordered list of feature definitions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FeatureCatalog {
    pub version: String,
    pub features: Vec<FeatureDef>,
}

#[derive(Deserialize)]
struct CatalogConfig {
    version: String,
    #[serde(default)]
    extends_default: bool,
    #[serde(default, rename = "feature")]
    features: Vec<FeatureDef>,
}

impl FeatureCatalog {
    pub fn new(version: &str, features: Vec<FeatureDef>) -> Result<Self, CatalogError> {
        let cat = Self {
            version: version.to_string(),
            features,
        };
        cat.validate()?;
        Ok(cat)
    }

    pub fn validate(&self) -> Result<(), CatalogError> {
        if self.features.is_empty() {
            return Err(CatalogError::Empty);
        }
        let mut seen = HashSet::new();
        for f in &self.features {
            if f.name.is_empty()
                || !f
                    .name
                    .chars()
                    .all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | ':' | '.'))
            {
                return Err(CatalogError::BadName(f.name.clone()));
            }
            if !seen.insert(f.name.as_str()) {
                return Err(CatalogError::DuplicateName(f.name.clone()));
            }
            if f.source != f.attribute.source() {
                return Err(CatalogError::SourceMismatch {
                    name: f.name.clone(),
                    attribute: f.attribute.to_string(),
                    declared: f.source,
                    actual: f.attribute.source(),
                });
            }
            if (f.rule == Rule::PlainFraction) != f.attribute.is_plain_fraction() {
                return Err(CatalogError::RuleMismatch {
                    name: f.name.clone(),
                    attribute: f.attribute.to_string(),
                    rule: f.rule,
                });
            }
        }
        Ok(())
    }

    /// Every named attribute: the two stance fractions, ten user, twelve
    /// message and five network features.
    pub fn default_catalog() -> Self {
        use Attribute::*;
        use Rule::*;
        let mut f = vec![
            FeatureDef::new("fraction_support", SupportFraction, PlainFraction),
            FeatureDef::new("fraction_deny", DenyFraction, PlainFraction),
            FeatureDef::new("msg_word_count", WordCount, Ratio),
            FeatureDef::new("msg_has_url", HasUrl, Ratio),
            FeatureDef::new("msg_negation", Negation, Ratio),
            FeatureDef::new("msg_parse_depth", ParseDepth, Ratio),
        ];
        for c in Category::ALL {
            let rule = match c {
                Category::Positive | Category::Negative => Difference,
                _ => Ratio,
            };
            f.push(FeatureDef::new(&format!("msg_{}", c.name()), Lexical(c), rule));
        }
        f.extend([
            FeatureDef::new("user_followers", Followers, Ratio),
            FeatureDef::new("user_friends", Friends, Ratio),
            FeatureDef::new("user_statuses", Statuses, Ratio),
            FeatureDef::new("user_likes", Likes, Ratio),
            FeatureDef::new("user_verified", Verified, Ratio),
            FeatureDef::new("user_description", HasDescription, Ratio),
            FeatureDef::new("user_location", HasLocation, Ratio),
            FeatureDef::new("user_tenure_days", TenureDays, Ratio),
            FeatureDef::new("user_post_frequency", PostFrequency, Ratio),
            FeatureDef::new("user_past_sentiment", PastSentiment, Difference),
            FeatureDef::new("net_tree_count", TreeCount, Ratio),
            FeatureDef::new("net_lcc_root_degree", LccRootDegree, Ratio),
            FeatureDef::new("net_retweets_within_network", RetweetsWithinNetwork, Ratio),
            FeatureDef::new("net_quotes_within_network", QuotesWithinNetwork, Ratio),
            FeatureDef::new("net_low_to_high_diffusion", LowToHighDiffusion, Ratio),
        ]);
        Self::new(DEFAULT_CATALOG_VERSION, f).expect("default catalog is valid")
    }

    /// Reads a TOML catalog. With `extends_default = true` the listed
    /// features are appended to the default catalog.
    pub fn from_toml(text: &str) -> Result<Self, CatalogError> {
        let cfg: CatalogConfig = toml::from_str(text).map_err(|e| CatalogError::Config(e.to_string()))?;
        let mut features = if cfg.extends_default {
            Self::default_catalog().features
        } else {
            Vec::new()
        };
        features.extend(cfg.features);
        Self::new(&cfg.version, features)
    }

    pub fn len(&self) -> usize {
        self.features.len()
    }

    pub fn is_empty(&self) -> bool {
        self.features.is_empty()
    }

    pub fn names(&self) -> Vec<String> {
        self.features.iter().map(|f| f.name.clone()).collect()
    }

    pub fn position(&self, name: &str) -> Option<usize> {
        self.features.iter().position(|f| f.name == name)
    }
}
