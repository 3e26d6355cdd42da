use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use rumour_core::corpus::CorpusPaths;
use rumour_core::features::FeatureCatalog;
use rumour_core::learn::Family;
use rumour_core::lingua::Lexicon;
use rumour_core::select::Method;

/// Everything a pipeline run needs. Paths are checked by [`RunConfig::validate`].
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub corpus: Option<PathBuf>,
    pub lexicon: Option<PathBuf>,
    pub catalog: Option<PathBuf>,
    pub families: Vec<Family>,
    pub method: Method,
    pub k_folds: usize,
    pub seed: u64,
    pub out: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            corpus: None,
            lexicon: None,
            catalog: None,
            families: vec![Family::LogReg, Family::Cart, Family::RandomForest],
            method: Method::Forward,
            k_folds: 10,
            seed: 0,
            out: PathBuf::from("out"),
        }
    }
}

fn require_file(path: &Path) -> Result<()> {
    if !path.is_file() {
        bail!("{} does not exist", path.display());
    }
    Ok(())
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if self.k_folds < 2 {
            bail!("--k-folds must be at least 2, got {}", self.k_folds);
        }
        if self.families.is_empty() {
            bail!("at least one --family is required");
        }
        if let Some(dir) = &self.corpus {
            let p = CorpusPaths::in_dir(dir);
            for f in [&p.tweets, &p.users, &p.followees, &p.rumours] {
                require_file(f).with_context(|| format!("corpus directory {}", dir.display()))?;
            }
        }
        for p in self.lexicon.iter().chain(&self.catalog) {
            require_file(p)?;
        }
        Ok(())
    }

    pub fn corpus_paths(&self) -> Result<CorpusPaths> {
        let dir = self.corpus.as_ref().context("--corpus is required")?;
        Ok(CorpusPaths::in_dir(dir))
    }

    /// The lexicon file, or the bundled demo lexicon.
    pub fn load_lexicon(&self) -> Result<Lexicon> {
        match &self.lexicon {
            Some(p) => Lexicon::load(p).with_context(|| format!("lexicon {}", p.display())),
            None => Ok(Lexicon::demo()),
        }
    }

    pub fn load_catalog(&self) -> Result<FeatureCatalog> {
        match &self.catalog {
            Some(p) => {
                let text = std::fs::read_to_string(p).with_context(|| format!("catalog {}", p.display()))?;
                FeatureCatalog::from_toml(&text).with_context(|| format!("catalog {}", p.display()))
            }
            None => Ok(FeatureCatalog::default_catalog()),
        }
    }
}
