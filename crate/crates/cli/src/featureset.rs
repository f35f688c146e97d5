//! Inputs gathered from files, and the feature-set file that links
//! `features extract` to `hypotest`, `train` and `eval`.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use wording::corpus::{ingest, Corpus, Message, PairFilterConfig, CORPUS_SCHEMA};
use wording::eval::{build_context, prepare, ContextConfig, Dataset, ExtremeSet};
use wording::features::{build_personal_lms, registry_hash, FeatureContext, RequestWords, SentimentLexicon};
use wording::io::{read_json, read_to_string, write_json};
use wording::model::{BaselineConfig, BaselineModel};
use wording::textproc::{read_annotated, train_tagger};
use wording::{Error, Result};

pub const FEATURE_SET_FORMAT: &str = "wording-features-v1";

/// Context without per-author models plus the extracted pair sets.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureSet {
    pub format: String,
    pub registry_hash: String,
    pub context: FeatureContext,
    pub labeled: Dataset,
    pub preference: Dataset,
}

impl FeatureSet {
    pub fn save(&self, path: &Path) -> Result<()> {
        write_json(path, self)
    }

    pub fn load(path: &Path) -> Result<FeatureSet> {
        let f: FeatureSet = read_json(path)?;
        if f.format != FEATURE_SET_FORMAT {
            return Err(Error::Schema(format!("feature set format {:?}", f.format)));
        }
        if f.registry_hash != registry_hash() {
            return Err(Error::RegistryMismatch(format!(
                "feature set built against {}, this build has {}",
                f.registry_hash,
                registry_hash()
            )));
        }
        Ok(f)
    }
}

/// Where the corpora and word lists live. Missing paths default to the
/// file names `wording synth` writes inside `data`.
#[derive(Debug, Clone, Default)]
pub struct Sources {
    pub data: Option<PathBuf>,
    pub paired: Option<PathBuf>,
    pub unpaired: Option<PathBuf>,
    pub headlines: Option<PathBuf>,
    pub lexicon: Option<PathBuf>,
    pub requests: Option<PathBuf>,
    pub tagged: Option<PathBuf>,
}

impl Sources {
    fn required(&self, given: &Option<PathBuf>, name: &str, flag: &str) -> Result<PathBuf> {
        given
            .clone()
            .or_else(|| self.data.as_ref().map(|d| d.join(name)))
            .ok_or_else(|| Error::Config(format!("no {flag} given and no --data directory")))
    }

    fn optional(&self, given: &Option<PathBuf>, name: &str) -> Option<PathBuf> {
        given
            .clone()
            .or_else(|| self.data.as_ref().map(|d| d.join(name)).filter(|p| p.exists()))
    }

    pub fn paired(&self) -> Result<Corpus> {
        ingest(self.required(&self.paired, "paired.tsv", "--paired")?, CORPUS_SCHEMA)
    }

    pub fn unpaired(&self) -> Result<Corpus> {
        ingest(self.required(&self.unpaired, "unpaired.tsv", "--unpaired")?, CORPUS_SCHEMA)
    }

    pub fn headlines(&self) -> Result<Vec<String>> {
        let text = read_to_string(self.required(&self.headlines, "headlines.txt", "--headlines")?)?;
        Ok(read_lines(&text))
    }

    pub fn lexicon(&self) -> Result<SentimentLexicon> {
        match self.optional(&self.lexicon, "lexicon.tsv") {
            Some(p) => SentimentLexicon::parse(&read_to_string(p)?),
            None => Ok(SentimentLexicon::bundled()),
        }
    }

    pub fn requests(&self) -> Result<RequestWords> {
        match &self.requests {
            Some(p) => RequestWords::parse(&read_to_string(p)?),
            None => Ok(RequestWords::default()),
        }
    }

    pub fn context(&self, paired: &[Message], unpaired: &[Message], cfg: &ContextConfig, seed: u64) -> Result<FeatureContext> {
        let tagger = match &self.tagged {
            Some(p) => Some(train_tagger(&read_annotated(&read_to_string(p)?)?, 5, seed)?),
            None => None,
        };
        build_context(paired, unpaired, &self.headlines()?, self.lexicon()?, self.requests()?, tagger, cfg)
    }

    pub fn feature_set(&self, filter: &PairFilterConfig, cfg: &ContextConfig, seed: u64) -> Result<FeatureSet> {
        let paired = self.paired()?;
        let unpaired = self.unpaired()?;
        let ctx = self.context(&paired.messages, &unpaired.messages, cfg, seed)?;
        extract_set(&paired, filter, &ctx)
    }

    /// Features of this paired corpus under another set's context, as
    /// held-out data must be. Only per-author models are rebuilt.
    pub fn feature_set_in(&self, base: &FeatureContext, filter: &PairFilterConfig) -> Result<FeatureSet> {
        let paired = self.paired()?;
        let smoothing = base
            .community
            .as_ref()
            .ok_or(Error::MissingContext("community language model"))?
            .unigram
            .smoothing();
        let ctx = FeatureContext { personal: build_personal_lms(&paired.messages, smoothing)?, ..base.clone() };
        extract_set(&paired, filter, &ctx)
    }
}

fn extract_set(paired: &Corpus, filter: &PairFilterConfig, ctx: &FeatureContext) -> Result<FeatureSet> {
    let p = prepare(paired, filter, ctx)?;
    Ok(FeatureSet {
        format: FEATURE_SET_FORMAT.into(),
        registry_hash: registry_hash(),
        context: ctx.without_personal(),
        labeled: p.labeled,
        preference: p.preference,
    })
}

/// Non-empty trimmed lines.
pub fn read_lines(text: &str) -> Vec<String> {
    text.lines().map(str::trim).filter(|l| !l.is_empty()).map(String::from).collect()
}

pub fn load_filter(path: Option<&Path>) -> Result<PairFilterConfig> {
    let cfg = match path {
        Some(p) => read_json(p)?,
        None => PairFilterConfig::paper(),
    };
    cfg.validate()?;
    Ok(cfg)
}

/// Train the single-message baseline on the `k` most and least retweeted
/// unpaired messages.
pub fn train_baseline_from(ctx: &FeatureContext, unpaired: &[Message], k: usize, seed: u64) -> Result<BaselineModel> {
    let mut cfg = BaselineConfig::default();
    cfg.train.seed = seed;
    ExtremeSet::select(ctx, unpaired, k)?.train(&cfg)
}
