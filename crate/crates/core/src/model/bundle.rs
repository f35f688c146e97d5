//! Self-contained model files: the fitted predictor together with the
//! feature context needed to score new text.

use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::baseline::{BaselineModel, Scored};
use super::logreg::{sigmoid, LogRegModel};
use super::select::LambdaSelection;
use super::space::PairEncoder;
use crate::corpus::{Label, Message, TacPair};
use crate::error::{Error, Result};
use crate::features::{feature_group, registry_hash, FeatureContext, Group, PairFeatures};
use crate::io::{read_json, write_json};

pub const MODEL_FORMAT_VERSION: &str = "wording-model-v1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairPredictor {
    pub encoder: PairEncoder,
    pub model: LogRegModel,
    pub selection: LambdaSelection,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Predictor {
    Pair(PairPredictor),
    Baseline(BaselineModel),
    /// Constant answer.
    Majority { label: Label },
}

impl Predictor {
    /// Probability that t2 wins. The baseline reports the logistic of the
    /// score difference.
    pub fn predict_pair(&self, pair: &TacPair, f: &PairFeatures) -> Result<f64> {
        self.predict_members(&pair.t1, &pair.t2, f)
    }

    /// As [`Predictor::predict_pair`] with the members' messages given
    /// directly; only the baseline reads them.
    pub fn predict_members(&self, t1: &Message, t2: &Message, f: &PairFeatures) -> Result<f64> {
        match self {
            Predictor::Pair(p) => p.predict(f),
            Predictor::Baseline(b) => {
                let s1 = b.score(&Scored { message: t1, tokens: &f.tokens1 })?;
                let s2 = b.score(&Scored { message: t2, tokens: &f.tokens2 })?;
                Ok(sigmoid(s2 - s1))
            }
            Predictor::Majority { label } => Ok(label.as_target() as f64),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelBundle {
    pub format: String,
    pub registry_hash: String,
    pub condition: String,
    pub seed: u64,
    /// Context without per-author models; callers supply history.
    pub context: FeatureContext,
    pub predictor: Predictor,
}

/// Signed contribution of each custom-feature group and of the
/// bag-of-words section to a pair margin.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Contributions {
    pub groups: Vec<(String, f64)>,
    pub bow: f64,
}

impl PairPredictor {
    pub fn ready(self) -> Self {
        PairPredictor { encoder: self.encoder.ready(), ..self }
    }

    /// Probability that t2 wins.
    pub fn predict(&self, p: &PairFeatures) -> Result<f64> {
        self.model.predict_proba(&self.encoder.encode(p)?)
    }

    pub fn contributions(&self, p: &PairFeatures) -> Result<Contributions> {
        let x = self.encoder.encode(p)?;
        let custom = &self.encoder.space.custom;
        let mut groups: Vec<(String, f64)> = Group::ALL.iter().map(|g| (g.name().to_string(), 0.0)).collect();
        let mut bow = 0.0;
        for (j, v) in x {
            let c = self.model.weights[j] * v;
            if j < custom.len() {
                let g = feature_group(custom[j]);
                let slot = Group::ALL.iter().position(|h| *h == g).unwrap_or(0);
                groups[slot].1 += c;
            } else {
                bow += c;
            }
        }
        Ok(Contributions { groups, bow })
    }
}

impl ModelBundle {
    pub fn new(condition: &str, seed: u64, context: &FeatureContext, predictor: Predictor) -> ModelBundle {
        ModelBundle {
            format: MODEL_FORMAT_VERSION.to_string(),
            registry_hash: registry_hash(),
            condition: condition.to_string(),
            seed,
            context: context.without_personal(),
            predictor,
        }
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        write_json(path, self)
    }

    /// Load and check format and feature registry.
    pub fn load(path: impl AsRef<Path>) -> Result<ModelBundle> {
        let b: ModelBundle = read_json(path)?;
        b.checked()
    }

    /// First 16 hex digits of the SHA-256 of the serialized model.
    pub fn id(&self) -> Result<String> {
        let digest = Sha256::digest(serde_json::to_vec(self)?);
        Ok(digest.iter().take(8).map(|b| format!("{b:02x}")).collect())
    }

    pub fn checked(self) -> Result<ModelBundle> {
        if self.format != MODEL_FORMAT_VERSION {
            return Err(Error::Schema(format!("model format {:?}", self.format)));
        }
        let here = registry_hash();
        if self.registry_hash != here {
            return Err(Error::RegistryMismatch(format!(
                "model built against {}, this build has {here}",
                self.registry_hash
            )));
        }
        let predictor = match self.predictor {
            Predictor::Pair(p) => Predictor::Pair(p.ready()),
            Predictor::Baseline(b) => Predictor::Baseline(b.ready()),
            m @ Predictor::Majority { .. } => m,
        };
        Ok(ModelBundle { predictor, ..self })
    }
}
