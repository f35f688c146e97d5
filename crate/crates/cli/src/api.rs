//! Request and response bodies of the prediction API, and the single code
//! path that both the service and `wording predict` go through.

use serde::{Deserialize, Serialize};
use wording::model::{
    compare_variants, feature_breakdown, FeatureBreakdown, ModelBundle, MAX_VARIANTS, MIN_VARIANTS,
};

pub const API_VERSION: &str = "v1";

/// A model together with its content id.
#[derive(Debug, Clone)]
pub struct LoadedModel {
    pub bundle: ModelBundle,
    pub id: String,
}

impl LoadedModel {
    pub fn new(bundle: ModelBundle) -> wording::Result<LoadedModel> {
        let id = bundle.id()?;
        Ok(LoadedModel { bundle, id })
    }

    pub fn load(path: &std::path::Path) -> wording::Result<LoadedModel> {
        LoadedModel::new(ModelBundle::load(path)?)
    }

    pub fn info(&self) -> ModelInfo {
        ModelInfo {
            api_version: API_VERSION.into(),
            model_version: self.bundle.format.clone(),
            model_id: self.id.clone(),
            condition: self.bundle.condition.clone(),
            registry_hash: self.bundle.registry_hash.clone(),
            seed: self.bundle.seed,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PredictRequest {
    pub variants: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub author_history: Option<Vec<String>>,
    /// Must match the served model's id when given.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupContribution {
    pub group: String,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairwiseResult {
    pub i: usize,
    pub j: usize,
    /// Probability that variant `i` beats variant `j`.
    pub p_i_wins: f64,
    /// Signed margin contributions toward `i`.
    pub groups: Vec<GroupContribution>,
    pub bow: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PredictResponse {
    pub api_version: String,
    pub model_version: String,
    pub model_id: String,
    pub condition: String,
    pub winner: usize,
    /// Summed pairwise win probabilities per variant.
    pub scores: Vec<f64>,
    pub probabilities: Vec<Vec<f64>>,
    pub pairwise: Vec<PairwiseResult>,
    /// No author history was given, so personal language-model features
    /// used the community model.
    pub personal_fallback: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelInfo {
    pub api_version: String,
    pub model_version: String,
    pub model_id: String,
    pub condition: String,
    pub registry_hash: String,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeaturesResponse {
    pub api_version: String,
    #[serde(flatten)]
    pub breakdown: FeatureBreakdown,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ApiError {
    /// Well-formed but unacceptable request.
    Unprocessable(String),
    Internal(String),
}

impl std::fmt::Display for ApiError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ApiError::Unprocessable(m) | ApiError::Internal(m) => f.write_str(m),
        }
    }
}

/// Checks that need no model.
pub fn validate(req: &PredictRequest) -> Result<(), ApiError> {
    let n = req.variants.len();
    if !(MIN_VARIANTS..=MAX_VARIANTS).contains(&n) {
        return Err(ApiError::Unprocessable(format!(
            "expected {MIN_VARIANTS} to {MAX_VARIANTS} variants, got {n}"
        )));
    }
    if let Some(i) = req.variants.iter().position(|t| t.trim().is_empty()) {
        return Err(ApiError::Unprocessable(format!("variant {i} is empty")));
    }
    Ok(())
}

pub fn predict(model: &LoadedModel, req: &PredictRequest) -> Result<PredictResponse, ApiError> {
    validate(req)?;
    if let Some(id) = &req.model {
        if *id != model.id {
            return Err(ApiError::Unprocessable(format!("unknown model {id:?}; serving {}", model.id)));
        }
    }
    let c = compare_variants(&model.bundle, &req.variants, req.author_history.as_deref())
        .map_err(|e| ApiError::Internal(e.to_string()))?;
    Ok(PredictResponse {
        api_version: API_VERSION.into(),
        model_version: c.model_version,
        model_id: model.id.clone(),
        condition: c.condition,
        winner: c.winner,
        scores: c.scores,
        probabilities: c.probabilities,
        pairwise: c
            .matchups
            .into_iter()
            .map(|m| PairwiseResult {
                i: m.i,
                j: m.j,
                p_i_wins: m.p_i_wins,
                groups: m.groups.into_iter().map(|(group, value)| GroupContribution { group, value }).collect(),
                bow: m.bow,
            })
            .collect(),
        personal_fallback: c.personal_fallback,
    })
}

pub fn features(model: &LoadedModel, text: &str) -> Result<FeaturesResponse, ApiError> {
    if text.trim().is_empty() {
        return Err(ApiError::Unprocessable("text is empty".into()));
    }
    let breakdown = feature_breakdown(&model.bundle, text, None).map_err(|e| ApiError::Internal(e.to_string()))?;
    Ok(FeaturesResponse { api_version: API_VERSION.into(), breakdown })
}
