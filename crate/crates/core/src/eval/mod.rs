//! Experiments: pipelines, cross-validation, reports and synthetic data.

pub mod baseline;
pub mod condition;
pub mod experiment;
pub mod pipeline;
pub mod report;
pub mod synth;

pub use baseline::{ExtremeSet, MessageCvReport};
pub use condition::Condition;
pub use experiment::{
    compare_classifiers, cross_validate, cross_validate_with_models, default_curve_sizes, evaluate_heldout,
    fit_condition, learning_curve, par_map, permute_within_authors, shared_authors, sign_test, top_features,
    Comparison, CurvePoint, CurveReport, EvalConfig, ExperimentReport, Fitted, PairPrediction, Protocol,
    Significance, TopFeatures,
};
pub use pipeline::{build_context, prepare, ContextConfig, Dataset, Prepared};
pub use report::{curves_svg, format_curves, format_reports, format_top_features, reports_svg};
