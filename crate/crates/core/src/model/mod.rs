//! Pair classifiers: normalization, difference vectors, logistic
//! regression, the single-message baseline and model files.

mod advise;
mod baseline;
mod bundle;
mod folds;
mod logreg;
mod normalize;
mod select;
mod space;

pub use advise::{
    compare_variants, feature_breakdown, group_names, FeatureBreakdown, FeatureValue, Matchup, VariantComparison,
    MAX_VARIANTS, MIN_VARIANTS,
};
pub use baseline::{
    day_of_week, hour_of_day, select_extremes, train_baseline, train_baseline_labeled, BaselineConfig,
    BaselineModel, Scored, DAY_COLUMNS, HOUR_COLUMNS,
};
pub use bundle::{Contributions, ModelBundle, PairPredictor, Predictor, MODEL_FORMAT_VERSION};
pub use folds::grouped_folds;
pub use logreg::{
    check_examples, dot, fit, objective, objective_and_gradient, sigmoid, Example, LogRegModel,
    OptimizerConfig, TrainerReport,
};
pub use normalize::Normalizer;
pub use select::{accuracy, train_with_cv, LambdaSelection, TrainConfig, DEFAULT_LAMBDA_GRID};
pub use space::{difference, FeatureSpace, PairEncoder};
