//! Hypothesis tests and the confound analysis.

mod battery;
mod binomial;
mod deviation;
mod special;
mod ttest;

pub use battery::{
    bonferroni, format_battery, format_cutoff, run_battery, tier, Battery, Direction, ObservedPair,
    TestReport, DEFAULT_ALPHA,
};
pub use binomial::{binomial_test_one_sided, Tail};
pub use deviation::{deviation_analysis, pearson, DeviationReport, LOW_COUNTS};
pub use special::{inc_beta, ln_beta, ln_gamma, t_cdf, t_sf};
pub use ttest::{paired_t_test_one_sided, TTest};
