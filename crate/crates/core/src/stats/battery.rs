//! The per-feature hypothesis battery.
//!
//! Efficacy: paired t-test of better versus worse member on labeled pairs.
//! Author preference: binomial test of how often the later version has the
//! larger value, over the wider preference population. Pairs with equal
//! values are left out of the binomial n but kept in the percentage
//! denominator.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::corpus::Label;
use crate::error::{Error, Result};
use crate::stats::binomial::{binomial_test_one_sided, Tail};
use crate::stats::ttest::paired_t_test_one_sided;

pub const DEFAULT_ALPHA: f64 = 0.05;

/// Raw custom features of both members of one pair.
#[derive(Debug, Clone, Copy)]
pub struct ObservedPair<'a> {
    pub v1: &'a [f64],
    pub v2: &'a [f64],
    pub label: Option<Label>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Direction {
    #[serde(rename = "up")]
    Up,
    #[serde(rename = "down")]
    Down,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestReport {
    pub feature: String,
    pub t_stat: f64,
    /// One-sided p for better > worse.
    pub p_efficacy: f64,
    /// One-sided p for better < worse.
    pub p_efficacy_lower: f64,
    pub passes_bc: bool,
    /// Arrow tiers: 1 for p < .05, 2 for .01, 3 for .001, 4 for 1e-20.
    pub tier: u8,
    pub direction: Option<Direction>,
    pub pref_pct: f64,
    pub pref_pct_untied: f64,
    pub p_pref_high: f64,
    pub p_pref_low: f64,
    pub n_pairs: usize,
    pub n_pref_pairs: usize,
    pub n_ties: usize,
}

impl TestReport {
    /// The smaller of the two one-sided efficacy p-values.
    pub fn p_min(&self) -> f64 {
        self.p_efficacy.min(self.p_efficacy_lower)
    }

    pub fn significant_at(&self, alpha: f64) -> bool {
        self.p_min() < alpha
    }

    /// Arrows plus an optional BC star, e.g. "↑↑↑*".
    pub fn notation(&self) -> String {
        let arrow = match self.direction {
            Some(Direction::Up) => "↑",
            Some(Direction::Down) => "↓",
            None => return String::new(),
        };
        let mut s = arrow.repeat(self.tier as usize);
        if self.passes_bc {
            s.push('*');
        }
        s
    }

    /// "YES 61%" when the later version tends to have the larger value,
    /// "NO 40%" when it tends to have the smaller one, blank otherwise.
    pub fn preference_notation(&self, alpha: f64) -> String {
        let pct = (self.pref_pct_untied * 100.0).round();
        if self.p_pref_high < alpha {
            format!("YES {pct:.0}%")
        } else if self.p_pref_low < alpha {
            format!("NO {pct:.0}%")
        } else {
            format!("{pct:.0}%")
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Battery {
    pub alpha: f64,
    pub m: usize,
    pub bc_cutoff: f64,
    pub bc_cutoff_text: String,
    pub n_labeled: usize,
    pub n_preference: usize,
    pub reports: Vec<TestReport>,
}

pub fn bonferroni(alpha: f64, m: usize) -> f64 {
    alpha / m as f64
}

pub fn format_cutoff(c: f64) -> String {
    format!("{c:.4e}")
}

pub fn tier(p: f64) -> u8 {
    if p < 1e-20 {
        4
    } else if p < 0.001 {
        3
    } else if p < 0.01 {
        2
    } else if p < 0.05 {
        1
    } else {
        0
    }
}

fn check_width(v: &[f64], m: usize) -> Result<()> {
    if v.len() != m {
        return Err(Error::RegistryMismatch(format!(
            "feature vector has {} values, registry has {m}",
            v.len()
        )));
    }
    Ok(())
}

/// One report per name, in order. `names` is normally the custom registry.
pub fn run_battery(
    labeled: &[ObservedPair<'_>],
    preference: &[ObservedPair<'_>],
    names: &[&str],
    alpha: f64,
) -> Result<Battery> {
    if labeled.is_empty() {
        return Err(Error::EmptyInput("labeled pairs"));
    }
    if preference.is_empty() {
        return Err(Error::EmptyInput("preference pairs"));
    }
    let m = names.len();
    for p in labeled.iter().chain(preference) {
        check_width(p.v1, m)?;
        check_width(p.v2, m)?;
    }
    let cutoff = bonferroni(alpha, m);
    let mut reports = Vec::with_capacity(m);
    for (f, name) in names.iter().enumerate() {
        let mut better = Vec::with_capacity(labeled.len());
        let mut worse = Vec::with_capacity(labeled.len());
        for p in labeled {
            let (b, w) = match p.label {
                Some(Label::T2Wins) => (p.v2[f], p.v1[f]),
                Some(Label::T1Wins) => (p.v1[f], p.v2[f]),
                None => return Err(Error::Invalid("battery efficacy pair without a label".into())),
            };
            better.push(b);
            worse.push(w);
        }
        let t = paired_t_test_one_sided(&better, &worse)?;

        let (mut up, mut ties) = (0u64, 0usize);
        for p in preference {
            if p.v2[f] > p.v1[f] {
                up += 1;
            } else if p.v2[f] == p.v1[f] {
                ties += 1;
            }
        }
        let untied = (preference.len() - ties) as u64;
        let (p_high, p_low) = if untied == 0 {
            (1.0, 1.0)
        } else {
            (
                binomial_test_one_sided(up, untied, Tail::High),
                binomial_test_one_sided(up, untied, Tail::Low),
            )
        };

        let (p_min, direction) = if t.p_upper <= t.p_lower {
            (t.p_upper, Direction::Up)
        } else {
            (t.p_lower, Direction::Down)
        };
        let tr = tier(p_min);
        reports.push(TestReport {
            feature: name.to_string(),
            t_stat: t.t,
            p_efficacy: t.p_upper,
            p_efficacy_lower: t.p_lower,
            passes_bc: p_min < cutoff,
            tier: tr,
            direction: (tr > 0).then_some(direction),
            pref_pct: up as f64 / preference.len() as f64,
            pref_pct_untied: if untied == 0 { 0.5 } else { up as f64 / untied as f64 },
            p_pref_high: p_high,
            p_pref_low: p_low,
            n_pairs: labeled.len(),
            n_pref_pairs: preference.len(),
            n_ties: ties,
        });
    }
    Ok(Battery {
        alpha,
        m,
        bc_cutoff: cutoff,
        bc_cutoff_text: format_cutoff(cutoff),
        n_labeled: labeled.len(),
        n_preference: preference.len(),
        reports,
    })
}

fn fmt_p(p: f64) -> String {
    if p < 1e-300 {
        "<1e-300".to_string()
    } else {
        format!("{p:.3e}")
    }
}

/// Plain-text table of a battery.
pub fn format_battery(b: &Battery) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "labeled pairs {}  preference pairs {}  BC cutoff {}/{} = {}",
        b.n_labeled, b.n_preference, b.alpha, b.m, b.bc_cutoff_text
    );
    let _ = writeln!(
        s,
        "{:<22} {:>7} {:>10} {:>10} {:>10} {:>6} {:>10}",
        "feature", "effect", "t", "p_up", "p_down", "ties", "preference"
    );
    for r in &b.reports {
        let _ = writeln!(
            s,
            "{:<22} {:>7} {:>10.3} {:>10} {:>10} {:>6} {:>10}",
            r.feature,
            r.notation(),
            r.t_stat,
            fmt_p(r.p_efficacy),
            fmt_p(r.p_efficacy_lower),
            r.n_ties,
            r.preference_notation(b.alpha)
        );
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cutoff_matches_printed_value() {
        let c = bonferroni(0.05, 39);
        assert_eq!(format_cutoff(c), "1.2821e-3");
        assert_eq!(format!("{:.2e}", c), "1.28e-3");
    }

    #[test]
    fn tiers() {
        assert_eq!(tier(0.2), 0);
        assert_eq!(tier(0.04), 1);
        assert_eq!(tier(0.005), 2);
        assert_eq!(tier(1e-5), 3);
        assert_eq!(tier(1e-25), 4);
    }

    #[test]
    fn small_battery() {
        let rows: Vec<(Vec<f64>, Vec<f64>, Label)> = (0..30)
            .map(|i| {
                let x = i as f64;
                (vec![x, 1.0], vec![x + 1.0 + (i % 3) as f64, 1.0], Label::T2Wins)
            })
            .collect();
        let obs: Vec<ObservedPair> = rows
            .iter()
            .map(|(a, b, l)| ObservedPair { v1: a, v2: b, label: Some(*l) })
            .collect();
        let b = run_battery(&obs, &obs, &["a", "b"], 0.05).unwrap();
        assert_eq!(b.reports.len(), 2);
        let a = &b.reports[0];
        assert!(a.passes_bc && a.direction == Some(Direction::Up));
        assert_eq!(a.pref_pct, 1.0);
        assert_eq!(b.reports[1].n_ties, 30);
        assert_eq!(b.reports[1].notation(), "");
        assert!(format_battery(&b).contains("↑↑↑"));
        let bad = [ObservedPair { v1: &[1.0], v2: &[1.0, 2.0], label: Some(Label::T1Wins) }];
        assert!(run_battery(&bad, &bad, &["a", "b"], 0.05).is_err());
    }
}
