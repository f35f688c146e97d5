//! Text tables and SVG charts for experiment reports.

use std::fmt::Write;

use super::condition::Condition;
use super::experiment::{CurveReport, ExperimentReport, TopFeatures};

fn fmt_p(p: f64) -> String {
    if p < 1e-300 {
        "<1e-300".into()
    } else {
        format!("{p:.3e}")
    }
}

/// One row per report: accuracy, fold spread, per-fold values and any
/// recorded sign tests.
pub fn format_reports(reports: &[ExperimentReport]) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "{:<22} {:>8} {:>7} {:>6}  folds", "condition", "accuracy", "sd", "n");
    for r in reports {
        let folds: Vec<String> = r.fold_accuracies.iter().map(|a| format!("{a:.4}")).collect();
        let _ = writeln!(
            s,
            "{:<22} {:>8.4} {:>7.4} {:>6}  {}",
            r.condition.name(),
            r.accuracy,
            r.fold_sd(),
            r.n,
            folds.join(" ")
        );
        for sig in &r.significance {
            let _ = writeln!(
                s,
                "{:<22}   vs {}: {} wins, {} losses, p = {}",
                "",
                sig.competitor,
                sig.wins,
                sig.losses,
                fmt_p(sig.p_value)
            );
        }
    }
    s
}

pub fn format_curves(curves: &[CurveReport]) -> String {
    let mut s = String::new();
    let _ = write!(s, "{:<8}", "n");
    for c in curves {
        let _ = write!(s, " {:>18}", c.condition.name());
    }
    s.push('\n');
    let sizes: Vec<usize> = curves.first().map(|c| c.points.iter().map(|p| p.n).collect()).unwrap_or_default();
    for (i, n) in sizes.iter().enumerate() {
        let _ = write!(s, "{n:<8}");
        for c in curves {
            match c.points.get(i) {
                Some(p) => {
                    let _ = write!(s, " {:>18.4}", p.mean);
                }
                None => {
                    let _ = write!(s, " {:>18}", "-");
                }
            }
        }
        s.push('\n');
    }
    s
}

pub fn format_top_features(t: &TopFeatures) -> String {
    let mut s = String::new();
    let mut section = |title: &str, items: &[(String, f64)]| {
        if items.is_empty() {
            return;
        }
        let _ = writeln!(s, "{title}");
        for (name, w) in items {
            let _ = writeln!(s, "  {w:>+9.4}  {name}");
        }
    };
    section("custom, largest weights", &t.custom_best);
    section("custom, smallest weights", &t.custom_worst);
    section("bag-of-words, largest weights", &t.bow_best);
    section("bag-of-words, smallest weights", &t.bow_worst);
    s
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 360.0;
const LEFT: f64 = 56.0;
const RIGHT: f64 = 16.0;
const TOP: f64 = 20.0;
const BOTTOM: f64 = 96.0;

struct Axis {
    lo: f64,
    hi: f64,
}

impl Axis {
    fn around(values: impl Iterator<Item = f64>) -> Axis {
        let (mut lo, mut hi) = (0.5f64, 0.5f64);
        for v in values {
            lo = lo.min(v);
            hi = hi.max(v);
        }
        Axis { lo: ((lo - 0.05) * 10.0).floor() / 10.0, hi: ((hi + 0.05) * 10.0).ceil() / 10.0 }
    }

    fn y(&self, v: f64) -> f64 {
        let h = HEIGHT - TOP - BOTTOM;
        TOP + h * (1.0 - (v - self.lo) / (self.hi - self.lo))
    }

    fn draw(&self, s: &mut String) {
        let _ = writeln!(
            s,
            r#"<line x1="{LEFT}" y1="{TOP}" x2="{LEFT}" y2="{}" stroke="black"/>"#,
            HEIGHT - BOTTOM
        );
        let steps = ((self.hi - self.lo) * 10.0).round() as usize;
        for i in 0..=steps {
            let v = self.lo + i as f64 / 10.0;
            let y = self.y(v);
            let _ = writeln!(
                s,
                r#"<line x1="{}" y1="{y:.1}" x2="{LEFT}" y2="{y:.1}" stroke="black"/><text x="{}" y="{:.1}" font-size="11" text-anchor="end">{v:.1}</text>"#,
                LEFT - 4.0,
                LEFT - 6.0,
                y + 4.0
            );
        }
    }
}

fn svg_open(s: &mut String, title: &str) {
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif">"#
    );
    let _ = writeln!(s, "<title>{}</title>", escape(title));
}

/// Bar per report with fold-spread whiskers and a dashed rule at the
/// baseline condition's accuracy (majority if there is no baseline).
pub fn reports_svg(reports: &[ExperimentReport]) -> String {
    let mut s = String::new();
    svg_open(&mut s, "accuracy by condition");
    let axis = Axis::around(reports.iter().flat_map(|r| [r.accuracy + r.fold_sd(), r.accuracy - r.fold_sd()]));
    axis.draw(&mut s);
    let slot = (WIDTH - LEFT - RIGHT) / reports.len().max(1) as f64;
    let base_y = axis.y(axis.lo);
    for (i, r) in reports.iter().enumerate() {
        let x = LEFT + slot * i as f64 + slot * 0.15;
        let w = slot * 0.7;
        let y = axis.y(r.accuracy);
        let _ = writeln!(
            s,
            r##"<rect x="{x:.1}" y="{y:.1}" width="{w:.1}" height="{:.1}" fill="#4a78b0"/>"##,
            base_y - y
        );
        let sd = r.fold_sd();
        let cx = x + w / 2.0;
        let _ = writeln!(
            s,
            r#"<line x1="{cx:.1}" y1="{:.1}" x2="{cx:.1}" y2="{:.1}" stroke="black"/>"#,
            axis.y(r.accuracy + sd),
            axis.y(r.accuracy - sd)
        );
        let _ = writeln!(
            s,
            r#"<text transform="translate({cx:.1},{:.1}) rotate(-45)" font-size="11" text-anchor="end">{}</text>"#,
            base_y + 12.0,
            escape(&r.condition.name())
        );
    }
    let rule = reports
        .iter()
        .find(|r| r.condition == Condition::Baseline)
        .or_else(|| reports.iter().find(|r| r.condition == Condition::Majority));
    if let Some(r) = rule {
        let y = axis.y(r.accuracy);
        let _ = writeln!(
            s,
            r#"<line x1="{LEFT}" y1="{y:.1}" x2="{}" y2="{y:.1}" stroke="black" stroke-dasharray="6,4"/>"#,
            WIDTH - RIGHT
        );
    }
    s.push_str("</svg>\n");
    s
}

const PALETTE: [&str; 6] = ["#4a78b0", "#c0504d", "#6a9a3a", "#8064a2", "#d08a2c", "#404040"];

/// One line per curve, accuracy against training-set size.
pub fn curves_svg(curves: &[CurveReport]) -> String {
    let mut s = String::new();
    svg_open(&mut s, "learning curves");
    let axis = Axis::around(curves.iter().flat_map(|c| c.points.iter().map(|p| p.mean)));
    axis.draw(&mut s);
    let n_max = curves
        .iter()
        .flat_map(|c| c.points.iter().map(|p| p.n))
        .max()
        .unwrap_or(1) as f64;
    let x_of = |n: usize| LEFT + (WIDTH - LEFT - RIGHT) * n as f64 / n_max;
    for (i, c) in curves.iter().enumerate() {
        let colour = PALETTE[i % PALETTE.len()];
        let pts: Vec<String> = c
            .points
            .iter()
            .map(|p| format!("{:.1},{:.1}", x_of(p.n), axis.y(p.mean)))
            .collect();
        let _ = writeln!(
            s,
            r#"<polyline points="{}" fill="none" stroke="{colour}" stroke-width="2"/>"#,
            pts.join(" ")
        );
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" font-size="11" fill="{colour}">{}</text>"#,
            LEFT + 8.0,
            HEIGHT - BOTTOM + 30.0 + 14.0 * i as f64,
            escape(&c.condition.name())
        );
    }
    s.push_str("</svg>\n");
    s
}
