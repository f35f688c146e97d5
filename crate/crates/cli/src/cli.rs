//! Argument parsing and the subcommands.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use wording::corpus::{build_identical_pairs, format_pairs, ingest, mine_pairs, save_corpus, CORPUS_SCHEMA};
use wording::eval::synth::{generate_synthetic, write_synthetic, SyntheticSpec};
use wording::eval::{
    cross_validate, curves_svg, default_curve_sizes, evaluate_heldout, fit_condition, format_curves,
    format_reports, format_top_features, learning_curve, reports_svg, top_features, Condition, ContextConfig,
    EvalConfig, ExperimentReport,
};
use wording::features::{build_lm_pair, build_personal_lms, build_rs_table, feature_names};
use wording::io::{read_json, read_to_string, write_atomic, write_json};
use wording::model::{BaselineModel, ModelBundle, Predictor};
use wording::ngram_lm::Smoothing;
use wording::stats::{deviation_analysis, format_battery, run_battery, DEFAULT_ALPHA};

use crate::api::{self, LoadedModel, PredictRequest};
use crate::featureset::{load_filter, read_lines, train_baseline_from, FeatureSet, Sources};

/// Directory searched for `model.json` when no model path is given.
pub const MODEL_DIR_ENV: &str = "WORDING_MODEL_DIR";
pub const MODEL_FILE: &str = "model.json";

#[derive(Debug, Parser)]
#[command(name = "wording", version, about = "Which phrasing of a message spreads further?")]
#[command(arg_required_else_help = true)]
pub struct Cli {
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Validate a corpus file and write it back normalized.
    Ingest {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: PathBuf,
        #[arg(long, default_value = CORPUS_SCHEMA)]
        schema: String,
    },
    /// Mine labeled pairs from a paired corpus.
    Pairs {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        output: PathBuf,
        /// Also write the wider preference population.
        #[arg(long)]
        preference_output: Option<PathBuf>,
        /// JSON file of pair-filter thresholds.
        #[arg(long)]
        filter: Option<PathBuf>,
    },
    /// Retweet drift of identical pairs by lag window and follower band.
    Confound {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        output: PathBuf,
        /// Lag window boundaries in hours.
        #[arg(long, value_delimiter = ',', default_values_t = [1.0, 6.0, 12.0, 24.0, 72.0])]
        lag_hours: Vec<f64>,
        /// Follower band boundaries.
        #[arg(long, value_delimiter = ',', default_values_t = [1_000u64, 5_000, 10_000])]
        follower_bands: Vec<u64>,
        #[arg(long)]
        filter: Option<PathBuf>,
    },
    /// Language models.
    Lm {
        #[command(subcommand)]
        action: LmAction,
    },
    /// Retweet-score table.
    Rs {
        #[command(subcommand)]
        action: RsAction,
    },
    /// Feature extraction.
    Features {
        #[command(subcommand)]
        action: FeaturesAction,
    },
    /// Run the hypothesis battery over a feature set.
    Hypotest {
        #[arg(long)]
        features: PathBuf,
        /// Text table.
        #[arg(long)]
        output: PathBuf,
        #[arg(long)]
        json: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_ALPHA)]
        alpha: f64,
    },
    /// Fit one condition on every labeled pair and save the model.
    Train {
        #[arg(long)]
        features: PathBuf,
        #[arg(long, value_parser = parse_condition)]
        condition: Condition,
        /// Defaults to $WORDING_MODEL_DIR/model.json.
        #[arg(long)]
        output: Option<PathBuf>,
        /// Also write the largest and smallest weights here.
        #[arg(long)]
        top_features: Option<PathBuf>,
        #[command(flatten)]
        baseline: BaselineArgs,
    },
    /// Cross-validation, held-out evaluation or learning curves.
    Eval {
        #[arg(long, value_enum)]
        mode: Mode,
        #[arg(long)]
        features: PathBuf,
        /// Feature set of the held-out authors.
        #[arg(long)]
        heldout: Option<PathBuf>,
        /// Comma-separated condition names; may be repeated.
        #[arg(long)]
        conditions: Vec<String>,
        #[arg(long)]
        output_dir: PathBuf,
        #[arg(long, default_value_t = 5)]
        folds: usize,
        /// Learning-curve sizes.
        #[arg(long, value_delimiter = ',')]
        sizes: Vec<usize>,
        /// Subsamples per learning-curve size.
        #[arg(long, default_value_t = 10)]
        runs: usize,
        /// Held-out mode: save the first condition's model fit on the
        /// training set.
        #[arg(long)]
        model_output: Option<PathBuf>,
        #[command(flatten)]
        baseline: BaselineArgs,
    },
    /// Compare alternative phrasings with a saved model.
    Predict {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        /// Further variants, up to five in total.
        #[arg(long)]
        variant: Vec<String>,
        /// The author's earlier messages, one per line.
        #[arg(long)]
        history: Option<PathBuf>,
        /// Defaults to $WORDING_MODEL_DIR/model.json.
        #[arg(long)]
        model: Option<PathBuf>,
        /// Write the response here instead of stdout.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Write a synthetic data set with planted signal.
    Synth {
        /// JSON spec; omitted fields take their defaults.
        #[arg(long)]
        spec: Option<PathBuf>,
        #[arg(long)]
        output: PathBuf,
    },
    /// Serve predictions over HTTP.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: String,
        /// Defaults to $WORDING_MODEL_DIR/model.json.
        #[arg(long)]
        model: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
pub enum LmAction {
    Build {
        #[arg(long, value_enum)]
        kind: LmKind,
        /// Corpus file, or one headline per line for `headline`.
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: PathBuf,
        /// Add-k smoothing constant.
        #[arg(long, default_value_t = 1.0)]
        add_k: f64,
    },
}

#[derive(Debug, Subcommand)]
pub enum RsAction {
    Build {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        output: PathBuf,
        #[arg(long, default_value_t = 10)]
        min_occurrences: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum FeaturesAction {
    /// Build the feature context, mine pairs and extract their features.
    Extract {
        #[command(flatten)]
        sources: SourceArgs,
        #[arg(long)]
        output: PathBuf,
        #[arg(long)]
        filter: Option<PathBuf>,
        #[arg(long, default_value_t = 1.0)]
        add_k: f64,
        #[arg(long, default_value_t = 10)]
        rs_min_occurrences: usize,
        /// Reuse the community, headline and retweet-score models of this
        /// feature set, as for held-out authors.
        #[arg(long)]
        context: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LmKind {
    Community,
    Personal,
    Headline,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Cv,
    Heldout,
    Curve,
}

#[derive(Debug, Clone, Args)]
pub struct SourceArgs {
    /// Directory holding paired.tsv, unpaired.tsv, headlines.txt and
    /// optionally lexicon.tsv.
    #[arg(long)]
    pub data: Option<PathBuf>,
    #[arg(long)]
    pub paired: Option<PathBuf>,
    #[arg(long)]
    pub unpaired: Option<PathBuf>,
    #[arg(long)]
    pub headlines: Option<PathBuf>,
    #[arg(long)]
    pub lexicon: Option<PathBuf>,
    /// Request-word list.
    #[arg(long)]
    pub requests: Option<PathBuf>,
    /// Annotated sentences to train the tagger on instead of the bundled set.
    #[arg(long)]
    pub tagged: Option<PathBuf>,
}

impl SourceArgs {
    fn sources(&self) -> Sources {
        Sources {
            data: self.data.clone(),
            paired: self.paired.clone(),
            unpaired: self.unpaired.clone(),
            headlines: self.headlines.clone(),
            lexicon: self.lexicon.clone(),
            requests: self.requests.clone(),
            tagged: self.tagged.clone(),
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct BaselineArgs {
    /// Unpaired corpus for the single-message baseline.
    #[arg(long)]
    pub unpaired: Option<PathBuf>,
    /// Most and least retweeted messages per baseline class.
    #[arg(long, default_value_t = 1000)]
    pub baseline_k: usize,
}

fn parse_condition(s: &str) -> Result<Condition, String> {
    s.parse().map_err(|e: wording::Error| e.to_string())
}

/// Split a comma-separated list, keeping the comma inside `1,2-gram`.
fn parse_conditions(lists: &[String]) -> Result<Vec<Condition>, Failure> {
    let mut out = Vec::new();
    for list in lists {
        let mut pending: Option<&str> = None;
        let mut names = Vec::new();
        for part in list.split(',') {
            match pending.take() {
                Some(head) if part.starts_with("2-gram") => names.push(format!("{head},{part}")),
                Some(head) => {
                    names.push(head.to_string());
                    pending = Some(part);
                }
                None => pending = Some(part),
            }
            if pending.is_some_and(|p| !p.ends_with('1')) {
                names.push(pending.take().unwrap_or_default().to_string());
            }
        }
        names.extend(pending.map(String::from));
        for n in names {
            out.push(parse_condition(n.trim()).map_err(Failure::Usage)?);
        }
    }
    Ok(out)
}

/// Failures split by exit code.
#[derive(Debug)]
pub enum Failure {
    /// Exit 1.
    Usage(String),
    /// Exit 2.
    Data(String),
}

impl From<wording::Error> for Failure {
    fn from(e: wording::Error) -> Failure {
        Failure::Data(e.to_string())
    }
}

impl Failure {
    pub fn code(&self) -> i32 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Data(_) => 2,
        }
    }
}

type Outcome = Result<(), Failure>;

/// Parse `argv` and run; returns the process exit code. Output goes to
/// the given streams.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    0
                }
                _ => {
                    let _ = write!(err, "{text}");
                    1
                }
            };
        }
    };
    match execute(cli, out) {
        Ok(()) => 0,
        Err(f) => {
            let (Failure::Usage(m) | Failure::Data(m)) = &f;
            let _ = writeln!(err, "error: {m}");
            f.code()
        }
    }
}

fn model_path(given: Option<PathBuf>) -> Result<PathBuf, Failure> {
    if let Some(p) = given {
        return Ok(p);
    }
    match std::env::var_os(MODEL_DIR_ENV) {
        Some(d) if !d.is_empty() => Ok(PathBuf::from(d).join(MODEL_FILE)),
        _ => Err(Failure::Usage(format!("no model path given and {MODEL_DIR_ENV} is not set"))),
    }
}

fn smoothing(k: f64) -> Result<Smoothing, Failure> {
    if k > 0.0 && k.is_finite() {
        Ok(Smoothing::AddK { k })
    } else {
        Err(Failure::Usage(format!("--add-k must be positive, got {k}")))
    }
}

fn execute(cli: Cli, out: &mut dyn Write) -> Outcome {
    let seed = cli.seed;
    match cli.command {
        Command::Ingest { input, output, schema } => {
            let c = ingest(&input, &schema)?;
            save_corpus(&output, &c.messages)?;
            let _ = writeln!(
                out,
                "{} messages kept, {} malformed, {} duplicates",
                c.len(),
                c.malformed,
                c.duplicates
            );
        }
        Command::Pairs { corpus, output, preference_output, filter } => {
            let cfg = load_filter(filter.as_deref())?;
            let mined = mine_pairs(&ingest(&corpus, CORPUS_SCHEMA)?, &cfg)?;
            write_atomic(&output, format_pairs(&mined.labeled).as_bytes())?;
            if let Some(p) = preference_output {
                write_atomic(&p, format_pairs(&mined.preference).as_bytes())?;
            }
            let _ = writeln!(out, "{} labeled pairs, {} preference pairs", mined.labeled.len(), mined.preference.len());
        }
        Command::Confound { corpus, output, lag_hours, follower_bands, filter } => {
            let cfg = load_filter(filter.as_deref())?;
            let pairs = build_identical_pairs(&ingest(&corpus, CORPUS_SCHEMA)?, cfg.language)?;
            let windows = boundaries(lag_hours.iter().map(|h| (h * 3600.0).round() as i64), i64::MAX)?;
            let bands = boundaries(follower_bands.iter().copied(), u64::MAX)?;
            let reports = deviation_analysis(&pairs, &windows, &bands);
            write_json(&output, &reports)?;
            let _ = writeln!(out, "{} identical pairs, {} cells", pairs.len(), reports.len());
            let _ = writeln!(out, "{:>8} {:>8} {:>10} {:>10} {:>6} {:>8} {:>8}", "lag_lo", "lag_hi", "band_lo", "band_hi", "n", "D", "r");
            for r in reports.iter().filter(|r| r.n_pairs > 0) {
                let hi = |h: i64| if h == i64::MAX { "inf".to_string() } else { format!("{}h", h / 3600) };
                let band = |b: u64| if b == u64::MAX { "inf".to_string() } else { b.to_string() };
                let pr = r.pearson.map_or("-".to_string(), |p| format!("{p:.3}"));
                let _ = writeln!(
                    out,
                    "{:>8} {:>8} {:>10} {:>10} {:>6} {:>8.3} {:>8}",
                    hi(r.lag_window.0),
                    hi(r.lag_window.1),
                    band(r.follower_band.0),
                    band(r.follower_band.1),
                    r.n_pairs,
                    r.d,
                    pr
                );
            }
        }
        Command::Lm { action: LmAction::Build { kind, input, output, add_k } } => {
            let s = smoothing(add_k)?;
            match kind {
                LmKind::Community => {
                    let c = ingest(&input, CORPUS_SCHEMA)?;
                    let texts = c.messages.iter().filter(|m| !m.is_retweet_like()).map(|m| m.text.as_str());
                    write_json(&output, &build_lm_pair(texts, s)?)?;
                }
                LmKind::Personal => {
                    let c = ingest(&input, CORPUS_SCHEMA)?;
                    write_json(&output, &build_personal_lms(&c.messages, s)?)?;
                }
                LmKind::Headline => {
                    let lines = read_lines(&read_to_string(&input)?);
                    write_json(&output, &build_lm_pair(lines.iter().map(|l| l.as_str()), s)?)?;
                }
            }
        }
        Command::Rs { action: RsAction::Build { corpus, output, min_occurrences } } => {
            let c = ingest(&corpus, CORPUS_SCHEMA)?;
            let table = build_rs_table(&c.messages, min_occurrences)?;
            write_json(&output, &table)?;
            let _ = writeln!(out, "{} words scored", table.len());
        }
        Command::Features { action: FeaturesAction::Extract { sources, output, filter, add_k, rs_min_occurrences, context } } => {
            let filter = load_filter(filter.as_deref())?;
            let set = match context {
                Some(p) => sources.sources().feature_set_in(&FeatureSet::load(&p)?.context, &filter)?,
                None => {
                    let cfg = ContextConfig { smoothing: smoothing(add_k)?, rs_min_occurrences };
                    sources.sources().feature_set(&filter, &cfg, seed)?
                }
            };
            set.save(&output)?;
            let _ = writeln!(out, "{} labeled pairs, {} preference pairs", set.labeled.len(), set.preference.len());
        }
        Command::Hypotest { features, output, json, alpha } => {
            if !(alpha > 0.0 && alpha < 1.0) {
                return Err(Failure::Usage(format!("--alpha must lie in (0, 1), got {alpha}")));
            }
            let set = FeatureSet::load(&features)?;
            let b = run_battery(&set.labeled.observed(), &set.preference.observed(), &feature_names(), alpha)?;
            write_atomic(&output, format_battery(&b).as_bytes())?;
            if let Some(p) = json {
                write_json(&p, &b)?;
            }
            let flagged = b.reports.iter().filter(|r| r.passes_bc).count();
            let _ = writeln!(out, "{} features tested, {flagged} pass the corrected cutoff", b.reports.len());
        }
        Command::Train { features, condition, output, top_features: top, baseline } => {
            let path = model_path(output)?;
            let set = FeatureSet::load(&features)?;
            let b = baseline_for(&[condition], &set, &baseline, seed)?;
            let cfg = EvalConfig { seed, ..EvalConfig::default() };
            let fitted = fit_condition(&set.labeled, condition, &cfg, b.as_ref())?;
            if let (Some(p), Predictor::Pair(pp)) = (top, &fitted.predictor) {
                write_atomic(&p, format_top_features(&top_features(pp, 10)).as_bytes())?;
            }
            let bundle = ModelBundle::new(&condition.name(), seed, &set.context, fitted.predictor);
            bundle.save(&path)?;
            let _ = writeln!(out, "saved {} model to {}", condition.name(), path.display());
        }
        Command::Eval { mode, features, heldout, conditions, output_dir, folds, sizes, runs, model_output, baseline } => {
            let conditions = parse_conditions(&conditions)?;
            let set = FeatureSet::load(&features)?;
            let cfg = EvalConfig { seed, folds, ..EvalConfig::default() };
            eval(mode, &set, heldout.as_deref(), conditions, &output_dir, &cfg, &sizes, runs, model_output, &baseline, out)?;
        }
        Command::Predict { a, b, variant, history, model, output } => {
            let path = model_path(model)?;
            let mut variants = vec![a, b];
            variants.extend(variant);
            let author_history = match history {
                Some(p) => Some(read_lines(&read_to_string(&p)?)),
                None => None,
            };
            let req = PredictRequest { variants, author_history, model: None };
            api::validate(&req).map_err(|e| Failure::Usage(e.to_string()))?;
            let loaded = LoadedModel::load(&path)?;
            let resp = api::predict(&loaded, &req).map_err(|e| Failure::Data(e.to_string()))?;
            let mut bytes = serde_json::to_vec_pretty(&resp).map_err(|e| Failure::Data(e.to_string()))?;
            bytes.push(b'\n');
            match output {
                Some(p) => write_atomic(&p, &bytes)?,
                None => {
                    let _ = out.write_all(&bytes);
                }
            }
        }
        Command::Synth { spec, output } => {
            let mut s: SyntheticSpec = match spec {
                Some(p) => read_json(&p)?,
                None => SyntheticSpec::default(),
            };
            s.seed = seed;
            let corpus = generate_synthetic(&s)?;
            write_synthetic(&corpus, &output)?;
            let _ = writeln!(
                out,
                "{} paired, {} unpaired messages, {} planted pairs",
                corpus.paired.len(),
                corpus.unpaired.len(),
                corpus.truth.len()
            );
        }
        Command::Serve { port, host, model } => {
            let loaded = match model_path(model) {
                Ok(p) if p.exists() => Some(LoadedModel::load(&p)?),
                Ok(p) => {
                    let _ = writeln!(out, "model {} not found; predictions will return 503", p.display());
                    None
                }
                Err(_) => {
                    let _ = writeln!(out, "no model configured; predictions will return 503");
                    None
                }
            };
            serve(&host, port, loaded, out)?;
        }
    }
    Ok(())
}

/// Consecutive `[lo, hi)` ranges from 0 through each boundary to `top`.
fn boundaries<T: Copy + PartialOrd + Default>(
    cuts: impl Iterator<Item = T>,
    top: T,
) -> Result<Vec<(T, T)>, Failure> {
    let mut out = Vec::new();
    let mut lo = T::default();
    for c in cuts {
        if c <= lo {
            return Err(Failure::Usage("boundaries must be positive and increasing".into()));
        }
        out.push((lo, c));
        lo = c;
    }
    out.push((lo, top));
    Ok(out)
}

fn serve(host: &str, port: u16, model: Option<LoadedModel>, out: &mut dyn Write) -> Outcome {
    let rt = tokio::runtime::Builder::new_multi_thread()
        .enable_all()
        .build()
        .map_err(|e| Failure::Data(e.to_string()))?;
    rt.block_on(async {
        let listener = tokio::net::TcpListener::bind((host, port))
            .await
            .map_err(|e| Failure::Data(format!("cannot bind {host}:{port}: {e}")))?;
        let addr = listener.local_addr().map_err(|e| Failure::Data(e.to_string()))?;
        let _ = writeln!(out, "listening on http://{addr}");
        let _ = out.flush();
        crate::service::serve(listener, model).await.map_err(|e| Failure::Data(e.to_string()))
    })
}

fn baseline_for(
    conditions: &[Condition],
    set: &FeatureSet,
    args: &BaselineArgs,
    seed: u64,
) -> Result<Option<BaselineModel>, Failure> {
    if !conditions.contains(&Condition::Baseline) {
        return Ok(None);
    }
    let path = args
        .unpaired
        .as_ref()
        .ok_or_else(|| Failure::Usage("the baseline condition needs --unpaired".into()))?;
    let unpaired = ingest(path, CORPUS_SCHEMA)?;
    Ok(Some(train_baseline_from(&set.context, &unpaired.messages, args.baseline_k, seed)?))
}

/// Comparison partners recorded for every report when present.
const REFERENCES: [Condition; 3] = [Condition::Baseline, Condition::Bigram, Condition::Majority];

fn with_significance(mut reports: Vec<ExperimentReport>) -> Result<Vec<ExperimentReport>, Failure> {
    let refs: BTreeMap<String, ExperimentReport> = reports
        .iter()
        .filter(|r| REFERENCES.contains(&r.condition))
        .map(|r| (r.condition.name(), r.clone()))
        .collect();
    for r in reports.iter_mut() {
        for c in REFERENCES {
            if c == r.condition {
                continue;
            }
            if let Some(other) = refs.get(&c.name()) {
                r.add_significance(other)?;
            }
        }
    }
    Ok(reports)
}

fn write_text(path: &Path, text: &str) -> Outcome {
    Ok(write_atomic(path, text.as_bytes())?)
}

#[allow(clippy::too_many_arguments)]
fn eval(
    mode: Mode,
    set: &FeatureSet,
    heldout: Option<&Path>,
    conditions: Vec<Condition>,
    dir: &Path,
    cfg: &EvalConfig,
    sizes: &[usize],
    runs: usize,
    model_output: Option<PathBuf>,
    baseline: &BaselineArgs,
    out: &mut dyn Write,
) -> Outcome {
    let conditions = if !conditions.is_empty() {
        conditions
    } else if mode == Mode::Curve {
        vec![Condition::CustomBigram, Condition::Bigram]
    } else {
        Condition::standard()
            .into_iter()
            .filter(|c| *c != Condition::Baseline || baseline.unpaired.is_some())
            .collect()
    };
    let b = baseline_for(&conditions, set, baseline, cfg.seed)?;
    match mode {
        Mode::Cv | Mode::Heldout => {
            let held = match (mode, heldout) {
                (Mode::Heldout, Some(p)) => Some(FeatureSet::load(p)?),
                (Mode::Heldout, None) => return Err(Failure::Usage("--mode heldout needs --heldout".into())),
                _ => None,
            };
            let mut reports = Vec::with_capacity(conditions.len());
            for &c in &conditions {
                let r = match &held {
                    Some(h) => evaluate_heldout(&set.labeled, &h.labeled, c, cfg, b.as_ref())?,
                    None => cross_validate(&set.labeled, c, cfg, b.as_ref())?,
                };
                let _ = writeln!(out, "{:<22} {:.4}", c.name(), r.accuracy);
                reports.push(r);
            }
            if let (Some(p), Some(&c)) = (model_output, conditions.first()) {
                let fitted = fit_condition(&set.labeled, c, cfg, b.as_ref())?;
                ModelBundle::new(&c.name(), cfg.seed, &set.context, fitted.predictor).save(&p)?;
            }
            let reports = with_significance(reports)?;
            write_json(dir.join("reports.json"), &reports)?;
            write_text(&dir.join("reports.txt"), &format_reports(&reports))?;
            write_text(&dir.join("reports.svg"), &reports_svg(&reports))?;
        }
        Mode::Curve => {
            let n = set.labeled.len();
            let sizes: Vec<usize> = if sizes.is_empty() {
                let s: Vec<usize> = default_curve_sizes().into_iter().filter(|&s| s <= n).collect();
                if s.is_empty() {
                    vec![n]
                } else {
                    s
                }
            } else {
                sizes.to_vec()
            };
            let mut curves = Vec::with_capacity(conditions.len());
            for &c in &conditions {
                let curve = learning_curve(&set.labeled, c, &sizes, runs, cfg, b.as_ref())?;
                let _ = writeln!(out, "{:<22} {}", c.name(), curve.points.iter().map(|p| format!("{:.4}", p.mean)).collect::<Vec<_>>().join(" "));
                curves.push(curve);
            }
            write_json(dir.join("curves.json"), &curves)?;
            write_text(&dir.join("curves.txt"), &format_curves(&curves))?;
            write_text(&dir.join("curves.svg"), &curves_svg(&curves))?;
        }
    }
    Ok(())
}
