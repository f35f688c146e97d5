#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::sync::OnceLock;

use tempfile::TempDir;

/// Small synthetic corpus: 30 authors with 20 planted pairs each.
pub const SPEC: &str = r#"{"authors": 30, "pairs_per_author": 20, "unpaired_messages": 1500, "headlines": 300}"#;

pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Run the command line in-process.
pub fn wording(args: &[&str]) -> Output {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("wording").chain(args.iter().copied());
    let code = wording_cli::cli::run(argv, &mut out, &mut err);
    Output {
        code,
        stdout: String::from_utf8(out).unwrap(),
        stderr: String::from_utf8(err).unwrap(),
    }
}

pub fn ok(args: &[&str]) -> String {
    let o = wording(args);
    assert_eq!(o.code, 0, "wording {args:?} failed: {}", o.stderr);
    o.stdout
}

pub fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// Synthetic data, its feature set and a trained custom model.
pub struct Fixture {
    pub dir: TempDir,
    pub data: PathBuf,
    pub features: PathBuf,
    pub model: PathBuf,
}

pub fn build_fixture(seed: u64) -> Fixture {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("spec.json");
    std::fs::write(&spec, SPEC).unwrap();
    let data = dir.path().join("data");
    let features = dir.path().join("features.json");
    let model = dir.path().join("model.json");
    let seed = seed.to_string();
    ok(&["--seed", &seed, "synth", "--spec", s(&spec), "--output", s(&data)]);
    ok(&["--seed", &seed, "features", "extract", "--data", s(&data), "--output", s(&features)]);
    ok(&["--seed", &seed, "train", "--features", s(&features), "--condition", "custom", "--output", s(&model)]);
    Fixture { dir, data, features, model }
}

pub fn fixture() -> &'static Fixture {
    static F: OnceLock<Fixture> = OnceLock::new();
    F.get_or_init(|| build_fixture(3))
}

/// Every file under `root` with its bytes, sorted by relative path.
pub fn snapshot(root: &Path) -> Vec<(PathBuf, Vec<u8>)> {
    let mut out = Vec::new();
    let mut stack = vec![root.to_path_buf()];
    while let Some(d) = stack.pop() {
        for e in std::fs::read_dir(&d).unwrap() {
            let p = e.unwrap().path();
            if p.is_dir() {
                stack.push(p);
            } else {
                out.push((p.strip_prefix(root).unwrap().to_path_buf(), std::fs::read(&p).unwrap()));
            }
        }
    }
    out.sort();
    out
}

/// Synth, features, hypothesis battery, cross-validation with the baseline,
/// learning curve and training, all under `root`.
pub fn full_pipeline(root: &Path, seed: u64) {
    let spec = root.join("spec.json");
    std::fs::write(&spec, SPEC).unwrap();
    let seed = seed.to_string();
    let data = root.join("data");
    let fs = root.join("features.json");
    let run = |args: &[&str]| {
        let mut a = vec!["--seed", &seed];
        a.extend_from_slice(args);
        ok(&a);
    };
    run(&["synth", "--spec", s(&spec), "--output", s(&data)]);
    run(&["pairs", "--corpus", s(&data.join("paired.tsv")), "--output", s(&root.join("pairs.tsv"))]);
    run(&["confound", "--corpus", s(&data.join("paired.tsv")), "--output", s(&root.join("confound.json"))]);
    run(&["features", "extract", "--data", s(&data), "--output", s(&fs)]);
    run(&["hypotest", "--features", s(&fs), "--output", s(&root.join("battery.txt")), "--json", s(&root.join("battery.json"))]);
    run(&[
        "eval",
        "--mode",
        "cv",
        "--features",
        s(&fs),
        "--unpaired",
        s(&data.join("unpaired.tsv")),
        "--baseline-k",
        "200",
        "--output-dir",
        s(&root.join("cv")),
    ]);
    run(&[
        "eval",
        "--mode",
        "curve",
        "--features",
        s(&fs),
        "--sizes",
        "300,600",
        "--runs",
        "2",
        "--output-dir",
        s(&root.join("curve")),
    ]);
    run(&[
        "train",
        "--features",
        s(&fs),
        "--condition",
        "custom+1,2-gram",
        "--output",
        s(&root.join("model.json")),
        "--top-features",
        s(&root.join("top.txt")),
    ]);
}
