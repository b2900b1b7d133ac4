use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use textile_inspect::gann::{model_io, StopReason};

const BIN: &str = env!("CARGO_BIN_EXE_textile-inspect");

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// Small corpus plus a model trained on it.
struct Fixture {
    _dir: tempfile::TempDir,
    corpus: PathBuf,
    model: PathBuf,
}

fn fixture() -> Fixture {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("corpus");
    let model = dir.path().join("model.txt");
    let o = run(&["gen-data", "--out", s(&corpus), "--seed", "3"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let o = run(&[
        "train",
        "--features",
        s(&corpus.join("features.csv")),
        "--population",
        "64",
        "--max-cycles",
        "20000",
        "--max-time",
        "off",
        "--seed",
        "1",
        "--model-out",
        s(&model),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    Fixture {
        _dir: dir,
        corpus,
        model,
    }
}

#[test]
fn inspect_reports_verdicts_and_features() {
    let f = fixture();
    // Corpus order: 6 color yarn, 16 + 16 missing yarn, then 11 holes.
    let hole = f.corpus.join("img_040.ppm");
    let o = run(&["inspect", "--image", s(&hole), "--model", s(&f.model)]);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.starts_with("verdict: Hole\n"), "{out}");
    assert!(out.contains("raw: height="));
    assert!(out.contains("scaled: height="));

    let clean = f.corpus.join("img_099.ppm");
    let debug = f.corpus.join("stages");
    let o = run(&[
        "inspect",
        "--image",
        s(&clean),
        "--model",
        s(&f.model),
        "--debug-stages",
        s(&debug),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).starts_with("verdict: Defect-Free\n"));
    assert!(stdout(&o).contains("raw: height=0 width=0 ratio=0 regions=0"));
    for stage in ["gray", "filtered", "binary", "denoised"] {
        assert!(
            debug.join(format!("img_099-{stage}.pgm")).exists(),
            "{stage}"
        );
    }

    let o = run(&["evaluate", "--corpus", s(&f.corpus), "--model", s(&f.model)]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("overall: "));
    assert!(stdout(&o).contains("zero feature vector: "));
}

#[test]
fn truncated_image_names_the_file() {
    let dir = tempfile::tempdir().unwrap();
    let img = dir.path().join("cut.pgm");
    std::fs::write(&img, b"P5\n4 4\n255\n\x01\x02\x03").unwrap();
    let model = dir.path().join("m.txt");
    std::fs::write(&model, "not a model").unwrap();
    let o = run(&["inspect", "--image", s(&img), "--model", s(&model)]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("cut.pgm"), "{}", stderr(&o));
}

#[test]
fn missing_files_exit_with_io_code() {
    let o = run(&[
        "inspect",
        "--image",
        "/nonexistent/a.pgm",
        "--model",
        "/nonexistent/m",
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("/nonexistent/a.pgm"));
}

#[test]
fn usage_errors_exit_with_one() {
    let o = run(&["train", "--no-such-flag"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("Usage"), "{}", stderr(&o));
    assert_eq!(run(&[]).status.code(), Some(1));
    assert_eq!(
        run(&["sweep", "--param", "X", "--features", "f", "--out", "o"])
            .status
            .code(),
        Some(1)
    );
    let help = run(&["--help"]);
    assert_eq!(help.status.code(), Some(0));
    assert!(stdout(&help).contains("gen-data"));
}

fn tiny_features(dir: &Path) -> PathBuf {
    let corpus = dir.join("corpus");
    let o = run(&[
        "gen-data",
        "--out",
        s(&corpus),
        "--size",
        "256",
        "--seed",
        "2",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    corpus.join("features.csv")
}

#[test]
fn train_flags_shape_the_model() {
    let dir = tempfile::tempdir().unwrap();
    let features = tiny_features(dir.path());
    let model = dir.path().join("m.txt");
    let o = run(&[
        "train",
        "--features",
        s(&features),
        "--hidden",
        "26",
        "--max-cycles",
        "0",
        "--population",
        "16",
        "--model-out",
        s(&model),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let m = model_io::load(&model).unwrap();
    assert_eq!(m.topology().to_string(), "4-26-6");
    assert_eq!(m.record.stop_reason, StopReason::MaxCycles);
    assert_eq!(m.record.cycles, 0);
    assert_eq!(
        stdout(&o)
            .lines()
            .filter(|l| l.starts_with("round "))
            .count(),
        3
    );
}

#[test]
fn invalid_parameters_exit_with_three() {
    let dir = tempfile::tempdir().unwrap();
    let features = tiny_features(dir.path());
    let out = dir.path().join("r.csv");
    let o = run(&[
        "sweep",
        "--param",
        "Pc",
        "--values",
        "0.5,1.5",
        "--features",
        s(&features),
        "--out",
        s(&out),
    ]);
    assert_eq!(o.status.code(), Some(3));
    assert!(!out.exists());
    let o = run(&[
        "train",
        "--features",
        s(&features),
        "--rounds",
        "6",
        "--model-out",
        s(&out),
    ]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn config_file_supplies_flags_and_command_line_wins() {
    let dir = tempfile::tempdir().unwrap();
    let features = tiny_features(dir.path());
    let cfg = dir.path().join("run.cfg");
    let report = dir.path().join("mut.csv");
    std::fs::write(
        &cfg,
        format!(
            "# quick sweep\nfeatures = {}\nout = {}\nparam = Pm-high\npopulation = 16\nmax-cycles = 1\nmax-time = off\nhidden = 10\n",
            features.display(),
            report.display()
        ),
    )
    .unwrap();
    let o = run(&[
        "sweep",
        "--config",
        s(&cfg),
        "--hidden",
        "12",
        "--values",
        "0.3,0.1,0.3",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = std::fs::read_to_string(&report).unwrap();
    let rows = textile_inspect::experiments::parse_report(&text).unwrap();
    let pm: Vec<f64> = rows.iter().map(|r| r.mutation_rate).collect();
    assert_eq!(pm, vec![0.1, 0.3]);
    assert!(rows
        .iter()
        .all(|r| r.hidden == 12 && r.population_size == 16));
    assert!(rows.iter().all(|r| r.elapsed_seconds.is_none()));

    std::fs::write(&cfg, "seed 4\n").unwrap();
    let o = run(&["sweep", "--config", s(&cfg)]);
    assert_eq!(o.status.code(), Some(1));
    let o = run(&["sweep", "--config", "/nonexistent.cfg"]);
    assert_eq!(o.status.code(), Some(2));
}
