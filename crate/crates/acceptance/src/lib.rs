//! Helpers shared by the acceptance tests: config construction, running a
//! recipe into a scratch directory, and the one-line verdict printer.

use std::io::Write;
use std::path::{Path, PathBuf};

use akin::experiments::{run_experiment, ExperimentConfig, ExperimentKind, Report};
use akin::Result;

/// The checked-in Figure-1 profile.
pub fn figure1() -> ExperimentConfig {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/configs/figure1.json");
    ExperimentConfig::load(&path).expect("figure1.json parses")
}

pub fn with_experiment(mut cfg: ExperimentConfig, kind: ExperimentKind, n_paths: u64) -> ExperimentConfig {
    cfg.experiment = kind;
    cfg.n_paths = n_paths;
    cfg
}

/// Runs `cfg` into a fresh temporary directory, kept alive by the returned
/// handle.
pub fn run_in_tempdir(mut cfg: ExperimentConfig) -> Result<(Report, tempfile::TempDir)> {
    let dir = tempfile::tempdir().expect("temp dir");
    cfg.output_dir = dir.path().to_path_buf();
    let outcome = run_experiment(&cfg)?;
    Ok((outcome.report, dir))
}

/// Files under `dir`, sorted by name, with their bytes.
pub fn snapshot(dir: &Path) -> Vec<(PathBuf, Vec<u8>)> {
    let mut files: Vec<(PathBuf, Vec<u8>)> = std::fs::read_dir(dir)
        .expect("readable dir")
        .map(|e| {
            let p = e.expect("dir entry").path();
            let bytes = std::fs::read(&p).expect("readable file");
            (PathBuf::from(p.file_name().expect("file name")), bytes)
        })
        .collect();
    files.sort();
    files
}

/// Prints the verdict line for one criterion. The line goes to the process's
/// real stdout rather than the test harness capture, so it shows in the log
/// whether or not the test passes.
pub fn verdict(id: u32, title: &str, pass: bool, detail: impl AsRef<str>) {
    let tag = if pass { "PASS" } else { "FAIL" };
    let line = format!("criterion {id:>2} {tag} {title}: {}\n", detail.as_ref());
    match std::fs::OpenOptions::new().append(true).open("/dev/stdout") {
        Ok(mut out) => {
            let _ = out.write_all(line.as_bytes());
        }
        Err(_) => print!("{line}"),
    }
}
