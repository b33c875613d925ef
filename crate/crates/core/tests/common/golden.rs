//! Runs the binary on each scenario file and renders a transcript.

use std::path::{Path, PathBuf};
use std::process::Command;

pub fn scenario_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenarios")
}

pub fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

pub fn scenarios() -> Vec<PathBuf> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(scenario_dir())
        .expect("scenario directory")
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();
    files
}

fn command_of(path: &Path) -> &'static str {
    let stem = path.file_stem().unwrap().to_str().unwrap();
    ["count", "basis", "analyze", "hom", "density"]
        .into_iter()
        .find(|c| stem.starts_with(&format!("{c}_")))
        .unwrap_or_else(|| panic!("scenario {stem} has no command prefix"))
}

/// Exit code, stdout and (for `density`) the written grid.
pub fn transcript(path: &Path) -> String {
    let dir = tempfile::tempdir().unwrap();
    let grid = dir.path().join("grid.csv");
    let command = command_of(path);
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_qparticles"));
    cmd.arg(command).arg("--config").arg(path);
    if command == "density" {
        cmd.arg("--output").arg(&grid);
    }
    let out = cmd.output().unwrap();
    let mut text = format!("exit: {}\n", out.status.code().unwrap_or(-1));
    text.push_str(&String::from_utf8(out.stdout).unwrap());
    if let Ok(csv) = std::fs::read_to_string(&grid) {
        text.push_str("--- grid\n");
        text.push_str(&csv);
    }
    text
}

pub fn golden_path(scenario: &Path) -> PathBuf {
    let stem = scenario.file_stem().unwrap().to_str().unwrap();
    golden_dir().join(format!("{stem}.txt"))
}

/// Failure messages for scenarios that are nondeterministic or differ
/// from their golden file. `UPDATE_GOLDEN=1` rewrites the golden files.
pub fn check_all() -> Vec<String> {
    let bless = std::env::var_os("UPDATE_GOLDEN").is_some();
    let mut failures = Vec::new();
    for path in scenarios() {
        let name = path.file_name().unwrap().to_string_lossy().into_owned();
        let first = transcript(&path);
        let second = transcript(&path);
        if first != second {
            failures.push(format!("{name}: output differs between runs"));
            continue;
        }
        let golden = golden_path(&path);
        if bless {
            std::fs::write(&golden, &first).unwrap();
            continue;
        }
        match std::fs::read_to_string(&golden) {
            Ok(expected) if expected == first => {}
            Ok(_) => failures.push(format!("{name}: differs from {}", golden.display())),
            Err(_) => failures.push(format!("{name}: missing {}", golden.display())),
        }
    }
    failures
}
