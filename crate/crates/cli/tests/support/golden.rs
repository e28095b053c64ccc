#![allow(dead_code)]
//! Golden-file cases: `NAME.args` holds one argument per line, `NAME.stdin`
//! (optional) is fed to standard input, `NAME.stdout` is the expected
//! output and `NAME.status` (optional, default 0) the exit status. Set
//! `BLESS=1` to rewrite the expected files from the current output.

use std::fs;
use std::path::{Path, PathBuf};

pub fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

pub struct Outcome {
    pub name: String,
    pub subcommand: String,
    pub result: Result<(), String>,
}

pub fn run_case(dir: &Path, name: &str) -> Outcome {
    let read = |ext: &str| fs::read_to_string(dir.join(format!("{name}.{ext}"))).ok();
    let args: Vec<String> = read("args")
        .expect("args file")
        .lines()
        .filter(|l| !l.is_empty())
        .map(|l| l.replace("{dir}", &dir.display().to_string()))
        .collect();
    let subcommand = args
        .iter()
        .find(|a| !a.starts_with('-') && *a != "json" && *a != "text")
        .cloned()
        .unwrap_or_default();
    let stdin = read("stdin").unwrap_or_default();
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("locweinstein".to_string()).chain(args);
    let status = locweinstein_cli::run(argv, &mut stdin.as_bytes(), &mut out, &mut err);
    let out = String::from_utf8(out).expect("utf-8 output");
    if std::env::var_os("BLESS").is_some() {
        fs::write(dir.join(format!("{name}.stdout")), &out).unwrap();
        if status != 0 {
            fs::write(dir.join(format!("{name}.status")), format!("{status}\n")).unwrap();
        }
    }
    let want_out = read("stdout").unwrap_or_default();
    let want_status: i32 = read("status")
        .map(|s| s.trim().parse().unwrap())
        .unwrap_or(0);
    let result = if out != want_out {
        Err(format!(
            "stdout differs\n--- expected\n{want_out}--- actual\n{out}"
        ))
    } else if status != want_status {
        Err(format!("status {status}, expected {want_status}"))
    } else {
        Ok(())
    };
    Outcome {
        name: name.to_string(),
        subcommand,
        result,
    }
}

pub fn run_all() -> Vec<Outcome> {
    // the format default must come from the arguments alone
    std::env::remove_var(locweinstein_cli::FORMAT_ENV);
    let dir = golden_dir();
    let mut names: Vec<String> = fs::read_dir(&dir)
        .expect("golden directory")
        .filter_map(|e| {
            let p = e.ok()?.path();
            (p.extension()? == "args").then(|| p.file_stem()?.to_str().map(str::to_string))?
        })
        .collect();
    names.sort();
    names.iter().map(|n| run_case(&dir, n)).collect()
}
