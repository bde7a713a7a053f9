#![allow(dead_code)]

use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use covtime_core::report::Record;

pub struct Run {
    pub code: i32,
    pub records: Vec<Record>,
    pub stdout: String,
    pub stderr: String,
    pub elapsed: Duration,
}

impl Run {
    /// First record of `kind` whose `key` equals `value`.
    pub fn find(&self, kind: &str, key: &str, value: &str) -> Option<&Record> {
        self.records
            .iter()
            .find(|r| r.get("record") == Some(kind) && r.get(key) == Some(value))
    }

    pub fn of_kind<'a>(&'a self, kind: &'a str) -> impl Iterator<Item = &'a Record> + 'a {
        self.records.iter().filter(move |r| r.get("record") == Some(kind))
    }

    pub fn check(&self, name: &str) -> &Record {
        self.find("check", "name", name)
            .unwrap_or_else(|| panic!("no check {name} in\n{}", self.stdout))
    }
}

pub fn real(r: &Record, key: &str) -> f64 {
    r.get(key)
        .and_then(|v| v.parse().ok())
        .unwrap_or_else(|| panic!("no numeric {key} in {r}"))
}

pub fn covtime(args: &[&str]) -> Run {
    covtime_in(Path::new("."), args)
}

pub fn covtime_in(dir: &Path, args: &[&str]) -> Run {
    let start = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_covtime"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("covtime runs");
    let elapsed = start.elapsed();
    let stdout = String::from_utf8_lossy(&out.stdout).into_owned();
    Run {
        code: out.status.code().unwrap_or(-1),
        records: stdout.lines().filter_map(Record::parse).collect(),
        stdout,
        stderr: String::from_utf8_lossy(&out.stderr).into_owned(),
        elapsed,
    }
}
