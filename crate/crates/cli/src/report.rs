//! Check records for the verify subcommands: one JSON line per check,
//! canonical ordering, plus a one-line human summary.

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub suite: String,
    pub check: String,
    pub status: Status,
    pub inputs: String,
    #[serde(default, skip_serializing_if = "Map::is_empty")]
    pub outputs: Map<String, Value>,
    pub elapsed_ms: u64,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Report {
    pub records: Vec<CheckRecord>,
}

impl Report {
    pub fn new() -> Self {
        Report::default()
    }

    pub fn add(
        &mut self,
        suite: &str,
        check: &str,
        pass: bool,
        inputs: String,
        outputs: Map<String, Value>,
        elapsed_ms: u64,
    ) {
        self.records.push(CheckRecord {
            suite: suite.to_string(),
            check: check.to_string(),
            status: if pass { Status::Pass } else { Status::Fail },
            inputs,
            outputs,
            elapsed_ms,
        });
    }

    pub fn canonicalize(&mut self) {
        self.records.sort_by(|a, b| (&a.suite, &a.check).cmp(&(&b.suite, &b.check)));
    }

    pub fn all_pass(&self) -> bool {
        self.records.iter().all(|r| r.status == Status::Pass)
    }

    pub fn to_json_lines(&self) -> String {
        self.records
            .iter()
            .map(|r| serde_json::to_string(r).expect("record serializes"))
            .collect::<Vec<_>>()
            .join("\n")
    }

    pub fn from_json_lines(text: &str) -> serde_json::Result<Report> {
        let records = text
            .lines()
            .filter(|l| !l.trim().is_empty())
            .map(serde_json::from_str)
            .collect::<serde_json::Result<Vec<CheckRecord>>>()?;
        Ok(Report { records })
    }

    pub fn summary(&self) -> String {
        let failed = self.records.iter().filter(|r| r.status == Status::Fail).count();
        let total = self.records.len();
        if failed == 0 {
            format!("{total} check(s), all passed")
        } else {
            format!("{total} check(s), {failed} FAILED")
        }
    }

    /// Prints the report and returns the process exit code.
    pub fn emit(&mut self, json: bool) -> i32 {
        self.canonicalize();
        if json {
            let text = self.to_json_lines();
            let reparsed = Report::from_json_lines(&text).expect("report reparses");
            assert!(reparsed.records == self.records, "report round-trip drifted");
            println!("{text}");
            eprintln!("{}", self.summary());
        } else {
            for r in &self.records {
                let mark = match r.status {
                    Status::Pass => "pass",
                    Status::Fail => "FAIL",
                };
                let extras = if r.outputs.is_empty() {
                    String::new()
                } else {
                    format!(
                        "  {}",
                        serde_json::to_string(&r.outputs).expect("outputs serialize")
                    )
                };
                println!("[{mark}] {} :: {} ({}){extras}", r.suite, r.check, r.inputs);
            }
            println!("{}", self.summary());
        }
        if self.all_pass() {
            0
        } else {
            1
        }
    }
}
