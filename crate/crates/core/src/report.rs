//! Verification reports: a flat list of named checks with PASS/FAIL/SKIP
//! status, deterministic JSON rendering (sorted keys, no timestamps), and a
//! plain-text view. Identical inputs must produce byte-identical JSON, so the
//! config is a sorted map and nothing time- or machine-dependent is recorded.

use std::collections::BTreeMap;

use serde::Serialize;

// ---- Status ----

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Status {
    #[serde(rename = "PASS")]
    Pass,
    #[serde(rename = "FAIL")]
    Fail,
    #[serde(rename = "SKIP")]
    Skip,
}

// ---- Checks ----

/// One verified identity: what was checked, how it went, and on failure a
/// witness (first failing index, residual, …).
#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub detail: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

// ---- Report ----

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub title: String,
    pub version: String,
    pub config: BTreeMap<String, String>,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new(title: impl Into<String>) -> Self {
        Report {
            title: title.into(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            config: BTreeMap::new(),
            checks: Vec::new(),
        }
    }

    pub fn set_config(&mut self, key: impl Into<String>, value: impl Into<String>) {
        self.config.insert(key.into(), value.into());
    }

    /// Record a pass/fail check with no witness.
    pub fn check(&mut self, name: impl Into<String>, ok: bool, detail: impl Into<String>) {
        self.checks.push(Check {
            name: name.into(),
            status: if ok { Status::Pass } else { Status::Fail },
            detail: detail.into(),
            witness: None,
        });
    }

    /// Record a check whose failure carries a witness.
    pub fn check_witnessed(
        &mut self,
        name: impl Into<String>,
        ok: bool,
        detail: impl Into<String>,
        witness: Option<String>,
    ) {
        self.checks.push(Check {
            name: name.into(),
            status: if ok { Status::Pass } else { Status::Fail },
            detail: detail.into(),
            witness: if ok { None } else { witness },
        });
    }

    pub fn skip(&mut self, name: impl Into<String>, detail: impl Into<String>) {
        self.checks.push(Check {
            name: name.into(),
            status: Status::Skip,
            detail: detail.into(),
            witness: None,
        });
    }

    /// Append another report's checks, prefixing their names.
    pub fn absorb(&mut self, prefix: &str, other: Report) {
        for mut c in other.checks {
            c.name = format!("{prefix}.{}", c.name);
            self.checks.push(c);
        }
    }

    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }

    /// Canonical JSON: keys sorted at every level, trailing newline, no
    /// timestamps — identical reports are byte-identical.
    pub fn to_json(&self) -> String {
        let value = serde_json::to_value(self).expect("report serializes");
        let mut s = serde_json::to_string_pretty(&value).expect("value renders");
        s.push('\n');
        s
    }

    /// Human-readable rendering of the same data.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("# {} (v{})\n", self.title, self.version));
        for (k, v) in &self.config {
            out.push_str(&format!("  config {k} = {v}\n"));
        }
        for c in &self.checks {
            let status = match c.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
                Status::Skip => "SKIP",
            };
            out.push_str(&format!("[{status}] {}: {}\n", c.name, c.detail));
            if let Some(w) = &c.witness {
                out.push_str(&format!("       witness: {w}\n"));
            }
        }
        let verdict = if self.pass() { "PASS" } else { "FAIL" };
        out.push_str(&format!(
            "{verdict}: {}/{} checks passed\n",
            self.checks
                .iter()
                .filter(|c| c.status == Status::Pass)
                .count(),
            self.checks.len()
        ));
        out
    }
}
