//! Pass/fail/unknown verdicts with witnesses, shared by all certificate checks.

use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Status {
    Pass,
    Fail,
    Unknown,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Unknown => "unknown",
        })
    }
}

/// One checked item. `path` locates it (e.g. `entry[2]/member[a]/dimension`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub path: String,
    pub status: Status,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Verdict {
    pub checks: Vec<Check>,
}

impl Verdict {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, path: impl Into<String>, status: Status, detail: impl Into<String>) {
        self.checks.push(Check {
            path: path.into(),
            status,
            detail: detail.into(),
        });
    }

    pub fn pass(&mut self, path: impl Into<String>, detail: impl Into<String>) {
        self.push(path, Status::Pass, detail);
    }

    pub fn fail(&mut self, path: impl Into<String>, detail: impl Into<String>) {
        self.push(path, Status::Fail, detail);
    }

    /// Records `pass` or `fail` depending on `ok`.
    pub fn check(&mut self, path: impl Into<String>, ok: bool, detail: impl Into<String>) {
        let status = if ok { Status::Pass } else { Status::Fail };
        self.push(path, status, detail);
    }

    /// Appends the checks of `other` with `prefix/` prepended to their paths.
    pub fn extend_prefixed(&mut self, prefix: &str, other: Verdict) {
        for c in other.checks {
            self.checks.push(Check {
                path: format!("{prefix}/{}", c.path),
                ..c
            });
        }
    }

    /// Overall status: fail if anything failed, else unknown if anything is
    /// unknown, else pass. An empty verdict passes.
    pub fn status(&self) -> Status {
        self.checks
            .iter()
            .map(|c| c.status)
            .fold(Status::Pass, |acc, s| match (acc, s) {
                (Status::Fail, _) | (_, Status::Fail) => Status::Fail,
                (Status::Unknown, _) | (_, Status::Unknown) => Status::Unknown,
                _ => Status::Pass,
            })
    }

    pub fn passed(&self) -> bool {
        self.status() == Status::Pass
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.status == Status::Fail)
    }
}
