use std::fmt::Write as _;

use coarsekit::{Status, Verdict};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, clap::ValueEnum)]
pub enum OutputFormat {
    #[default]
    Text,
    Machine,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(name: impl Into<String>, columns: &[&str]) -> Self {
        Self {
            name: name.into(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn row(&mut self, cells: Vec<String>) {
        debug_assert_eq!(cells.len(), self.columns.len());
        self.rows.push(cells);
    }
}

/// A document emitted by a command, in one of the text formats.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Document {
    pub name: String,
    pub text: String,
}

/// Outcome of one invocation.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Report {
    /// Arguments after the program name, without `--jobs`.
    pub command: Vec<String>,
    pub verdict: Verdict,
    pub facts: Vec<(String, String)>,
    pub tables: Vec<Table>,
    pub documents: Vec<Document>,
    /// Input or usage error; forces exit code 2.
    pub error: Option<String>,
    /// Help or version text, printed as is.
    pub message: Option<String>,
    pub format: OutputFormat,
}

impl Report {
    pub fn fact(&mut self, key: impl Into<String>, value: impl ToString) {
        self.facts.push((key.into(), value.to_string()));
    }

    pub fn document(&mut self, name: impl Into<String>, text: String) {
        self.documents.push(Document {
            name: name.into(),
            text,
        });
    }

    /// 0 when every check passes, 1 on any failed or unknown check, 2 on
    /// input errors.
    pub fn exit_code(&self) -> i32 {
        if self.error.is_some() {
            2
        } else if self.message.is_some() || self.verdict.passed() {
            0
        } else {
            1
        }
    }

    fn status_word(&self) -> &'static str {
        match (&self.error, self.verdict.status()) {
            (Some(_), _) => "error",
            (None, Status::Pass) => "pass",
            (None, Status::Fail) => "fail",
            (None, Status::Unknown) => "unknown",
        }
    }

    pub fn render(&self) -> String {
        if let Some(m) = &self.message {
            return m.clone();
        }
        match self.format {
            OutputFormat::Text => self.render_text(),
            OutputFormat::Machine => self.render_machine(),
        }
    }

    fn render_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "coarsekit {}", self.command.join(" "));
        if let Some(e) = &self.error {
            let _ = writeln!(out, "error: {e}");
        }
        for (k, v) in &self.facts {
            let _ = writeln!(out, "{k}: {v}");
        }
        for c in &self.verdict.checks {
            let _ = writeln!(out, "[{}] {}: {}", c.status, c.path, c.detail);
        }
        for t in &self.tables {
            let _ = writeln!(out, "{}:", t.name);
            let widths: Vec<usize> = (0..t.columns.len())
                .map(|i| {
                    t.rows
                        .iter()
                        .map(|r| r[i].chars().count())
                        .chain([t.columns[i].chars().count()])
                        .max()
                        .unwrap_or(0)
                })
                .collect();
            for row in std::iter::once(&t.columns).chain(&t.rows) {
                let cells: Vec<String> = row
                    .iter()
                    .zip(&widths)
                    .map(|(c, &w)| format!("{c:<w$}"))
                    .collect();
                let _ = writeln!(out, "  {}", cells.join("  ").trim_end());
            }
        }
        for d in &self.documents {
            let _ = writeln!(out, "--- {}", d.name);
            out.push_str(&d.text);
        }
        let _ = writeln!(
            out,
            "result: {} (exit {})",
            self.status_word(),
            self.exit_code()
        );
        out
    }

    fn render_machine(&self) -> String {
        let mut out = String::new();
        let mut kv = |k: &str, v: &str| {
            let _ = writeln!(out, "{k}={}", escape(v));
        };
        kv("command", &self.command.join(" "));
        if let Some(e) = &self.error {
            kv("error", e);
        }
        for (k, v) in &self.facts {
            kv(&format!("fact.{k}"), v);
        }
        for (i, c) in self.verdict.checks.iter().enumerate() {
            kv(&format!("check.{i}.path"), &c.path);
            kv(&format!("check.{i}.status"), &c.status.to_string());
            kv(&format!("check.{i}.detail"), &c.detail);
        }
        for t in &self.tables {
            kv(&format!("table.{}.columns", t.name), &t.columns.join(" "));
            for (i, row) in t.rows.iter().enumerate() {
                for (col, cell) in t.columns.iter().zip(row) {
                    kv(&format!("table.{}.{i}.{col}", t.name), cell);
                }
            }
        }
        for d in &self.documents {
            for (i, line) in d.text.lines().enumerate() {
                kv(&format!("document.{}.{i}", d.name), line);
            }
        }
        kv("status", self.status_word());
        kv("exit", &self.exit_code().to_string());
        out
    }
}

fn escape(v: &str) -> String {
    v.replace('\\', "\\\\").replace('\n', "\\n")
}
