//! Structured pass/fail reports with deterministic text output.

use crate::keytree::Emitter;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: Option<String>,
}

impl Check {
    pub fn pass(name: &str) -> Check {
        Check { name: name.to_string(), passed: true, detail: None }
    }

    pub fn fail(name: &str, detail: impl Into<String>) -> Check {
        Check { name: name.to_string(), passed: false, detail: Some(detail.into()) }
    }

    /// Passes when `failure` is `None`.
    pub fn from_option(name: &str, failure: Option<String>) -> Check {
        match failure {
            None => Check::pass(name),
            Some(d) => Check::fail(name, d),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Report {
    pub title: String,
    pub checks: Vec<Check>,
    pub values: Vec<(String, String)>,
}

impl Report {
    pub fn new(title: &str) -> Report {
        Report { title: title.to_string(), ..Default::default() }
    }

    pub fn push(&mut self, c: Check) {
        self.checks.push(c);
    }

    pub fn value(&mut self, key: &str, v: impl Into<String>) {
        self.values.push((key.to_string(), v.into()));
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn first_failure(&self) -> Option<&Check> {
        self.checks.iter().find(|c| !c.passed)
    }

    pub fn extend(&mut self, prefix: &str, other: Report) {
        for mut c in other.checks {
            c.name = format!("{}: {}", prefix, c.name);
            self.checks.push(c);
        }
        for (k, v) in other.values {
            self.values.push((format!("{}.{}", prefix, k), v));
        }
    }

    /// Writes the report as a block of the key-tree format.
    pub fn emit_into(&self, em: &mut Emitter) {
        em.open(&self.title);
        em.entry("status", if self.passed() { "pass" } else { "fail" });
        if !self.values.is_empty() {
            em.open("values");
            for (k, v) in &self.values {
                em.entry_str(k, v);
            }
            em.close();
        }
        em.open("checks");
        for c in &self.checks {
            em.open_str(&c.name);
            em.entry("status", if c.passed { "pass" } else { "fail" });
            if let Some(d) = &c.detail {
                em.entry_str("detail", d);
            }
            em.close();
        }
        em.close();
        em.close();
    }

    pub fn to_text(&self) -> String {
        let mut em = Emitter::new();
        em.entry("format", "1");
        self.emit_into(&mut em);
        em.finish()
    }
}
