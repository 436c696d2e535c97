use std::fmt;

use serde::Serialize;

/// Outcome of one named check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckItem {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

/// A list of named pass/fail checks; checks at finite order hold mod `q^order`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub order: Option<usize>,
    pub items: Vec<CheckItem>,
}

impl CheckReport {
    pub fn new(order: Option<usize>) -> Self {
        CheckReport { order, items: Vec::new() }
    }

    pub fn push(&mut self, name: &str, outcome: Result<(), String>) {
        let (passed, detail) = match outcome {
            Ok(()) => (true, String::new()),
            Err(d) => (false, d),
        };
        self.items.push(CheckItem { name: name.to_string(), passed, detail });
    }

    pub fn pass(&mut self, name: &str, detail: &str) {
        self.items.push(CheckItem { name: name.to_string(), passed: true, detail: detail.to_string() });
    }

    pub fn extend(&mut self, prefix: &str, other: CheckReport) {
        for mut item in other.items {
            item.name = format!("{prefix}{}", item.name);
            self.items.push(item);
        }
    }

    pub fn all_passed(&self) -> bool {
        self.items.iter().all(|i| i.passed)
    }

    pub fn get(&self, name: &str) -> Option<&CheckItem> {
        self.items.iter().find(|i| i.name == name)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckItem> {
        self.items.iter().filter(|i| !i.passed)
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for item in &self.items {
            let status = if item.passed { "ok" } else { "FAIL" };
            write!(f, "{status:4} {}", item.name)?;
            if !item.detail.is_empty() {
                write!(f, ": {}", item.detail)?;
            }
            writeln!(f)?;
        }
        if let Some(n) = self.order {
            writeln!(f, "verified mod q^{n}")?;
        }
        Ok(())
    }
}
