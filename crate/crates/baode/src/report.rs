//! Named pass/fail check lists attached to construction certificates.

use std::fmt;

#[derive(Debug, Clone)]
pub struct CheckEntry {
    pub name: String,
    pub pass: bool,
    pub witness: Option<String>,
}

#[derive(Debug, Clone, Default)]
pub struct Report {
    pub entries: Vec<CheckEntry>,
}

impl Report {
    pub fn push(&mut self, name: &str, pass: bool, witness: Option<String>) {
        self.entries.push(CheckEntry {
            name: name.to_string(),
            pass,
            witness,
        });
    }

    pub fn passed(&self) -> bool {
        self.entries.iter().all(|e| e.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckEntry> {
        self.entries.iter().filter(|e| !e.pass)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.entries {
            let tag = if e.pass { "pass" } else { "FAIL" };
            match &e.witness {
                Some(w) => writeln!(f, "{tag} {} ({w})", e.name)?,
                None => writeln!(f, "{tag} {}", e.name)?,
            }
        }
        Ok(())
    }
}
