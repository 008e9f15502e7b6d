//! Run manifests appended to every CSV artifact.

use std::fmt::Write;

/// Command, resolved parameters, seed, library version and timestamp.
///
/// The timestamp comes from `SOURCE_DATE_EPOCH` so that re-running the same
/// command reproduces the artifact byte for byte; without it the field reads
/// `unset`.
#[derive(Debug, Clone)]
pub struct RunManifest {
    pub command: String,
    pub params: Vec<(String, String)>,
    pub seed: Option<u64>,
    pub notes: Vec<String>,
}

impl RunManifest {
    pub fn new(command: &str) -> Self {
        RunManifest {
            command: command.to_string(),
            params: Vec::new(),
            seed: None,
            notes: Vec::new(),
        }
    }

    pub fn param(mut self, key: &str, value: impl ToString) -> Self {
        self.params.push((key.to_string(), value.to_string()));
        self
    }

    pub fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        writeln!(out, "# command: {}", self.command).unwrap();
        for (k, v) in &self.params {
            writeln!(out, "# param: {k}={v}").unwrap();
        }
        match self.seed {
            Some(s) => writeln!(out, "# seed: {s}").unwrap(),
            None => writeln!(out, "# seed: none").unwrap(),
        }
        writeln!(out, "# version: grainlab {}", env!("CARGO_PKG_VERSION")).unwrap();
        let stamp = std::env::var("SOURCE_DATE_EPOCH").unwrap_or_else(|_| "unset".into());
        writeln!(out, "# timestamp: {stamp}").unwrap();
        for n in &self.notes {
            writeln!(out, "# note: {n}").unwrap();
        }
        out
    }
}

/// CSV body followed by its manifest block.
pub fn with_manifest(csv: &str, manifest: &RunManifest) -> String {
    let mut out = csv.to_string();
    if !out.ends_with('\n') {
        out.push('\n');
    }
    out.push_str(&manifest.render());
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn block_is_commented() {
        let mut m = RunManifest::new("fig3").param("J", 15);
        m.seed = Some(3);
        m.note("crossing p=0.56");
        let text = with_manifest("p,sir\n0,1", &m);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[..2], ["p,sir", "0,1"]);
        assert!(lines[2..].iter().all(|l| l.starts_with('#')));
        assert!(text.contains("# param: J=15\n# seed: 3\n"));
    }
}
