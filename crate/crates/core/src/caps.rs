//! Enumeration caps.
//!
//! Every exhaustive routine checks its size parameter against one of these
//! limits and fails with [`Error::CapExceeded`] instead of truncating.

use crate::error::{Error, Result};

/// Environment variable holding `key=value` cap overrides.
pub const CAPS_ENV: &str = "GRAINLAB_CAPS";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Caps {
    /// Largest `n` for listing error vectors (and anything built on them).
    pub error_vectors_n: usize,
    /// Largest `m` for inverse image sets and clique partitions.
    pub phi_inverse_m: usize,
    /// Largest `n` for building a confusability graph.
    pub graph_n: usize,
    /// Largest `n` for the exact independence-number search with `t <= 1`.
    pub mis_n: usize,
    /// Largest `n` for the exact search with `t >= 2`.
    pub mis_n_multi: usize,
    /// Largest `n` for the greedy known-grain construction.
    pub greedy_n: usize,
    /// Largest block length for the exact channel oracles over output words.
    pub channel_n: usize,
    /// Largest block length for the exact `H(z^n | x^n)` oracle.
    pub hzx_n: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            error_vectors_n: 24,
            phi_inverse_m: 16,
            graph_n: 16,
            mis_n: 10,
            mis_n_multi: 8,
            greedy_n: 20,
            channel_n: 20,
            hzx_n: 14,
        }
    }
}

impl Caps {
    /// Applies overrides of the form `key=value`, separated by commas,
    /// whitespace or newlines. Lines starting with `#` are ignored.
    pub fn apply_overrides(&mut self, text: &str) -> Result<()> {
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            for item in line.split(|c: char| c == ',' || c.is_whitespace()) {
                if item.is_empty() {
                    continue;
                }
                let (key, value) = item
                    .split_once('=')
                    .ok_or_else(|| Error::Parse(format!("expected key=value, got `{item}`")))?;
                let value: usize = value
                    .trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad value for `{key}`: `{value}`")))?;
                let slot = match key.trim() {
                    "error_vectors_n" => &mut self.error_vectors_n,
                    "phi_inverse_m" => &mut self.phi_inverse_m,
                    "graph_n" => &mut self.graph_n,
                    "mis_n" => &mut self.mis_n,
                    "mis_n_multi" => &mut self.mis_n_multi,
                    "greedy_n" => &mut self.greedy_n,
                    "channel_n" => &mut self.channel_n,
                    "hzx_n" => &mut self.hzx_n,
                    other => return Err(Error::Parse(format!("unknown cap `{other}`"))),
                };
                *slot = value;
            }
        }
        Ok(())
    }

    /// Defaults overridden by [`CAPS_ENV`] when it is set.
    pub fn from_env() -> Result<Self> {
        let mut caps = Caps::default();
        if let Ok(text) = std::env::var(CAPS_ENV) {
            caps.apply_overrides(&text)?;
        }
        Ok(caps)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overrides() {
        let mut caps = Caps::default();
        caps.apply_overrides("mis_n=12, graph_n=14\n# comment\nhzx_n=10").unwrap();
        assert_eq!(caps.mis_n, 12);
        assert_eq!(caps.graph_n, 14);
        assert_eq!(caps.hzx_n, 10);
        assert_eq!(caps.error_vectors_n, 24);
    }

    #[test]
    fn rejects_unknown_keys() {
        let mut caps = Caps::default();
        assert!(caps.apply_overrides("bogus=3").is_err());
        assert!(caps.apply_overrides("mis_n").is_err());
        assert!(caps.apply_overrides("mis_n=x").is_err());
    }
}
