//! Parameter parsing shared by the subcommands: ranges, grids, initial
//! states and the optional `key=value` config file.

use std::collections::BTreeMap;
use std::ops::RangeInclusive;
use std::path::Path;

use grainlab::channel::InitialState;
use grainlab::table::grid;
use grainlab::Caps;

use crate::CliError;

/// `a` or `a:b`.
pub fn parse_range(text: &str) -> Result<RangeInclusive<usize>, CliError> {
    let bad = || CliError::Usage(format!("bad integer range `{text}` (expected `a` or `a:b`)"));
    let (lo, hi) = match text.split_once(':') {
        Some((a, b)) => (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?),
        None => {
            let v = text.trim().parse().map_err(|_| bad())?;
            (v, v)
        }
    };
    if lo > hi {
        return Err(bad());
    }
    Ok(lo..=hi)
}

/// `start:stop:step`, or a single value.
pub fn parse_grid(text: &str) -> Result<Vec<f64>, CliError> {
    let bad = || CliError::Usage(format!("bad grid `{text}` (expected `start:stop:step`)"));
    let parts: Vec<f64> = text
        .split(':')
        .map(|s| s.trim().parse::<f64>().map_err(|_| bad()))
        .collect::<Result<_, _>>()?;
    match parts[..] {
        [v] => Ok(vec![v]),
        [a, b, step] if step > 0.0 && a <= b => Ok(grid(a, b, step)),
        _ => Err(bad()),
    }
}

/// `stationary`, or `u0,x0` with bits.
pub fn parse_initial(text: &str) -> Result<InitialState, CliError> {
    if text == "stationary" {
        return Ok(InitialState::Stationary);
    }
    let bad = || CliError::Usage(format!("bad initial state `{text}` (expected `stationary` or `u0,x0`)"));
    let (u, x) = text.split_once(',').ok_or_else(bad)?;
    let u0: u8 = u.trim().parse().map_err(|_| bad())?;
    let x0: u8 = x.trim().parse().map_err(|_| bad())?;
    if u0 > 1 || x0 > 1 {
        return Err(bad());
    }
    Ok(InitialState::Fixed { u0, x0 })
}

/// Settings resolved from the environment and an optional config file.
/// Command-line flags take precedence over both.
#[derive(Debug, Clone, Default)]
pub struct Settings {
    pub caps: Caps,
    /// Non-cap keys from the config file (`J`, `seed`, `timeout`, ...).
    pub defaults: BTreeMap<String, String>,
}

const CAP_KEYS: &[&str] = &[
    "error_vectors_n",
    "phi_inverse_m",
    "graph_n",
    "mis_n",
    "mis_n_multi",
    "greedy_n",
    "channel_n",
    "hzx_n",
];

impl Settings {
    pub fn load(config: Option<&Path>, caps_flag: Option<&str>) -> Result<Self, CliError> {
        let mut settings = Settings {
            caps: Caps::from_env()?,
            defaults: BTreeMap::new(),
        };
        if let Some(path) = config {
            let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
            for line in text.lines().map(str::trim) {
                if line.is_empty() || line.starts_with('#') {
                    continue;
                }
                let (key, value) = line
                    .split_once('=')
                    .ok_or_else(|| CliError::Usage(format!("config line `{line}` is not key=value")))?;
                let (key, value) = (key.trim(), value.trim());
                if CAP_KEYS.contains(&key) {
                    settings.caps.apply_overrides(&format!("{key}={value}"))?;
                } else {
                    settings.defaults.insert(key.to_string(), value.to_string());
                }
            }
        }
        if let Some(text) = caps_flag {
            settings.caps.apply_overrides(text)?;
        }
        Ok(settings)
    }

    /// `flag`, else the config value for `key`, else `fallback`.
    pub fn resolve<T: std::str::FromStr>(&self, flag: Option<T>, key: &str, fallback: T) -> Result<T, CliError> {
        if let Some(v) = flag {
            return Ok(v);
        }
        match self.defaults.get(key) {
            Some(text) => text
                .parse()
                .map_err(|_| CliError::Usage(format!("config value for `{key}` is malformed: `{text}`"))),
            None => Ok(fallback),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges_and_grids() {
        assert_eq!(parse_range("2:8").unwrap(), 2..=8);
        assert_eq!(parse_range("5").unwrap(), 5..=5);
        assert!(parse_range("8:2").is_err());
        assert_eq!(parse_grid("0:1:0.25").unwrap(), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
        assert_eq!(parse_grid("0.3").unwrap(), vec![0.3]);
        assert!(parse_grid("0:1").is_err());
        assert!(parse_grid("0:1:0").is_err());
    }

    #[test]
    fn initial_states() {
        assert_eq!(parse_initial("stationary").unwrap(), InitialState::Stationary);
        assert_eq!(parse_initial("1,0").unwrap(), InitialState::Fixed { u0: 1, x0: 0 });
        assert!(parse_initial("2,0").is_err());
    }

    #[test]
    fn flags_beat_config() {
        let mut s = Settings::default();
        s.defaults.insert("J".into(), "15".into());
        assert_eq!(s.resolve(None, "J", 64usize).unwrap(), 15);
        assert_eq!(s.resolve(Some(20), "J", 64usize).unwrap(), 20);
        assert_eq!(s.resolve(None, "seed", 7u64).unwrap(), 7);
    }
}
