//! key=value config files and option merging (flags > config > defaults).

use anyhow::Context;
use wqed::WaitingTime;

#[derive(Debug, Default)]
pub struct ConfigMap {
    entries: Vec<(String, String)>,
}

impl ConfigMap {
    pub fn get_str(&self, key: &str) -> Option<String> {
        self.entries
            .iter()
            .rev()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.clone())
    }

    pub fn get_f64(&self, key: &str) -> anyhow::Result<Option<f64>> {
        match self.get_str(key) {
            None => Ok(None),
            Some(v) => {
                Ok(Some(v.parse::<f64>().with_context(|| {
                    format!("config key {key}: bad number {v:?}")
                })?))
            }
        }
    }

    pub fn get_usize(&self, key: &str) -> anyhow::Result<Option<usize>> {
        match self.get_str(key) {
            None => Ok(None),
            Some(v) => {
                Ok(Some(v.parse::<usize>().with_context(|| {
                    format!("config key {key}: bad count {v:?}")
                })?))
            }
        }
    }
}

/// Parse `key = value` lines; `#` starts a comment.
pub fn apply_config(path: &str) -> anyhow::Result<ConfigMap> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading config {path:?}"))?;
    let mut entries = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .with_context(|| format!("{path}:{}: expected key=value", lineno + 1))?;
        entries.push((k.trim().to_string(), v.trim().to_string()));
    }
    Ok(ConfigMap { entries })
}

pub fn merge<T>(flag: Option<T>, config: Option<T>, default: T) -> T {
    flag.or(config).unwrap_or(default)
}

pub fn parse_waiting(s: &str) -> anyhow::Result<WaitingTime> {
    if s.eq_ignore_ascii_case("inf") || s.eq_ignore_ascii_case("infinity") {
        return Ok(WaitingTime::Infinite);
    }
    let t: f64 = s
        .parse()
        .with_context(|| format!("waiting time must be a number or 'inf', got {s:?}"))?;
    if t < 0.0 {
        anyhow::bail!("waiting time must be >= 0, got {t}");
    }
    Ok(WaitingTime::Finite(t))
}
