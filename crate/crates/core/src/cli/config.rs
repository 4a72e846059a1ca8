//! Projection settings from built-in defaults, a `key=value` file and
//! command-line flags, in increasing order of precedence.

use std::path::Path;

use crate::candidates::CandidateSource;
use crate::error::{Error, Result};
use crate::io::read_text;
use crate::model::Rational;
use crate::projection::ProjectionConfig;

/// Raw setting values before parsing. Later layers override earlier ones.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Settings {
    pub method: Option<String>,
    pub candidates: Option<String>,
    pub solver: Option<String>,
    pub mode: Option<String>,
    pub threshold: Option<String>,
    pub max_ngram: Option<String>,
    pub min_similarity: Option<String>,
}

impl Settings {
    /// Recognized keys: `method`, `candidates`, `solver`, `mode`,
    /// `threshold`, `max_ngram`, `min_similarity`. `#` starts a comment.
    pub fn parse_file_text(text: &str) -> Result<Settings> {
        let mut s = Settings::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::Config(format!("config line {}: expected key=value", i + 1))
            })?;
            let value = Some(value.trim().to_owned());
            match key.trim() {
                "method" => s.method = value,
                "candidates" => s.candidates = value,
                "solver" => s.solver = value,
                "mode" => s.mode = value,
                "threshold" => s.threshold = value,
                "max_ngram" => s.max_ngram = value,
                "min_similarity" => s.min_similarity = value,
                other => {
                    return Err(Error::Config(format!(
                        "config line {}: unknown key {other:?}",
                        i + 1
                    )))
                }
            }
        }
        Ok(s)
    }

    pub fn load(path: &Path) -> Result<Settings> {
        let text = read_text(path).map_err(|e| Error::Config(format!("config file: {e}")))?;
        Self::parse_file_text(&text)
    }

    /// Fields set in `over` replace those in `self`.
    pub fn overlay(self, over: Settings) -> Settings {
        Settings {
            method: over.method.or(self.method),
            candidates: over.candidates.or(self.candidates),
            solver: over.solver.or(self.solver),
            mode: over.mode.or(self.mode),
            threshold: over.threshold.or(self.threshold),
            max_ngram: over.max_ngram.or(self.max_ngram),
            min_similarity: over.min_similarity.or(self.min_similarity),
        }
    }

    pub fn resolve(&self) -> Result<ProjectionConfig> {
        let mut cfg = ProjectionConfig::default();
        if let Some(v) = &self.method {
            cfg.method = v.parse()?;
        }
        if let Some(v) = &self.candidates {
            cfg.candidate_source = parse_candidate_source(v)?;
        }
        if let Some(v) = &self.solver {
            cfg.solver = v.parse()?;
        }
        if let Some(v) = &self.mode {
            cfg.mode = v.parse()?;
        }
        if let Some(v) = &self.threshold {
            cfg.ratio_threshold = parse_rational(v)?;
        }
        if let Some(v) = &self.max_ngram {
            cfg.max_ngram_len = parse_max_ngram(v)?;
        }
        if let Some(v) = &self.min_similarity {
            cfg.min_similarity = parse_rational(v)?;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

pub fn parse_candidate_source(s: &str) -> Result<CandidateSource> {
    match s {
        "ngram" => Ok(CandidateSource::Ngram),
        "ner" => Ok(CandidateSource::ExternalNer),
        _ => Err(Error::Config(format!(
            "unknown candidate source {s:?} (expected ngram|ner)"
        ))),
    }
}

/// A positive integer, or `all` for no cap.
pub fn parse_max_ngram(s: &str) -> Result<Option<usize>> {
    if s == "all" {
        return Ok(None);
    }
    match s.parse::<usize>() {
        Ok(0) => Err(Error::Config("--max-ngram must be at least 1".into())),
        Ok(n) => Ok(Some(n)),
        Err(_) => Err(Error::Config(format!(
            "invalid n-gram length {s:?} (expected a positive integer or `all`)"
        ))),
    }
}

/// Accepts `a/b`, decimals such as `0.8`, and integers; converted exactly.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::Config(format!("invalid rational {s:?}"));
    let digits = |t: &str| -> Result<u128> {
        if t.is_empty() || !t.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        t.parse().map_err(|_| bad())
    };
    if let Some((n, d)) = s.split_once('/') {
        let (n, d) = (digits(n.trim())?, digits(d.trim())?);
        if d == 0 {
            return Err(bad());
        }
        return Ok(Rational::new(n, d));
    }
    match s.split_once('.') {
        Some((int, frac)) => {
            let int = if int.is_empty() { 0 } else { digits(int)? };
            let scale = 10u128.checked_pow(frac.len() as u32).ok_or_else(bad)?;
            let frac = digits(frac)?;
            Ok(Rational::new(int * scale + frac, scale))
        }
        None => Ok(Rational::from_integer(digits(s)?)),
    }
}
