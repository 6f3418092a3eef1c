//! Flat `key = value` run configuration.
//!
//! ```text
//! # comments start with '#'
//! corpus_root = corpus
//! out_dir = out
//! k = 250
//! gap = 1
//! class.bbc = bbc/*.xml
//! class.guardian = guardian/*.xml
//! ```
//!
//! Relative paths, including the defaults `.` and `out`, are resolved against
//! the directory holding the file.
//! Classes keep the order in which they are listed.

use std::fmt;
use std::path::{Path, PathBuf};

use skipsig::{Gap, MiningParams};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

fn err(msg: impl Into<String>) -> ConfigError {
    ConfigError(msg.into())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassSpec {
    pub id: String,
    /// Glob relative to the corpus root.
    pub pattern: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub corpus_root: PathBuf,
    pub out_dir: PathBuf,
    pub params: MiningParams,
    pub quorum: f64,
    pub train_fraction: f64,
    pub seed: u64,
    /// 0 lets the thread pool pick.
    pub jobs: usize,
    pub classes: Vec<ClassSpec>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            corpus_root: PathBuf::from("."),
            out_dir: PathBuf::from("out"),
            params: MiningParams::default(),
            quorum: 1.0,
            train_fraction: 0.75,
            seed: 42,
            jobs: 0,
            classes: Vec::new(),
        }
    }
}

fn parse<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, ConfigError> {
    value.parse().map_err(|_| err(format!("invalid value for {key}: {value:?}")))
}

impl RunConfig {
    pub fn parse(text: &str, base: &Path) -> Result<Self, ConfigError> {
        let mut cfg = RunConfig::default();
        cfg.corpus_root = base.join(&cfg.corpus_root);
        cfg.out_dir = base.join(&cfg.out_dir);
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| err(format!("line {}: expected key = value", idx + 1)))?;
            let (key, value) = (key.trim(), value.trim());
            cfg.set(key, value, base)
                .map_err(|e| err(format!("line {}: {}", idx + 1, e.0)))?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| err(format!("cannot read {}: {e}", path.display())))?;
        let base = path.parent().unwrap_or(Path::new("."));
        Self::parse(&text, base)
    }

    fn set(&mut self, key: &str, value: &str, base: &Path) -> Result<(), ConfigError> {
        match key {
            "corpus_root" => self.corpus_root = base.join(value),
            "out_dir" => self.out_dir = base.join(value),
            "k" => self.params.k = parse(key, value)?,
            "minlen" => self.params.minlen = parse(key, value)?,
            "maxlen" => self.params.maxlen = parse(key, value)?,
            "gap" => self.params.gap = parse::<Gap>(key, value)?,
            "quorum" => self.quorum = parse(key, value)?,
            "train_fraction" => self.train_fraction = parse(key, value)?,
            "seed" => self.seed = parse(key, value)?,
            "jobs" => self.jobs = parse(key, value)?,
            _ => match key.strip_prefix("class.") {
                Some(id) if valid_class_id(id) => {
                    if self.classes.iter().any(|c| c.id == id) {
                        return Err(err(format!("class {id:?} listed twice")));
                    }
                    if value.is_empty() {
                        return Err(err(format!("class {id:?} has an empty glob")));
                    }
                    self.classes.push(ClassSpec { id: id.to_owned(), pattern: value.to_owned() });
                }
                Some(id) => return Err(err(format!("invalid class id {id:?}"))),
                None => return Err(err(format!("unknown key {key:?}"))),
            },
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        self.params.validate().map_err(|e| err(e.to_string()))?;
        if !(self.quorum > 0.0 && self.quorum <= 1.0) {
            return Err(err(format!("quorum must lie in (0, 1], got {}", self.quorum)));
        }
        if !(self.train_fraction > 0.0 && self.train_fraction < 1.0) {
            return Err(err(format!("train_fraction must lie in (0, 1), got {}", self.train_fraction)));
        }
        Ok(())
    }

    pub fn require_classes(&self, min: usize) -> Result<(), ConfigError> {
        if self.classes.len() < min {
            return Err(err(format!("at least {min} class.<id> entries are required, found {}", self.classes.len())));
        }
        Ok(())
    }

    /// `key = value` lines that reproduce this configuration.
    pub fn to_text(&self) -> String {
        let mut out = format!(
            "corpus_root = {}\nout_dir = {}\nk = {}\nminlen = {}\nmaxlen = {}\ngap = {}\nquorum = {}\ntrain_fraction = {}\nseed = {}\njobs = {}\n",
            self.corpus_root.display(),
            self.out_dir.display(),
            self.params.k,
            self.params.minlen,
            self.params.maxlen,
            self.params.gap,
            self.quorum,
            self.train_fraction,
            self.seed,
            self.jobs,
        );
        for c in &self.classes {
            out.push_str(&format!("class.{} = {}\n", c.id, c.pattern));
        }
        out
    }
}

fn valid_class_id(id: &str) -> bool {
    !id.is_empty() && id.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
}
