//! Run configuration: defaults, then the config file, then flags.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, ValueEnum};
use morava_core::{Error, PrecisionCtx, Result};
use serde_json::{json, Value};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
    Csv,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        <Format as ValueEnum>::from_str(s, true).map_err(|_| Error::InvalidInput(format!("unknown format {s:?}")))
    }
}

#[derive(Args, Debug, Default)]
pub struct Globals {
    /// Prime p.
    #[arg(long, global = true)]
    pub p: Option<u64>,
    /// Height n.
    #[arg(long, global = true)]
    pub n: Option<usize>,
    /// Field size q.
    #[arg(long, global = true)]
    pub q: Option<u64>,
    /// p-adic precision (digits).
    #[arg(long, global = true)]
    pub nprec: Option<u32>,
    /// Truncation in the u-variables (total degree < Du).
    #[arg(long, global = true)]
    pub du: Option<usize>,
    /// Truncation in x (degree < Dx).
    #[arg(long, global = true)]
    pub dx: Option<usize>,
    /// key=value file supplying defaults for the options above.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Seed for sampled checks.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub p: u64,
    pub n: usize,
    pub q: u64,
    pub nprec: u32,
    pub du: usize,
    pub dx: usize,
    pub format: Format,
    pub output: Option<PathBuf>,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig { p: 3, n: 1, q: 4, nprec: 3, du: 2, dx: 20, format: Format::Table, output: None, seed: 0 }
    }
}

/// `key = value` lines; `#` starts a comment.
pub fn parse_config(text: &str) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) =
            line.split_once('=').ok_or_else(|| Error::InvalidInput(format!("config line {}: expected key=value", i + 1)))?;
        out.insert(k.trim().to_lowercase(), v.trim().trim_matches('"').to_string());
    }
    Ok(out)
}

fn parse<T: FromStr>(key: &str, v: &str) -> Result<T> {
    v.parse().map_err(|_| Error::InvalidInput(format!("config key {key}: cannot parse {v:?}")))
}

impl RunConfig {
    pub fn apply_file(&mut self, map: &BTreeMap<String, String>) -> Result<()> {
        for (k, v) in map {
            match k.as_str() {
                "p" => self.p = parse(k, v)?,
                "n" => self.n = parse(k, v)?,
                "q" => self.q = parse(k, v)?,
                "nprec" => self.nprec = parse(k, v)?,
                "du" => self.du = parse(k, v)?,
                "dx" => self.dx = parse(k, v)?,
                "format" => self.format = parse(k, v)?,
                "output" => self.output = Some(PathBuf::from(v)),
                "seed" => self.seed = parse(k, v)?,
                _ => return Err(Error::InvalidInput(format!("unknown config key {k:?}"))),
            }
        }
        Ok(())
    }

    pub fn resolve(g: &Globals) -> Result<Self> {
        let mut c = RunConfig::default();
        if let Some(path) = &g.config {
            c.apply_file(&parse_config(&read(path)?)?)?;
        }
        if let Some(x) = g.p {
            c.p = x;
        }
        if let Some(x) = g.n {
            c.n = x;
        }
        if let Some(x) = g.q {
            c.q = x;
        }
        if let Some(x) = g.nprec {
            c.nprec = x;
        }
        if let Some(x) = g.du {
            c.du = x;
        }
        if let Some(x) = g.dx {
            c.dx = x;
        }
        if let Some(x) = g.format {
            c.format = x;
        }
        if let Some(x) = &g.output {
            c.output = Some(x.clone());
        }
        if let Some(x) = g.seed {
            c.seed = x;
        }
        Ok(c)
    }

    pub fn ctx(&self) -> Result<PrecisionCtx> {
        PrecisionCtx::new(self.p, self.nprec, self.n, self.du, self.dx)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "p": self.p,
            "n": self.n,
            "q": self.q,
            "nprec": self.nprec,
            "du": self.du,
            "dx": self.dx,
            "seed": self.seed,
        })
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::InvalidInput(format!("cannot read {}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_file() {
        let mut c = RunConfig::default();
        c.apply_file(&parse_config("p = 5  # prime\n\nq=11\nformat=json\n").unwrap()).unwrap();
        assert_eq!((c.p, c.q, c.format), (5, 11, Format::Json));
        assert!(parse_config("oops").is_err());
        assert!(RunConfig::default().apply_file(&parse_config("colour=red").unwrap()).is_err());
    }
}
