//! Flag values, falling back to a JSON config file and then to built-in defaults.

use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use argqubo::{AnnealParams, ArgumentationFramework, Format};
use clap::Args;
use serde::Deserialize;

/// Keys accepted in `--config` files. Unknown keys are rejected.
#[derive(Debug, Default, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub reads: Option<usize>,
    pub sweeps: Option<usize>,
    pub seed: Option<u64>,
    pub timeout: Option<f64>,
    pub restarts: Option<usize>,
    pub beta_hot: Option<f64>,
    pub beta_cold: Option<f64>,
    pub parallel: Option<bool>,
    pub lambda: Option<i64>,
    pub format: Option<String>,
    pub check: Option<bool>,
    pub jobs: Option<usize>,
}

impl FileConfig {
    pub fn load(path: Option<&Path>) -> Result<Self> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("parsing config {}", path.display()))
    }
}

#[derive(Debug, Clone, Args)]
pub struct InputArgs {
    /// Framework file (apx or ICCMA numeric format)
    pub input: Option<PathBuf>,
    /// Input format; guessed from the first line when absent
    #[arg(long)]
    pub format: Option<Format>,
    /// JSON file supplying values for flags that are not given
    #[arg(long)]
    pub config: Option<PathBuf>,
}

impl InputArgs {
    pub fn format(&self, cfg: &FileConfig) -> Result<Option<Format>> {
        match (&self.format, &cfg.format) {
            (Some(f), _) => Ok(Some(*f)),
            (None, Some(s)) => Ok(Some(s.parse().map_err(anyhow::Error::msg)?)),
            (None, None) => Ok(None),
        }
    }

    pub fn required_input(&self) -> Result<&Path> {
        self.input.as_deref().context("missing input framework file")
    }
}

/// Reads a framework, returning it with the format it was read in.
pub fn read_framework(path: &Path, format: Option<Format>) -> Result<(ArgumentationFramework, Format)> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let format = format.unwrap_or_else(|| Format::detect(&text));
    let af = argqubo::af::parse(&text, format).with_context(|| format!("parsing {}", path.display()))?;
    Ok((af, format))
}

#[derive(Debug, Clone, Default, Args)]
pub struct AnnealArgs {
    /// Reads per restart [default: 2n]
    #[arg(long)]
    pub reads: Option<usize>,
    /// Sweeps per read [default: min(50n, 1000)]
    #[arg(long)]
    pub sweeps: Option<usize>,
    /// Base seed; restart i uses seed + i
    #[arg(long)]
    pub seed: Option<u64>,
    /// Wall-clock limit in seconds [default: 60]
    #[arg(long)]
    pub timeout: Option<f64>,
    /// Maximum restart rounds [default: 100]
    #[arg(long)]
    pub restarts: Option<usize>,
    /// Initial inverse temperature (needs --beta-cold)
    #[arg(long, requires = "beta_cold")]
    pub beta_hot: Option<f64>,
    /// Final inverse temperature (needs --beta-hot)
    #[arg(long, requires = "beta_hot")]
    pub beta_cold: Option<f64>,
    /// Run the reads of each restart in parallel
    #[arg(long)]
    pub parallel: bool,
}

impl AnnealArgs {
    /// Parameters for a problem with `n` arguments.
    pub fn params(&self, n: usize, cfg: &FileConfig) -> Result<AnnealParams> {
        let mut p = AnnealParams::for_size(n);
        if let Some(v) = self.reads.or(cfg.reads) {
            p.num_reads = v;
        }
        if let Some(v) = self.sweeps.or(cfg.sweeps) {
            p.num_sweeps = v;
        }
        if let Some(v) = self.seed.or(cfg.seed) {
            p.seed = v;
        }
        if let Some(v) = self.timeout.or(cfg.timeout) {
            p.timeout_secs = v;
        }
        if let Some(v) = self.restarts.or(cfg.restarts) {
            p.max_restarts = v;
        }
        let hot = self.beta_hot.or(cfg.beta_hot);
        let cold = self.beta_cold.or(cfg.beta_cold);
        p.beta_range = match (hot, cold) {
            (Some(h), Some(c)) => Some((h, c)),
            (None, None) => None,
            _ => anyhow::bail!("beta_hot and beta_cold must be given together"),
        };
        p.parallel = self.parallel || cfg.parallel.unwrap_or(false);
        p.validate()?;
        Ok(p)
    }
}

/// Comma-separated names, or a file with one name per line.
pub fn parse_name_list(spec: &str) -> Result<Vec<String>> {
    let path = Path::new(spec);
    let text = if path.is_file() {
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?
    } else {
        spec.to_string()
    };
    Ok(text
        .split([',', '\n'])
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(String::from)
        .collect())
}
