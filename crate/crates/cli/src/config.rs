//! Run configuration: a JSON document merged with command-line flags (flags win).

use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

/// Grid over a box: a per-axis count inside the default box, or explicit `(min, max, count)` axes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GridSpec {
    Count(usize),
    Axes(Vec<(f64, f64, usize)>),
}

impl GridSpec {
    /// Parses `N` or `min:max:count,min:max:count,...`.
    pub fn parse(s: &str) -> Result<Self, String> {
        if let Ok(n) = s.trim().parse::<usize>() {
            return Ok(Self::Count(n));
        }
        let axes = s
            .split(',')
            .map(|ax| {
                let f: Vec<&str> = ax.split(':').collect();
                if f.len() != 3 {
                    return Err(format!("grid axis `{ax}` is not min:max:count"));
                }
                let lo = f[0]
                    .trim()
                    .parse::<f64>()
                    .map_err(|e| format!("grid min `{}`: {e}", f[0]))?;
                let hi = f[1]
                    .trim()
                    .parse::<f64>()
                    .map_err(|e| format!("grid max `{}`: {e}", f[1]))?;
                let n = f[2]
                    .trim()
                    .parse::<usize>()
                    .map_err(|e| format!("grid count `{}`: {e}", f[2]))?;
                Ok((lo, hi, n))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self::Axes(axes))
    }

    pub fn validate(&self, dims: usize) -> Result<(), CliError> {
        match self {
            Self::Count(0) => Err(CliError::Input("grid count must be at least 1".into())),
            Self::Count(_) => Ok(()),
            Self::Axes(a) => {
                if a.len() != dims {
                    return Err(CliError::Input(format!(
                        "grid needs {dims} axes, got {}",
                        a.len()
                    )));
                }
                if let Some(ax) = a
                    .iter()
                    .find(|(lo, hi, n)| *n == 0 || !lo.is_finite() || !hi.is_finite() || lo > hi)
                {
                    return Err(CliError::Input(format!("invalid grid axis {ax:?}")));
                }
                Ok(())
            }
        }
    }
}

/// Flags shared by every subcommand; each is optional so the config file can supply it.
#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    /// Quotient family (pl, gen-pedersen, height-one, height-two, bergman; pullback also takes diagonal)
    #[arg(long)]
    pub family: Option<String>,
    /// Comma-separated family parameters or weights
    #[arg(
        long,
        alias = "weights",
        value_delimiter = ',',
        allow_hyphen_values = true
    )]
    pub params: Option<Vec<f64>>,
    /// Grid: `N` per axis inside the default box, or `min:max:count,...`
    #[arg(long, value_parser = GridSpec::parse, allow_hyphen_values = true)]
    pub grid: Option<GridSpec>,
    /// Finite-difference step for metric derivatives
    #[arg(long)]
    pub h: Option<f64>,
    /// Seed for zero-set sampling
    #[arg(long)]
    pub seed: Option<u64>,
    /// Pass threshold of the command's main residual
    #[arg(long)]
    pub tol: Option<f64>,
    /// Number of samples
    #[arg(long)]
    pub count: Option<usize>,
    /// Slice coordinates `a,b,c,d`
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub xi: Option<Vec<f64>>,
    /// Homogeneous point as JSON `[[4 reals] x 3]`
    #[arg(long)]
    pub point: Option<String>,
    /// Generator matrix as JSON (3 x 3 x 4 reals)
    #[arg(long)]
    pub matrix: Option<String>,
    /// Normal form as JSON, e.g. {"family":"T2","lambda":1,"p":0}
    #[arg(long)]
    pub form: Option<String>,
    /// Basis of matrix input (u or vtilde)
    #[arg(long)]
    pub basis: Option<String>,
    /// Pole set kind (monopole, dipole, tripole, pedersen, multipole)
    #[arg(long)]
    pub kind: Option<String>,
    /// Pole set as JSON
    #[arg(long)]
    pub poles: Option<String>,
    /// Output file for the full report (`-` for stdout)
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Report format
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// JSON config file; flags override its fields
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
}

impl RunConfig {
    /// Loads the config file named by `--config`, if any, and applies the flags over it.
    pub fn resolve(self) -> Result<Self, CliError> {
        let Some(path) = self.config.clone() else {
            return Ok(self);
        };
        let base = Self::load(&path)?;
        Ok(self.over(base))
    }

    fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Input(format!("cannot read config {}: {e}", path.display())))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Input(format!("config {}: {e}", path.display())))
    }

    fn over(self, base: Self) -> Self {
        Self {
            family: self.family.or(base.family),
            params: self.params.or(base.params),
            grid: self.grid.or(base.grid),
            h: self.h.or(base.h),
            seed: self.seed.or(base.seed),
            tol: self.tol.or(base.tol),
            count: self.count.or(base.count),
            xi: self.xi.or(base.xi),
            point: self.point.or(base.point),
            matrix: self.matrix.or(base.matrix),
            form: self.form.or(base.form),
            basis: self.basis.or(base.basis),
            kind: self.kind.or(base.kind),
            poles: self.poles.or(base.poles),
            out: self.out.or(base.out),
            format: self.format.or(base.format),
            config: self.config,
        }
    }

    pub fn format(&self) -> Format {
        self.format.unwrap_or(Format::Json)
    }

    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(0)
    }

    pub fn positive_h(&self) -> Result<Option<f64>, CliError> {
        match self.h {
            Some(h) if !(h > 0.0 && h.is_finite()) => {
                Err(CliError::Input(format!("h must be positive, got {h}")))
            }
            h => Ok(h),
        }
    }

    pub fn positive_tol(&self, default: f64) -> Result<f64, CliError> {
        match self.tol {
            Some(t) if !(t > 0.0 && t.is_finite()) => {
                Err(CliError::Input(format!("tol must be positive, got {t}")))
            }
            t => Ok(t.unwrap_or(default)),
        }
    }

    pub fn require_family(&self) -> Result<&str, CliError> {
        self.family
            .as_deref()
            .ok_or_else(|| CliError::Input("--family is required".into()))
    }

    pub fn params(&self) -> &[f64] {
        self.params.as_deref().unwrap_or(&[])
    }
}
