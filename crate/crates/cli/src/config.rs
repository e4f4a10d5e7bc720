//! Search settings: defaults, then the optional TOML config file, then flags.

use std::path::Path;

use anyhow::{Context, Result};
use clap::Args;
use serde::Deserialize;

use segre_core::algebra::scalar::{parse_rational, rational_to_f64};
use segre_core::grid::SearchConfig;

use crate::manifest::RunManifest;

/// Keys accepted in the config file; all optional.
#[derive(Clone, Debug, Default, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub kappa: Option<Vec<usize>>,
    pub d: Option<usize>,
    pub eps0: Option<f64>,
    pub stages: Option<usize>,
    pub tol: Option<f64>,
    pub sep_factor: Option<f64>,
    pub restarts: Option<usize>,
    pub max_iters: Option<usize>,
    pub seed: Option<u64>,
}

impl FileConfig {
    pub fn load(path: Option<&Path>, manifest: &mut RunManifest) -> Result<Self> {
        match path {
            None => Ok(Self::default()),
            Some(p) => {
                let text = manifest.read_input(p)?;
                toml::from_str(&text).with_context(|| format!("parsing config {}", p.display()))
            }
        }
    }
}

#[derive(Args, Clone, Debug, Default)]
pub struct SearchArgs {
    /// Germ dimension d.
    #[arg(long)]
    pub d: Option<usize>,
    /// κ values, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub kappa: Option<Vec<usize>>,
    /// Initial ball radius (real or a/b).
    #[arg(long)]
    pub eps0: Option<String>,
    /// Number of halvings of the radius.
    #[arg(long)]
    pub stages: Option<usize>,
    /// Residual tolerance (real or a/b).
    #[arg(long)]
    pub tol: Option<String>,
    /// Minimum separation as a fraction of the radius.
    #[arg(long)]
    pub sep_factor: Option<String>,
    #[arg(long)]
    pub restarts: Option<usize>,
    #[arg(long)]
    pub max_iters: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
}

/// Parses a real given as a decimal or `a/b`. Fractions are noted in the manifest.
pub fn real_arg(name: &str, text: &str, manifest: &mut RunManifest) -> Result<f64> {
    let q = parse_rational(text).with_context(|| format!("--{name}"))?;
    if text.contains('/') {
        manifest.exact(name, text);
    }
    Ok(rational_to_f64(&q))
}

impl SearchArgs {
    pub fn resolve(&self, file: &FileConfig, manifest: &mut RunManifest) -> Result<SearchConfig> {
        let mut cfg = SearchConfig::default();
        macro_rules! layer {
            ($field:ident, $src:expr) => {
                if let Some(v) = $src {
                    cfg.$field = v;
                }
            };
        }
        layer!(kappas, file.kappa.clone());
        layer!(d, file.d);
        layer!(eps0, file.eps0);
        layer!(stages, file.stages);
        layer!(tol, file.tol);
        layer!(sep_factor, file.sep_factor);
        layer!(restarts, file.restarts);
        layer!(max_iters, file.max_iters);
        layer!(seed, file.seed);

        layer!(kappas, self.kappa.clone());
        layer!(d, self.d);
        layer!(stages, self.stages);
        layer!(restarts, self.restarts);
        layer!(max_iters, self.max_iters);
        layer!(seed, self.seed);
        if let Some(t) = &self.eps0 {
            cfg.eps0 = real_arg("eps0", t, manifest)?;
        }
        if let Some(t) = &self.tol {
            cfg.tol = real_arg("tol", t, manifest)?;
        }
        if let Some(t) = &self.sep_factor {
            cfg.sep_factor = real_arg("sep-factor", t, manifest)?;
        }
        Ok(cfg)
    }
}
