//! Operator/complex definition files: a single JSON document with
//! nested row-major matrices, an optional completion `Q`, and grid and
//! ensemble parameters.

use std::path::Path;

use anyhow::{bail, Context, Result};
use poincare_core::{ComplexSpec, EnsembleParams, Operator};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OperatorConfig {
    pub name: String,
    pub n: usize,
    pub dim_u: usize,
    pub dim_v: usize,
    /// `n` coefficient matrices, each a list of `dim_v` rows of
    /// `dim_u` entries.
    pub matrices: Vec<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim_w: Option<usize>,
    /// Optional completion operator `Q`, `n` matrices of shape
    /// `dim_w x dim_v`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q_matrices: Option<Vec<Vec<Vec<f64>>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ensemble: Option<EnsembleConfig>,
    /// Exponents for the Poincare harness; defaults to `[2.0]`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    #[serde(rename = "N")]
    pub points: usize,
    pub bandwidth: usize,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnsembleConfig {
    pub size: usize,
    pub seed: u64,
}

fn shape_check(
    label: &str,
    matrices: &[Vec<Vec<f64>>],
    n: usize,
    rows: usize,
    cols: usize,
) -> Result<()> {
    if matrices.len() != n {
        bail!("{label}: expected {n} coefficient matrices, found {}", matrices.len());
    }
    for (i, m) in matrices.iter().enumerate() {
        if m.len() != rows {
            bail!("{label}[{i}]: expected {rows} rows, found {}", m.len());
        }
        for (r, row) in m.iter().enumerate() {
            if row.len() != cols {
                bail!(
                    "{label}[{i}] row {r}: expected {cols} entries, found {}",
                    row.len()
                );
            }
            if let Some(x) = row.iter().find(|x| !x.is_finite()) {
                bail!("{label}[{i}] row {r}: non-finite entry {x}");
            }
        }
    }
    Ok(())
}

impl OperatorConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        let config: Self = serde_json::from_str(&text)
            .with_context(|| format!("parsing config {}", path.display()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 || self.dim_u == 0 || self.dim_v == 0 {
            bail!("dimensions must be positive");
        }
        shape_check("matrices", &self.matrices, self.n, self.dim_v, self.dim_u)?;
        match (&self.q_matrices, self.dim_w) {
            (Some(q), Some(dim_w)) => {
                if dim_w == 0 {
                    bail!("dim_w must be positive");
                }
                shape_check("q_matrices", q, self.n, dim_w, self.dim_v)?;
            }
            (Some(_), None) => bail!("q_matrices requires dim_w"),
            (None, _) => {}
        }
        if let Some(grid) = &self.grid {
            if grid.points % 2 == 0 || grid.points == 0 {
                bail!("grid.N must be odd and positive, got {}", grid.points);
            }
            let half = (grid.points - 1) / 2;
            if grid.bandwidth == 0 || grid.bandwidth > half {
                bail!(
                    "grid.bandwidth must lie in 1..={half} for N = {}, got {}",
                    grid.points,
                    grid.bandwidth
                );
            }
        }
        if let Some(ensemble) = &self.ensemble {
            if ensemble.size == 0 {
                bail!("ensemble.size must be positive");
            }
        }
        if let Some(p) = &self.p {
            if p.is_empty() {
                bail!("p must not be empty when present");
            }
            for &x in p {
                if !x.is_finite() || x <= 1.0 {
                    bail!("exponents must be finite and > 1, got {x}");
                }
            }
        }
        Ok(())
    }

    pub fn operator(&self) -> Result<Operator> {
        let coeffs = self.matrices.iter().map(|m| m.concat()).collect();
        Operator::new(self.n, self.dim_u, self.dim_v, coeffs)
            .context("constructing operator from config")
    }

    /// The `(P, Q)` pair; fails when the config carries no `Q`.
    pub fn complex_spec(&self) -> Result<ComplexSpec> {
        let q = self
            .q_matrices
            .as_ref()
            .context("config has no q_matrices; a complex check needs the completion operator")?;
        let dim_w = self.dim_w.context("config has no dim_w")?;
        let coeffs = q.iter().map(|m| m.concat()).collect();
        let q_op = Operator::new(self.n, self.dim_v, dim_w, coeffs)
            .context("constructing Q from config")?;
        ComplexSpec::new(self.operator()?, q_op).context("assembling the complex")
    }

    /// Grid size and bandwidth, defaulted per dimension when absent.
    pub fn grid_layout(&self) -> (usize, usize) {
        match &self.grid {
            Some(g) => (g.points, g.bandwidth),
            None => {
                let defaults = EnsembleParams::defaults_for(self.n);
                (defaults.grid_size, defaults.bandwidth)
            }
        }
    }

    pub fn ensemble_params(&self, seed_override: Option<u64>, rank_samples: usize) -> EnsembleParams {
        let (grid_size, bandwidth) = self.grid_layout();
        let (size, seed) = match &self.ensemble {
            Some(e) => (e.size, e.seed),
            None => (100, 0),
        };
        EnsembleParams {
            grid_size,
            bandwidth,
            size,
            seed: seed_override.unwrap_or(seed),
            rank_samples,
        }
    }

    pub fn exponents(&self) -> Vec<f64> {
        self.p.clone().unwrap_or_else(|| vec![2.0])
    }
}
