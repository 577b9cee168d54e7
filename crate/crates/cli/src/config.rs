//! Run configuration shared by every subcommand.

use divlog_core::divergences::{DivKind, DivergenceSpec};
use divlog_core::monads::GenConfig;
use serde::Serialize;

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Text,
    Json,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Config {
    pub max_carrier: usize,
    pub grid_denom: u32,
    pub cost_bound: u32,
    pub depth: usize,
    /// `None` keeps each entry's built-in α-grid.
    pub alpha_grid: Option<Vec<f64>>,
    pub tol: f64,
    pub seed: u64,
    pub format: Format,
}

impl Default for Config {
    fn default() -> Self {
        Config { max_carrier: 3, grid_denom: 4, cost_bound: 3, depth: 3, alpha_grid: None, tol: 1e-9, seed: 0, format: Format::Text }
    }
}

impl Config {
    pub fn validate(&self) -> Result<(), CliError> {
        if self.max_carrier == 0 || self.grid_denom == 0 || self.cost_bound == 0 || self.depth == 0 {
            return Err(CliError::Usage("--max-carrier, --grid-denom, --cost-bound and --depth must be positive".into()));
        }
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(CliError::Usage(format!("--tol must be a positive number, got {}", self.tol)));
        }
        Ok(())
    }

    pub fn gen(&self) -> GenConfig {
        GenConfig { grid_denom: self.grid_denom, cost_bound: self.cost_bound, depth: self.depth }
    }

    /// Applies the tolerance and α-grid to a catalogue entry.
    pub fn tune(&self, mut spec: DivergenceSpec) -> DivergenceSpec {
        if let Some(grid) = &self.alpha_grid {
            regrid(&mut spec.kind, grid);
        }
        spec.with_tol(self.tol)
    }
}

fn regrid(kind: &mut DivKind, grid: &[f64]) {
    match kind {
        DivKind::Zcdp(g) | DivKind::Tcdp { grid: g, .. } => *g = grid.to_vec(),
        DivKind::CostCombined(inner) => regrid(&mut inner.kind, grid),
        _ => {}
    }
}

/// A parsed `--alpha-grid`; a newtype so clap treats it as one value.
#[derive(Clone, Debug, PartialEq)]
pub struct AlphaGrid(pub Vec<f64>);

/// `start:stop:step` or a comma-separated list; every order must exceed 1.
pub fn parse_alpha_grid(s: &str) -> Result<AlphaGrid, String> {
    let num = |t: &str| t.trim().parse::<f64>().map_err(|_| format!("bad number `{t}` in α-grid"));
    let grid = match s.split(':').collect::<Vec<_>>()[..] {
        [a, b, h] => {
            let (a, b, h) = (num(a)?, num(b)?, num(h)?);
            if h.is_nan() || h <= 0.0 || b < a {
                return Err(format!("α-grid `{s}` is empty"));
            }
            let n = ((b - a) / h + 1e-9).floor() as usize;
            (0..=n).map(|i| a + i as f64 * h).collect()
        }
        [_] => s.split(',').map(num).collect::<Result<Vec<_>, _>>()?,
        _ => return Err(format!("α-grid `{s}` is neither start:stop:step nor a list")),
    };
    if grid.is_empty() || grid.iter().any(|&a| a.is_nan() || a <= 1.0 || !a.is_finite()) {
        return Err(format!("α-grid `{s}` must list orders greater than 1"));
    }
    Ok(AlphaGrid(grid))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alpha_grids() {
        assert_eq!(parse_alpha_grid("1.5:3:0.5").unwrap().0, vec![1.5, 2.0, 2.5, 3.0]);
        assert_eq!(parse_alpha_grid("2, 4").unwrap().0, vec![2.0, 4.0]);
        assert!(parse_alpha_grid("1:2:0.5").is_err());
        assert!(parse_alpha_grid("3:2:1").is_err());
        assert!(parse_alpha_grid("x").is_err());
    }

    #[test]
    fn regrid_reaches_inner_entries() {
        let c = Config { alpha_grid: Some(vec![2.0]), ..Config::default() };
        let s = c.tune(DivergenceSpec::by_name("cost[zcdp]").unwrap());
        let DivKind::CostCombined(inner) = &s.kind else { panic!() };
        assert_eq!(inner.kind, DivKind::Zcdp(vec![2.0]));
        assert!(Config { tol: 0.0, ..Config::default() }.validate().is_err());
    }
}
