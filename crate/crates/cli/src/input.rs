//! Matrix files and grid descriptors.

use std::fs;
use std::path::Path;
use std::sync::Arc;

use gna_core::classify::ClassifierConfig;
use gna_core::expr::eval_str;
use gna_core::grid::{make_grid, EpsGrid, Grid, GridKind};
use gna_core::linalg::GenMatrix;
use gna_core::scalar::GenScalar;
use serde::{Deserialize, Serialize};

use crate::args::GlobalArgs;
use crate::error::{CliError, Result};

pub const DEFAULT_GRID: GridSpec = GridSpec::Range { kind: RangeKind::Dyadic, ratio: None, k_min: 4, k_max: 40 };

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GridSpec {
    Explicit {
        explicit: Vec<f64>,
    },
    Range {
        kind: RangeKind,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        ratio: Option<f64>,
        k_min: i64,
        k_max: i64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RangeKind {
    Dyadic,
    Geometric,
}

impl GridSpec {
    /// `dyadic:K_MIN:K_MAX` or `geometric:RATIO:K_MIN:K_MAX`.
    pub fn parse_flag(s: &str) -> Result<Self> {
        let bad =
            || CliError::Input(format!("bad --grid '{s}'; expected dyadic:K_MIN:K_MAX or geometric:RATIO:K_MIN:K_MAX"));
        let parts: Vec<&str> = s.split(':').collect();
        let int = |t: &str| t.trim().parse::<i64>().map_err(|_| bad());
        match parts.as_slice() {
            ["dyadic", a, b] => {
                Ok(GridSpec::Range { kind: RangeKind::Dyadic, ratio: None, k_min: int(a)?, k_max: int(b)? })
            }
            ["geometric", r, a, b] => Ok(GridSpec::Range {
                kind: RangeKind::Geometric,
                ratio: Some(r.trim().parse().map_err(|_| bad())?),
                k_min: int(a)?,
                k_max: int(b)?,
            }),
            _ => Err(bad()),
        }
    }

    pub fn build(&self) -> Result<Grid> {
        let grid = match self {
            GridSpec::Explicit { explicit } => EpsGrid::explicit(explicit, None).map(Arc::new),
            GridSpec::Range { kind: RangeKind::Dyadic, k_min, k_max, .. } => {
                make_grid(GridKind::Dyadic, *k_min, *k_max)
            }
            GridSpec::Range { kind: RangeKind::Geometric, ratio, k_min, k_max } => {
                let ratio = ratio.ok_or_else(|| CliError::Input("geometric grid needs a ratio".into()))?;
                make_grid(GridKind::Geometric { ratio }, *k_min, *k_max)
            }
        };
        grid.map_err(CliError::core("grid"))
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScalarKindSpec {
    #[default]
    Real,
    Complex,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum EntrySpec {
    Number(f64),
    Expr(String),
    Complex { re: Box<EntrySpec>, im: Box<EntrySpec> },
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixFile {
    #[serde(default)]
    pub grid: Option<GridSpec>,
    #[serde(default)]
    pub scalar_kind: ScalarKindSpec,
    pub entries: Vec<Vec<EntrySpec>>,
}

impl MatrixFile {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|source| CliError::Io { path: path.into(), source })?;
        serde_json::from_str(&text).map_err(|source| CliError::Json { path: path.into(), source })
    }

    pub fn to_matrix(&self, grid: &Grid, name: &str) -> Result<GenMatrix> {
        let cols = self.entries.first().map_or(0, Vec::len);
        if self.entries.is_empty() || cols == 0 {
            return Err(CliError::Input(format!("{name}: matrix has no entries")));
        }
        let mut rows = Vec::with_capacity(self.entries.len());
        for (i, row) in self.entries.iter().enumerate() {
            if row.len() != cols {
                return Err(CliError::Input(format!(
                    "{name}: row {} has {} entries, expected {cols}",
                    i + 1,
                    row.len()
                )));
            }
            let mut out = Vec::with_capacity(cols);
            for (j, e) in row.iter().enumerate() {
                let at = format!("{name}: entry ({}, {})", i + 1, j + 1);
                let v = eval_entry(e, grid, &at)?;
                if self.scalar_kind == ScalarKindSpec::Real && matches!(e, EntrySpec::Complex { .. }) {
                    return Err(CliError::Input(format!("{at}: complex entry in a real matrix")));
                }
                out.push(v);
            }
            rows.push(out);
        }
        let m = GenMatrix::from_rows(grid, &rows).map_err(CliError::core(name))?;
        Ok(match self.scalar_kind {
            ScalarKindSpec::Real => m,
            ScalarKindSpec::Complex => m.into_complex(),
        })
    }
}

fn eval_entry(e: &EntrySpec, grid: &Grid, at: &str) -> Result<GenScalar> {
    match e {
        EntrySpec::Number(x) => Ok(GenScalar::constant(grid, *x)),
        EntrySpec::Expr(src) => eval_expr(src, grid, at),
        EntrySpec::Complex { re, im } => {
            let re = eval_entry(re, grid, at)?;
            let im = eval_entry(im, grid, at)?;
            let i = GenScalar::constant_cx(grid, 0.0, 1.0);
            Ok(re.add(&i.mul(&im).map_err(CliError::core(at))?).map_err(CliError::core(at))?)
        }
    }
}

pub fn eval_expr(src: &str, grid: &Grid, at: &str) -> Result<GenScalar> {
    eval_str(src, grid).map_err(CliError::core(format!("{at} '{src}'")))
}

/// Resolved settings shared by every command.
pub struct Context {
    pub grid_spec: GridSpec,
    pub grid: Grid,
    pub cfg: ClassifierConfig,
}

impl Context {
    /// The grid comes from `--grid`, then from the first file that declares
    /// one, then the default. Files that declare a different grid are
    /// rejected unless `--grid` is given.
    pub fn resolve(global: &GlobalArgs, files: &[(&Path, &MatrixFile)]) -> Result<Self> {
        let grid_spec = match &global.grid {
            Some(s) => GridSpec::parse_flag(s)?,
            None => {
                let declared: Vec<(&Path, &GridSpec)> =
                    files.iter().filter_map(|(p, f)| f.grid.as_ref().map(|g| (*p, g))).collect();
                if let Some((p0, g0)) = declared.first() {
                    if let Some((p, _)) = declared.iter().find(|(_, g)| g != g0) {
                        return Err(CliError::Input(format!(
                            "{} and {} declare different grids",
                            p0.display(),
                            p.display()
                        )));
                    }
                    (*g0).clone()
                } else {
                    DEFAULT_GRID
                }
            }
        };
        let grid = grid_spec.build()?;
        let cfg = load_config(global)?;
        Ok(Context { grid_spec, grid, cfg })
    }
}

fn load_config(global: &GlobalArgs) -> Result<ClassifierConfig> {
    let mut cfg = match &global.config {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|source| CliError::Io { path: path.clone(), source })?;
            serde_json::from_str(&text).map_err(|source| CliError::Json { path: path.clone(), source })?
        }
        None => ClassifierConfig::default(),
    };
    if let Some(m) = global.m_neg {
        cfg.m_neg = m;
    }
    if let Some(m) = global.m_inv {
        cfg.m_inv = m;
    }
    if let Some(t) = global.tail {
        cfg.tail_fraction = t;
    }
    cfg.validate().map_err(CliError::core("classifier configuration"))?;
    Ok(cfg)
}
