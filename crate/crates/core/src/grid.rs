//! Finite samplings of the index set `(0, 1]`.

use std::sync::Arc;

use rug::ops::Pow;
use rug::Float;
use serde::{Deserialize, Serialize};

use crate::error::{GnaError, Result};
use crate::num::log2_abs;

/// Shared handle to a grid. Every generalized value holds one.
pub type Grid = Arc<EpsGrid>;

/// Minimum number of samples; the classifiers need a tail to fit.
pub const MIN_GRID_LEN: usize = 8;

const MAX_PREC: u32 = 1 << 16;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum GridKind {
    /// `ε_k = 2^-k`
    Dyadic,
    /// `ε_k = ratio^k`
    Geometric { ratio: f64 },
    /// User-supplied values; `k` counts from zero.
    Explicit,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EpsGrid {
    kind: GridKind,
    k_min: i64,
    k_max: i64,
    values: Vec<Float>,
    log2: Vec<f64>,
    prec: u32,
}

/// Working precision for a grid whose smallest sample is `2^-e`: enough to
/// keep rounding far below `ε^m` for the orders the classifier looks at.
pub fn default_precision(neg_log2_eps_min: f64) -> u32 {
    let bits = 128.0 + 10.0 * neg_log2_eps_min.max(1.0).ceil();
    let bits = ((bits / 64.0).ceil() * 64.0) as u32;
    bits.min(MAX_PREC)
}

/// Builds a dyadic or geometric grid at the default precision.
pub fn make_grid(kind: GridKind, k_min: i64, k_max: i64) -> Result<Grid> {
    EpsGrid::new(kind, k_min, k_max, None).map(Arc::new)
}

impl EpsGrid {
    /// `prec` overrides the default working precision.
    pub fn new(kind: GridKind, k_min: i64, k_max: i64, prec: Option<u32>) -> Result<Self> {
        if k_min >= k_max {
            return Err(GnaError::Config(format!("grid range needs k_min < k_max, got {k_min}..{k_max}")));
        }
        if k_min < 0 {
            return Err(GnaError::Config(format!("grid index must be >= 0, got {k_min}")));
        }
        let len = (k_max - k_min + 1) as usize;
        if len < MIN_GRID_LEN {
            return Err(GnaError::Config(format!("grid has {len} samples, at least {MIN_GRID_LEN} are required")));
        }
        let neg_log2_min = match &kind {
            GridKind::Dyadic => k_max as f64,
            GridKind::Geometric { ratio } => {
                if !(*ratio > 0.0 && *ratio < 1.0) {
                    return Err(GnaError::Config(format!("geometric ratio must lie in (0, 1), got {ratio}")));
                }
                -(k_max as f64) * ratio.log2()
            }
            GridKind::Explicit => return Err(GnaError::Config("explicit grids are built from their values".into())),
        };
        let prec = check_prec(prec.unwrap_or_else(|| default_precision(neg_log2_min)))?;
        let base = match &kind {
            GridKind::Dyadic => Float::with_val(prec, 0.5),
            GridKind::Geometric { ratio } => Float::with_val(prec, *ratio),
            GridKind::Explicit => unreachable!(),
        };
        let values: Vec<Float> = (k_min..=k_max).map(|k| Float::with_val(prec, (&base).pow(k as u32))).collect();
        Ok(Self::assemble(kind, k_min, k_max, values, prec))
    }

    /// Grid from explicit sample values, which must lie in `(0, 1]` and
    /// strictly decrease.
    pub fn explicit(values: &[f64], prec: Option<u32>) -> Result<Self> {
        if values.len() < MIN_GRID_LEN {
            return Err(GnaError::Config(format!(
                "grid has {} samples, at least {MIN_GRID_LEN} are required",
                values.len()
            )));
        }
        for (i, &v) in values.iter().enumerate() {
            if !(v > 0.0 && v <= 1.0) {
                return Err(GnaError::Config(format!("grid value {v} at position {i} is outside (0, 1]")));
            }
            if i > 0 && v >= values[i - 1] {
                return Err(GnaError::Config(format!("grid values must strictly decrease (position {i})")));
            }
        }
        let min = values[values.len() - 1];
        let prec = check_prec(prec.unwrap_or_else(|| default_precision(-min.log2())))?;
        let vals = values.iter().map(|&v| Float::with_val(prec, v)).collect();
        Ok(Self::assemble(GridKind::Explicit, 0, values.len() as i64 - 1, vals, prec))
    }

    fn assemble(kind: GridKind, k_min: i64, k_max: i64, values: Vec<Float>, prec: u32) -> Self {
        let log2 = values.iter().map(log2_abs).collect();
        EpsGrid { kind, k_min, k_max, values, log2, prec }
    }

    pub fn kind(&self) -> &GridKind {
        &self.kind
    }

    pub fn k_min(&self) -> i64 {
        self.k_min
    }

    pub fn k_max(&self) -> i64 {
        self.k_max
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Working precision in bits of every sample on this grid.
    pub fn prec(&self) -> u32 {
        self.prec
    }

    /// Grid index `k` of sample position `i`.
    pub fn k(&self, i: usize) -> i64 {
        self.k_min + i as i64
    }

    pub fn eps(&self, i: usize) -> &Float {
        &self.values[i]
    }

    pub fn values(&self) -> &[Float] {
        &self.values
    }

    pub fn log2_eps(&self, i: usize) -> f64 {
        self.log2[i]
    }

    /// First sample position of the tail holding `tail_fraction` of the grid.
    pub fn tail_start(&self, tail_fraction: f64) -> usize {
        let n = self.len();
        let t = ((n as f64) * tail_fraction).ceil() as usize;
        n - t.clamp(1, n)
    }
}

fn check_prec(prec: u32) -> Result<u32> {
    if !(64..=MAX_PREC).contains(&prec) {
        return Err(GnaError::Config(format!("precision {prec} outside 64..={MAX_PREC}")));
    }
    Ok(prec)
}

/// True when both handles denote the same sampling.
pub fn same_grid(a: &Grid, b: &Grid) -> bool {
    Arc::ptr_eq(a, b) || (a.kind == b.kind && a.prec == b.prec && a.values == b.values)
}
