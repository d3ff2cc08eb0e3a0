//! Asymptotic classification of sampled nets.
//!
//! All decisions look only at the tail of the grid and compare `log2 |a_ε|`
//! against `m · log2 ε`, so no power `ε^m` is ever formed.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{GnaError, Result};
use crate::num::{log2_abs, log2_abs_cx};
use crate::scalar::{GenScalar, Samples};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FitMethod {
    #[default]
    LeastSquaresLoglog,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ClassifierConfig {
    /// A net is negligible when `|a_ε| <= ε^m_neg` on the tail.
    pub m_neg: u32,
    /// A net is strictly nonzero when `|a_ε| > ε^m` on the tail for some `m <= m_inv`.
    pub m_inv: u32,
    /// Fraction of the grid, counted from the small-ε end, that forms the tail.
    pub tail_fraction: f64,
    pub fit_method: FitMethod,
}

impl Default for ClassifierConfig {
    fn default() -> Self {
        ClassifierConfig { m_neg: 8, m_inv: 8, tail_fraction: 0.5, fit_method: FitMethod::default() }
    }
}

impl ClassifierConfig {
    pub fn validate(&self) -> Result<()> {
        if self.m_neg < 1 || self.m_inv < 1 {
            return Err(GnaError::Config("m_neg and m_inv must be at least 1".into()));
        }
        if !(self.tail_fraction > 0.0 && self.tail_fraction <= 1.0) {
            return Err(GnaError::Config(format!("tail_fraction must lie in (0, 1], got {}", self.tail_fraction)));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Classification {
    Negligible,
    StrictlyNonzero { order: u32 },
    StrictlyPositive { order: u32 },
    ZeroDivisorLike,
    Indeterminate,
}

impl Classification {
    pub fn is_negligible(&self) -> bool {
        matches!(self, Classification::Negligible)
    }

    /// Strictly positive nets are in particular strictly nonzero.
    pub fn is_strictly_nonzero(&self) -> bool {
        matches!(self, Classification::StrictlyNonzero { .. } | Classification::StrictlyPositive { .. })
    }

    pub fn is_strictly_positive(&self) -> bool {
        matches!(self, Classification::StrictlyPositive { .. })
    }

    pub fn order(&self) -> Option<u32> {
        match self {
            Classification::StrictlyNonzero { order } | Classification::StrictlyPositive { order } => Some(*order),
            _ => None,
        }
    }
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Classification::Negligible => write!(f, "negligible"),
            Classification::StrictlyNonzero { order } => write!(f, "strictly_nonzero({order})"),
            Classification::StrictlyPositive { order } => write!(f, "strictly_positive({order})"),
            Classification::ZeroDivisorLike => write!(f, "zero_divisor_like"),
            Classification::Indeterminate => write!(f, "indeterminate"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticReport {
    pub classification: Classification,
    /// Fitted `a` in `|r_ε| ≈ C ε^a` over the nonzero tail samples.
    pub slope: Option<f64>,
    /// Fitted `log2 C`.
    pub intercept: Option<f64>,
    /// Root-mean-square residual of the fit, in `log2` units.
    pub residual: Option<f64>,
    /// Smallest `N >= 0` with `|r_ε| <= ε^-N` on the tail; `None` if some
    /// tail sample is not finite.
    pub moderate_exponent: Option<u32>,
    pub tail_fraction_used: f64,
    pub tail_len: usize,
    pub m_neg: u32,
    pub m_inv: u32,
}

/// Classifies `a` on the tail selected by `cfg`.
pub fn classify(a: &GenScalar, cfg: &ClassifierConfig) -> AsymptoticReport {
    let grid = a.grid();
    let start = grid.tail_start(cfg.tail_fraction);
    let logs: Vec<f64> = match a.samples() {
        Samples::Real(v) => v[start..].iter().map(log2_abs).collect(),
        Samples::Complex(v) => v[start..].iter().map(log2_abs_cx).collect(),
    };
    let leps: Vec<f64> = (start..grid.len()).map(|i| grid.log2_eps(i)).collect();
    let positive_real = match a.samples() {
        Samples::Real(v) => v[start..].iter().all(|x| x.is_sign_positive() && !x.is_zero()),
        Samples::Complex(v) => v[start..].iter().all(|z| z.im.is_zero() && z.re.is_sign_positive() && !z.re.is_zero()),
    };
    classify_logs(&logs, &leps, positive_real, cfg)
}

fn classify_logs(logs: &[f64], leps: &[f64], positive_real: bool, cfg: &ClassifierConfig) -> AsymptoticReport {
    let m_neg = cfg.m_neg as f64;
    let m_inv = cfg.m_inv as f64;
    let below = |l: f64, e: f64, m: f64| l <= m * e;
    let above = |l: f64, e: f64, m: f64| l > m * e;

    let all_negligible = logs.iter().zip(leps).all(|(&l, &e)| below(l, e, m_neg));
    let order = strict_order(logs, leps);

    let classification = if all_negligible {
        Classification::Negligible
    } else if let Some(m) = order.filter(|&m| m as f64 <= m_inv) {
        if positive_real {
            Classification::StrictlyPositive { order: m }
        } else {
            Classification::StrictlyNonzero { order: m }
        }
    } else {
        let has_small = logs.iter().zip(leps).any(|(&l, &e)| below(l, e, m_neg));
        let has_large = logs.iter().zip(leps).any(|(&l, &e)| above(l, e, m_inv));
        if has_small && has_large {
            Classification::ZeroDivisorLike
        } else {
            Classification::Indeterminate
        }
    };

    let (slope, intercept, residual) = fit(logs, leps);
    let moderate_exponent = moderate(logs, leps);
    AsymptoticReport {
        classification,
        slope,
        intercept,
        residual,
        moderate_exponent,
        tail_fraction_used: cfg.tail_fraction,
        tail_len: logs.len(),
        m_neg: cfg.m_neg,
        m_inv: cfg.m_inv,
    }
}

/// Smallest `m >= 0` with `log|a| > m log ε` on every sample.
fn strict_order(logs: &[f64], leps: &[f64]) -> Option<u32> {
    let mut worst = f64::NEG_INFINITY;
    for (&l, &e) in logs.iter().zip(leps) {
        if !l.is_finite() {
            return None;
        }
        worst = worst.max(l / e);
    }
    let mut m = (worst.floor() + 1.0).max(0.0);
    // The floor estimate can be off by one through rounding of the logs.
    for _ in 0..4 {
        if m > u32::MAX as f64 || m.is_nan() {
            return None;
        }
        if logs.iter().zip(leps).all(|(&l, &e)| l > m * e) {
            return Some(m as u32);
        }
        m += 1.0;
    }
    None
}

fn moderate(logs: &[f64], leps: &[f64]) -> Option<u32> {
    let mut n = 0.0f64;
    for (&l, &e) in logs.iter().zip(leps) {
        if l.is_nan() || l == f64::INFINITY {
            return None;
        }
        if l.is_finite() {
            // |a| <= ε^-N  <=>  log|a| <= -N log ε  <=>  N >= -log|a| / log ε
            n = n.max((-l / e).ceil());
        }
    }
    Some(n.max(0.0) as u32)
}

fn fit(logs: &[f64], leps: &[f64]) -> (Option<f64>, Option<f64>, Option<f64>) {
    let pts: Vec<(f64, f64)> = leps.iter().zip(logs).filter(|(_, l)| l.is_finite()).map(|(&e, &l)| (e, l)).collect();
    if pts.len() < 2 {
        return (None, None, None);
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return (None, None, None);
    }
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let rss: f64 = pts.iter().map(|p| (p.1 - intercept - slope * p.0).powi(2)).sum();
    (Some(slope), Some(intercept), Some((rss / n).sqrt()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dyadic_tail(k0: i32, k1: i32) -> Vec<f64> {
        (k0..=k1).map(|k| -(k as f64)).collect()
    }

    #[test]
    fn power_net_has_exact_slope_and_order() {
        let leps = dyadic_tail(22, 40);
        let logs: Vec<f64> = leps.iter().map(|e| 3.0 * e).collect();
        let r = classify_logs(&logs, &leps, true, &ClassifierConfig::default());
        assert_eq!(r.classification, Classification::StrictlyPositive { order: 4 });
        assert!((r.slope.unwrap() - 3.0).abs() < 1e-12);
        assert!(r.residual.unwrap() < 1e-12);
    }

    #[test]
    fn zeros_are_negligible_and_have_no_fit() {
        let leps = dyadic_tail(22, 40);
        let logs = vec![f64::NEG_INFINITY; leps.len()];
        let r = classify_logs(&logs, &leps, false, &ClassifierConfig::default());
        assert!(r.classification.is_negligible());
        assert_eq!(r.slope, None);
    }

    #[test]
    fn alternating_zeros_are_zero_divisor_like() {
        let leps = dyadic_tail(22, 40);
        let logs: Vec<f64> = (0..leps.len()).map(|i| if i % 2 == 0 { 0.0 } else { f64::NEG_INFINITY }).collect();
        let r = classify_logs(&logs, &leps, false, &ClassifierConfig::default());
        assert_eq!(r.classification, Classification::ZeroDivisorLike);
    }

    #[test]
    fn intermediate_decay_is_indeterminate() {
        let leps = dyadic_tail(22, 40);
        let logs: Vec<f64> = leps.iter().map(|e| 8.0 * e).collect();
        let cfg = ClassifierConfig { m_neg: 12, m_inv: 4, ..Default::default() };
        let r = classify_logs(&logs, &leps, false, &cfg);
        assert_eq!(r.classification, Classification::Indeterminate);
    }

    #[test]
    fn config_validation() {
        let mut c = ClassifierConfig::default();
        assert!(c.validate().is_ok());
        c.tail_fraction = 0.0;
        assert!(c.validate().is_err());
        let parsed: ClassifierConfig = serde_json::from_str(r#"{"m_neg": 10}"#).unwrap();
        assert_eq!(parsed.m_neg, 10);
        assert_eq!(parsed.m_inv, 8);
    }
}
