//! Interestingness metrics for a single association rule X -> Y, computed
//! from the three joint/marginal supports alone.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// The five standard rule metrics.
///
/// `conviction` is `f64::INFINITY` when the rule never misses
/// (confidence = 1); everything else is finite under the input contract.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RuleMetrics {
    pub confidence: f64,
    pub lift: f64,
    pub leverage: f64,
    pub conviction: f64,
    pub zhangs_metric: f64,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MetricError {
    /// Supports outside their valid ranges (marginals in (0, 1], joint in
    /// [0, min(supp_x, supp_y)]).
    #[error("invalid support values: {0}")]
    DomainError(String),
}

/// Computes all metrics for a rule with joint support `supp_xy` and
/// marginal supports `supp_x` (antecedent) and `supp_y` (consequent).
pub fn rule_metrics(supp_xy: f64, supp_x: f64, supp_y: f64) -> Result<RuleMetrics, MetricError> {
    for (name, v) in [("supp_xy", supp_xy), ("supp_x", supp_x), ("supp_y", supp_y)] {
        if !v.is_finite() {
            return Err(MetricError::DomainError(format!("{name} = {v} is not finite")));
        }
    }
    if !(supp_x > 0.0 && supp_x <= 1.0) {
        return Err(MetricError::DomainError(format!("supp_x = {supp_x} not in (0, 1]")));
    }
    if !(supp_y > 0.0 && supp_y <= 1.0) {
        return Err(MetricError::DomainError(format!("supp_y = {supp_y} not in (0, 1]")));
    }
    if supp_xy < 0.0 || supp_xy > supp_x.min(supp_y) {
        return Err(MetricError::DomainError(format!(
            "supp_xy = {supp_xy} not in [0, min({supp_x}, {supp_y})]"
        )));
    }

    let confidence = supp_xy / supp_x;
    let lift = confidence / supp_y;
    let leverage = supp_xy - supp_x * supp_y;
    let conviction = if confidence >= 1.0 {
        f64::INFINITY
    } else {
        (1.0 - supp_y) / (1.0 - confidence)
    };
    let denom = f64::max(supp_xy * (1.0 - supp_x), supp_x * (supp_y - supp_xy));
    let zhangs_metric = if denom == 0.0 { 0.0 } else { leverage / denom };

    Ok(RuleMetrics { confidence, lift, leverage, conviction, zhangs_metric })
}

/// Count-based twin of [`rule_metrics`]: identical formulas, evaluated with
/// exact integer numerators so each metric suffers one final rounding only.
/// In particular `confidence = c_xy / c_x` is exact for exact ratios (3 out
/// of 4 baskets gives precisely 0.75), which keeps threshold comparisons
/// free of float-boundary artifacts.
pub(crate) fn rule_metrics_from_counts(
    c_xy: u64,
    c_x: u64,
    c_y: u64,
    n_baskets: u64,
) -> Result<RuleMetrics, MetricError> {
    let n = n_baskets;
    if n == 0 {
        return Err(MetricError::DomainError("n_baskets is 0".into()));
    }
    if c_x == 0 || c_x > n {
        return Err(MetricError::DomainError(format!("c_x = {c_x} not in [1, {n}]")));
    }
    if c_y == 0 || c_y > n {
        return Err(MetricError::DomainError(format!("c_y = {c_y} not in [1, {n}]")));
    }
    if c_xy > c_x.min(c_y) {
        return Err(MetricError::DomainError(format!(
            "c_xy = {c_xy} exceeds min({c_x}, {c_y})"
        )));
    }

    let confidence = c_xy as f64 / c_x as f64;
    let joint_scaled = c_xy as u128 * n as u128; // supp_xy · n²
    let indep_scaled = c_x as u128 * c_y as u128; // supp_x · supp_y · n²
    let lift = joint_scaled as f64 / indep_scaled as f64;
    let leverage_scaled = joint_scaled as i128 - indep_scaled as i128;
    let leverage = leverage_scaled as f64 / (n as f64 * n as f64);
    let conviction = if c_xy == c_x {
        f64::INFINITY
    } else {
        ((n - c_y) as u128 * c_x as u128) as f64 / (n as u128 * (c_x - c_xy) as u128) as f64
    };
    let zhangs_denom_scaled =
        (c_xy as u128 * (n - c_x) as u128).max(c_x as u128 * (c_y - c_xy) as u128);
    let zhangs_metric = if zhangs_denom_scaled == 0 {
        0.0
    } else {
        leverage_scaled as f64 / zhangs_denom_scaled as f64
    };

    Ok(RuleMetrics { confidence, lift, leverage, conviction, zhangs_metric })
}
