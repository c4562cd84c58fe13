//! Association-rule generation from mined frequent itemsets.

use std::collections::HashMap;

use super::metrics::rule_metrics_from_counts;
use super::{AssociationRule, FrequentItemset, MetricError, MineError, MiningParams};

/// Derives every rule `antecedent -> consequent` from each itemset of
/// length two or more by splitting it into all non-empty, disjoint,
/// exhaustive pairs, keeping those with confidence at or above
/// `p.min_confidence`.
///
/// Metrics are evaluated from the itemsets' exact counts (`n_baskets` is the
/// mined database's basket total), so a confidence of 3-out-of-4 is exactly
/// 0.75 and threshold comparisons carry no rounding surprises.
///
/// `itemsets` must contain every non-empty subset of each split itemset
/// (true for miner output, by downward closure); a missing subset is
/// reported as [`MineError::MissingSubsetSupport`].
///
/// Rules are sorted by (support desc, confidence desc, antecedent,
/// consequent).
pub fn gen_rules(
    itemsets: &[FrequentItemset],
    p: &MiningParams,
    n_baskets: usize,
) -> Result<Vec<AssociationRule>, MineError> {
    p.validate()?;
    let counts: HashMap<&[String], u64> =
        itemsets.iter().map(|f| (f.items.as_slice(), f.count)).collect();
    let lookup = |items: &[String]| {
        counts
            .get(items)
            .copied()
            .ok_or_else(|| MineError::MissingSubsetSupport(items.join(", ")))
    };

    let mut rules = Vec::new();
    for fs in itemsets.iter().filter(|f| f.items.len() >= 2) {
        let len = fs.items.len();
        debug_assert!(len < 64, "itemset too long for bitmask split");
        // Every mask strictly between 0 and full selects a proper non-empty
        // antecedent; the complement is the consequent.
        for mask in 1u64..((1u64 << len) - 1) {
            let mut antecedent = Vec::new();
            let mut consequent = Vec::new();
            for (i, item) in fs.items.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    antecedent.push(item.clone());
                } else {
                    consequent.push(item.clone());
                }
            }
            let c_x = lookup(&antecedent)?;
            let c_y = lookup(&consequent)?;
            let m = rule_metrics_from_counts(fs.count, c_x, c_y, n_baskets as u64).map_err(
                |MetricError::DomainError(msg)| {
                    MineError::InvalidParams(format!("inconsistent itemset counts: {msg}"))
                },
            )?;
            if m.confidence >= p.min_confidence {
                rules.push(AssociationRule {
                    antecedent,
                    consequent,
                    support: fs.count as f64 / n_baskets as f64,
                    confidence: m.confidence,
                    lift: m.lift,
                    leverage: m.leverage,
                    conviction: m.conviction,
                    zhangs_metric: m.zhangs_metric,
                });
            }
        }
    }

    rules.sort_by(|a, b| {
        b.support
            .total_cmp(&a.support)
            .then_with(|| b.confidence.total_cmp(&a.confidence))
            .then_with(|| a.antecedent.cmp(&b.antecedent))
            .then_with(|| a.consequent.cmp(&b.consequent))
    });
    Ok(rules)
}
