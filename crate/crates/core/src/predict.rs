//! Next-purchase prediction that fuses association rules with sequential
//! patterns.
//!
//! A rule X -> Y only becomes predictive evidence when some mined sequence
//! actually shows Y being bought after X; the fused score multiplies the
//! rule's confidence by the supporting pattern's normalized sequence support,
//! so both signals bound the result in [0, 1].

use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::freqmine::AssociationRule;
use crate::seqmine::SequentialPattern;

/// A rule corroborated by at least one sequential pattern.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CombinedPattern {
    /// Rule antecedent X, sorted ascending.
    pub antecedent: Vec<String>,
    /// Rule consequent Y, sorted ascending.
    pub consequent: Vec<String>,
    pub rule_confidence: f64,
    /// Support count of the best corroborating pattern.
    pub seq_count: u64,
    /// `rule_confidence * seq_count / n_sequences`.
    pub score: f64,
}

/// One recommended item with its fused score.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedItem {
    pub item: String,
    pub score: f64,
}

/// Ranked next-purchase candidates for one user.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Prediction {
    pub user_id: String,
    /// Scores non-increasing; no item the user already bought.
    pub predictions: Vec<RankedItem>,
}

/// True when `steps` contains every antecedent item somewhere and every
/// consequent item strictly after the last antecedent occurrence.
fn pattern_supports_rule(antecedent: &[String], consequent: &[String], steps: &[String]) -> bool {
    let mut last_x = 0usize;
    for x in antecedent {
        match steps.iter().rposition(|s| s == x) {
            Some(pos) => last_x = last_x.max(pos),
            None => return false,
        }
    }
    if antecedent.is_empty() {
        return false;
    }
    consequent.iter().all(|y| steps[last_x + 1..].contains(y))
}

/// Pairs every rule with every pattern that replays it in order, keeping for
/// each (antecedent, consequent) the highest-scoring pairing. Output is
/// sorted by (score desc, antecedent, consequent).
pub fn combine(
    rules: &[AssociationRule],
    patterns: &[SequentialPattern],
    n_sequences: usize,
) -> Vec<CombinedPattern> {
    if n_sequences == 0 {
        return Vec::new();
    }
    let mut best: HashMap<(&[String], &[String]), CombinedPattern> = HashMap::new();
    for rule in rules {
        for pattern in patterns {
            if !pattern_supports_rule(&rule.antecedent, &rule.consequent, &pattern.elements) {
                continue;
            }
            let score = rule.confidence * (pattern.count as f64 / n_sequences as f64);
            let candidate = CombinedPattern {
                antecedent: rule.antecedent.clone(),
                consequent: rule.consequent.clone(),
                rule_confidence: rule.confidence,
                seq_count: pattern.count,
                score,
            };
            best.entry((&rule.antecedent, &rule.consequent))
                .and_modify(|held| {
                    if score > held.score {
                        *held = candidate.clone();
                    }
                })
                .or_insert(candidate);
        }
    }
    let mut combined: Vec<CombinedPattern> = best.into_values().collect();
    combined.sort_by(|a, b| {
        b.score
            .total_cmp(&a.score)
            .then_with(|| a.antecedent.cmp(&b.antecedent))
            .then_with(|| a.consequent.cmp(&b.consequent))
    });
    combined
}

/// Ranks candidate next purchases for a user: consequent items of combined
/// patterns whose antecedent is fully covered by the purchase history, each
/// scored by its best contributing pattern, minus items already bought,
/// truncated to the top `k` by (score desc, item asc).
pub fn predict_next(
    combined: &[CombinedPattern],
    user_id: &str,
    history: &[String],
    k: usize,
) -> Prediction {
    let owned: HashSet<&str> = history.iter().map(|s| s.as_str()).collect();
    let mut best: HashMap<&str, f64> = HashMap::new();
    for cp in combined {
        if !cp.antecedent.iter().all(|x| owned.contains(x.as_str())) {
            continue;
        }
        for item in &cp.consequent {
            if owned.contains(item.as_str()) {
                continue;
            }
            let entry = best.entry(item).or_insert(f64::NEG_INFINITY);
            if cp.score > *entry {
                *entry = cp.score;
            }
        }
    }
    let mut ranked: Vec<(&str, f64)> = best.into_iter().collect();
    ranked.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(b.0)));
    ranked.truncate(k);
    Prediction {
        user_id: user_id.to_string(),
        predictions: ranked
            .into_iter()
            .map(|(item, score)| RankedItem { item: item.to_string(), score })
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rule(x: &[&str], y: &[&str], confidence: f64) -> AssociationRule {
        AssociationRule {
            antecedent: x.iter().map(|s| s.to_string()).collect(),
            consequent: y.iter().map(|s| s.to_string()).collect(),
            support: 0.1,
            confidence,
            lift: 1.5,
            leverage: 0.01,
            conviction: 1.2,
            zhangs_metric: 0.4,
        }
    }

    fn pattern(elements: &[&str], count: u64) -> SequentialPattern {
        SequentialPattern {
            elements: elements.iter().map(|s| s.to_string()).collect(),
            count,
        }
    }

    #[test]
    fn rule_meets_pattern() {
        let combined = combine(&[rule(&["a"], &["b"], 0.75)], &[pattern(&["a", "b"], 2)], 4);
        assert_eq!(combined.len(), 1);
        let cp = &combined[0];
        assert_eq!(cp.antecedent, vec!["a"]);
        assert_eq!(cp.consequent, vec!["b"]);
        assert_eq!(cp.seq_count, 2);
        assert!((cp.score - 0.375).abs() < 1e-12);
    }

    #[test]
    fn reversed_pattern_does_not_support_rule() {
        let combined = combine(&[rule(&["a"], &["b"], 0.75)], &[pattern(&["b", "a"], 2)], 4);
        assert!(combined.is_empty());
    }

    #[test]
    fn empty_inputs_combine_to_nothing() {
        assert!(combine(&[], &[pattern(&["a"], 1)], 4).is_empty());
        assert!(combine(&[rule(&["a"], &["b"], 0.5)], &[], 4).is_empty());
    }

    #[test]
    fn duplicate_rule_pattern_pairs_keep_max_score() {
        let rules = [rule(&["a"], &["b"], 0.75)];
        let patterns = [pattern(&["a", "b"], 2), pattern(&["a", "c", "b"], 3)];
        let combined = combine(&rules, &patterns, 4);
        assert_eq!(combined.len(), 1);
        assert_eq!(combined[0].seq_count, 3);
        assert!((combined[0].score - 0.75 * 0.75).abs() < 1e-12);
    }

    #[test]
    fn consequent_must_follow_last_antecedent_occurrence() {
        let rules = [rule(&["a", "b"], &["c"], 0.5)];
        // Last antecedent occurrence is the second `a`; `c` follows it.
        assert_eq!(combine(&rules, &[pattern(&["a", "b", "a", "c"], 1)], 2).len(), 1);
        // `c` sits between the antecedent items, not after both.
        assert!(combine(&rules, &[pattern(&["a", "c", "b"], 1)], 2).is_empty());
        // Multi-item consequent needs every item after the antecedent.
        let rules = [rule(&["a"], &["b", "c"], 0.5)];
        assert_eq!(combine(&rules, &[pattern(&["a", "c", "b"], 1)], 2).len(), 1);
        assert!(combine(&rules, &[pattern(&["a", "b"], 1)], 2).is_empty());
        assert!(combine(&rules, &[pattern(&["b", "a", "c"], 1)], 2).is_empty());
    }

    #[test]
    fn combined_sorted_by_score_then_items() {
        let rules = [
            rule(&["a"], &["b"], 0.5),
            rule(&["a"], &["c"], 0.5),
            rule(&["b"], &["c"], 0.9),
        ];
        let patterns = [
            pattern(&["a", "b"], 2),
            pattern(&["a", "c"], 2),
            pattern(&["b", "c"], 2),
        ];
        let combined = combine(&rules, &patterns, 4);
        assert_eq!(combined.len(), 3);
        assert_eq!(combined[0].antecedent, vec!["b"]); // 0.45 beats 0.25
        assert_eq!(combined[1].consequent, vec!["b"]); // then {a}->{b} before {a}->{c}
        assert_eq!(combined[2].consequent, vec!["c"]);
    }

    #[test]
    fn predicts_next_item_from_history() {
        let combined = combine(&[rule(&["a"], &["b"], 0.75)], &[pattern(&["a", "b"], 2)], 4);
        let p = predict_next(&combined, "u1", &["a".to_string()], 3);
        assert_eq!(p.user_id, "u1");
        assert_eq!(p.predictions.len(), 1);
        assert_eq!(p.predictions[0].item, "b");
        assert!((p.predictions[0].score - 0.375).abs() < 1e-12);
    }

    #[test]
    fn owned_items_are_never_predicted() {
        let combined = combine(&[rule(&["a"], &["b"], 0.75)], &[pattern(&["a", "b"], 2)], 4);
        let history = vec!["a".to_string(), "b".to_string()];
        assert!(predict_next(&combined, "u1", &history, 3).predictions.is_empty());
    }

    #[test]
    fn unmatched_antecedent_predicts_nothing() {
        let combined = combine(&[rule(&["a"], &["b"], 0.75)], &[pattern(&["a", "b"], 2)], 4);
        assert!(predict_next(&combined, "u1", &["c".to_string()], 3).predictions.is_empty());
    }

    #[test]
    fn top_k_is_a_prefix_of_top_k_plus_one() {
        let rules = [
            rule(&["a"], &["b"], 0.9),
            rule(&["a"], &["c"], 0.6),
            rule(&["a"], &["d"], 0.3),
        ];
        let patterns = [
            pattern(&["a", "b"], 3),
            pattern(&["a", "c"], 3),
            pattern(&["a", "d"], 3),
        ];
        let combined = combine(&rules, &patterns, 4);
        let history = vec!["a".to_string()];
        for k in 1..4 {
            let smaller = predict_next(&combined, "u", &history, k);
            let larger = predict_next(&combined, "u", &history, k + 1);
            assert_eq!(smaller.predictions[..], larger.predictions[..smaller.predictions.len()]);
        }
    }

    #[test]
    fn unrelated_patterns_do_not_change_prediction() {
        let mut combined = combine(&[rule(&["a"], &["b"], 0.75)], &[pattern(&["a", "b"], 2)], 4);
        let baseline = predict_next(&combined, "u", &["a".to_string()], 3);
        combined.extend(combine(&[rule(&["x"], &["y"], 0.99)], &[pattern(&["x", "y"], 4)], 4));
        assert_eq!(predict_next(&combined, "u", &["a".to_string()], 3), baseline);
    }

    #[test]
    fn ties_rank_lexicographically() {
        let rules = [rule(&["a"], &["d"], 0.5), rule(&["a"], &["c"], 0.5)];
        let patterns = [pattern(&["a", "d"], 2), pattern(&["a", "c"], 2)];
        let combined = combine(&rules, &patterns, 4);
        let p = predict_next(&combined, "u", &["a".to_string()], 2);
        let items: Vec<&str> = p.predictions.iter().map(|r| r.item.as_str()).collect();
        assert_eq!(items, vec!["c", "d"]);
    }
}
