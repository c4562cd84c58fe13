//! Frequent-itemset mining (Apriori and FP-Growth) and association rules.
//!
//! Both miners return exactly the itemsets whose support reaches
//! `min_support`, with exact absolute counts, sorted by (length,
//! lexicographic items). The support threshold is applied as an absolute
//! count: the smallest `c` with `c / n_baskets >= min_support`, so float
//! boundary cases behave identically everywhere.

mod apriori;
mod fptree;
mod metrics;
mod rules;

pub use apriori::apriori;
pub use fptree::fpgrowth;
pub use metrics::{rule_metrics, MetricError, RuleMetrics};
pub use rules::gen_rules;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::txstore::TransactionDB;

/// Mining thresholds. Defaults match the stock pipeline: support 0.005,
/// confidence 0.3, unlimited itemset length.
#[derive(Debug, Clone, PartialEq)]
pub struct MiningParams {
    /// Minimum support as a fraction of basket count, in (0, 1].
    pub min_support: f64,
    /// Minimum rule confidence, in (0, 1].
    pub min_confidence: f64,
    /// Maximum itemset length; `None` means unlimited.
    pub max_len: Option<usize>,
}

impl Default for MiningParams {
    fn default() -> Self {
        MiningParams {
            min_support: 0.005,
            min_confidence: 0.3,
            max_len: None,
        }
    }
}

impl MiningParams {
    pub fn validate(&self) -> Result<(), MineError> {
        if !(self.min_support > 0.0 && self.min_support <= 1.0) {
            return Err(MineError::InvalidParams(
                "min_support must lie in (0, 1]".into(),
            ));
        }
        if !(self.min_confidence > 0.0 && self.min_confidence <= 1.0) {
            return Err(MineError::InvalidParams(
                "min_confidence must lie in (0, 1]".into(),
            ));
        }
        if self.max_len == Some(0) {
            return Err(MineError::InvalidParams("max_len must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MineError {
    #[error("empty database")]
    EmptyDatabase,
    #[error("invalid mining params: {0}")]
    InvalidParams(String),
    #[error("support missing for subset {{{0}}}")]
    MissingSubsetSupport(String),
}

/// An itemset with support at or above the mining threshold.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrequentItemset {
    /// Items sorted ascending.
    pub items: Vec<String>,
    /// Fraction of baskets containing the itemset: `count / n_baskets`.
    pub support: f64,
    /// Absolute number of containing baskets.
    pub count: u64,
}

/// An association rule with the six quality metrics.
///
/// `conviction` may be `+inf` (exact implication); it serializes to the JSON
/// string `"inf"` in that case.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AssociationRule {
    /// Antecedent items, sorted ascending.
    pub antecedent: Vec<String>,
    /// Consequent items, sorted ascending; disjoint from the antecedent.
    pub consequent: Vec<String>,
    pub support: f64,
    pub confidence: f64,
    pub lift: f64,
    pub leverage: f64,
    #[serde(
        serialize_with = "serialize_conviction",
        deserialize_with = "deserialize_conviction"
    )]
    pub conviction: f64,
    pub zhangs_metric: f64,
}

fn serialize_conviction<S: serde::Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
    if v.is_infinite() {
        s.serialize_str("inf")
    } else {
        s.serialize_f64(*v)
    }
}

fn deserialize_conviction<'de, D: serde::Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
    struct ConvictionVisitor;
    impl serde::de::Visitor<'_> for ConvictionVisitor {
        type Value = f64;
        fn expecting(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
            f.write_str("a number or the string \"inf\"")
        }
        fn visit_f64<E: serde::de::Error>(self, v: f64) -> Result<f64, E> {
            Ok(v)
        }
        fn visit_u64<E: serde::de::Error>(self, v: u64) -> Result<f64, E> {
            Ok(v as f64)
        }
        fn visit_i64<E: serde::de::Error>(self, v: i64) -> Result<f64, E> {
            Ok(v as f64)
        }
        fn visit_str<E: serde::de::Error>(self, v: &str) -> Result<f64, E> {
            match v {
                "inf" => Ok(f64::INFINITY),
                other => Err(E::custom(format!("unexpected conviction string `{other}`"))),
            }
        }
    }
    d.deserialize_any(ConvictionVisitor)
}

/// Smallest absolute count `c >= 1` with `c / n >= min_support`, evaluated in
/// f64 so the threshold agrees exactly with the reported support fractions.
pub(crate) fn min_count(min_support: f64, n_baskets: usize) -> u64 {
    let n = n_baskets as f64;
    let mut c = (min_support * n).ceil() as i64;
    if c < 1 {
        c = 1;
    }
    while c > 1 && ((c - 1) as f64) / n >= min_support {
        c -= 1;
    }
    while ((c as f64) / n) < min_support {
        c += 1;
    }
    c as u64
}

/// Baskets re-encoded as sorted item-id vectors. Ids index the item
/// universe, which is sorted, so id order equals lexicographic item order.
pub(crate) struct EncodedDb {
    pub baskets: Vec<Vec<u32>>,
    pub universe: Vec<String>,
}

pub(crate) fn encode(db: &TransactionDB) -> EncodedDb {
    let universe = db.item_universe().to_vec();
    let baskets = db
        .baskets()
        .values()
        .map(|b| {
            b.items
                .iter()
                .map(|item| universe.binary_search(item).expect("item in universe") as u32)
                .collect()
        })
        .collect();
    EncodedDb { baskets, universe }
}

pub(crate) fn decode_items(universe: &[String], ids: &[u32]) -> Vec<String> {
    ids.iter().map(|&i| universe[i as usize].clone()).collect()
}

/// Canonical output ordering shared by both miners: (length, lexicographic).
pub(crate) fn finalize_itemsets(
    mut found: Vec<(Vec<u32>, u64)>,
    universe: &[String],
    n_baskets: usize,
) -> Vec<FrequentItemset> {
    found.sort_by(|a, b| a.0.len().cmp(&b.0.len()).then_with(|| a.0.cmp(&b.0)));
    found
        .into_iter()
        .map(|(ids, count)| FrequentItemset {
            items: decode_items(universe, &ids),
            support: count as f64 / n_baskets as f64,
            count,
        })
        .collect()
}
