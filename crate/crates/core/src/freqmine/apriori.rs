//! Level-wise Apriori miner.
//!
//! Candidates of length k are generated only from frequent (k-1)-itemsets
//! (join on a shared k-2 prefix) and pruned unless every (k-1)-subset is
//! frequent, so no candidate with an infrequent subset is ever counted.

use std::collections::{HashMap, HashSet};

use super::{encode, finalize_itemsets, min_count, FrequentItemset, MineError, MiningParams};
use crate::txstore::TransactionDB;

/// Mines all itemsets with support >= `p.min_support`.
pub fn apriori(db: &TransactionDB, p: &MiningParams) -> Result<Vec<FrequentItemset>, MineError> {
    p.validate()?;
    if db.is_empty() {
        return Err(MineError::EmptyDatabase);
    }
    let enc = encode(db);
    let n_baskets = enc.baskets.len();
    let minc = min_count(p.min_support, n_baskets);
    let max_len = p.max_len.unwrap_or(usize::MAX);

    let mut found: Vec<(Vec<u32>, u64)> = Vec::new();

    // Level 1: plain frequency count.
    let mut singles: HashMap<u32, u64> = HashMap::new();
    for basket in &enc.baskets {
        for &item in basket {
            *singles.entry(item).or_insert(0) += 1;
        }
    }
    let mut level: Vec<Vec<u32>> = singles
        .iter()
        .filter(|&(_, &c)| c >= minc)
        .map(|(&item, _)| vec![item])
        .collect();
    level.sort();
    for ids in &level {
        found.push((ids.clone(), singles[&ids[0]]));
    }

    let mut k = 2;
    while !level.is_empty() && k <= max_len {
        let candidates = join_and_prune(&level, k);
        if candidates.is_empty() {
            break;
        }
        let mut counts: HashMap<&[u32], u64> = candidates.iter().map(|c| (c.as_slice(), 0)).collect();
        let mut scratch = Vec::with_capacity(k);
        for basket in &enc.baskets {
            if basket.len() >= k {
                count_subsets(basket, k, &mut scratch, &mut counts);
            }
        }
        level = candidates
            .iter()
            .filter(|c| counts[c.as_slice()] >= minc)
            .cloned()
            .collect();
        for ids in &level {
            found.push((ids.clone(), counts[ids.as_slice()]));
        }
        k += 1;
    }

    Ok(finalize_itemsets(found, &enc.universe, n_baskets))
}

/// Joins frequent (k-1)-itemsets sharing their first k-2 items, then prunes
/// candidates with any infrequent (k-1)-subset. `prev` must be sorted.
fn join_and_prune(prev: &[Vec<u32>], k: usize) -> Vec<Vec<u32>> {
    let prev_set: HashSet<&[u32]> = prev.iter().map(|v| v.as_slice()).collect();
    let mut candidates = Vec::new();
    for i in 0..prev.len() {
        for j in (i + 1)..prev.len() {
            if prev[i][..k - 2] != prev[j][..k - 2] {
                break; // sorted input: once prefixes diverge, later j's diverge too
            }
            let mut cand = prev[i].clone();
            cand.push(prev[j][k - 2]);
            if all_subsets_frequent(&cand, &prev_set) {
                candidates.push(cand);
            }
        }
    }
    candidates
}

fn all_subsets_frequent(cand: &[u32], prev_set: &HashSet<&[u32]>) -> bool {
    let mut subset = Vec::with_capacity(cand.len() - 1);
    for skip in 0..cand.len() {
        subset.clear();
        subset.extend(cand.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &v)| v));
        if !prev_set.contains(subset.as_slice()) {
            return false;
        }
    }
    true
}

/// Increments the count of every k-subset of `basket` present in `counts`.
fn count_subsets(basket: &[u32], k: usize, scratch: &mut Vec<u32>, counts: &mut HashMap<&[u32], u64>) {
    fn recurse(basket: &[u32], k: usize, start: usize, scratch: &mut Vec<u32>, counts: &mut HashMap<&[u32], u64>) {
        if scratch.len() == k {
            if let Some(c) = counts.get_mut(scratch.as_slice()) {
                *c += 1;
            }
            return;
        }
        let remaining = k - scratch.len();
        for i in start..=basket.len() - remaining {
            scratch.push(basket[i]);
            recurse(basket, k, i + 1, scratch, counts);
            scratch.pop();
        }
    }
    scratch.clear();
    recurse(basket, k, 0, scratch, counts);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::txstore::TransactionDB;

    pub(crate) fn db_from_baskets(baskets: &[&[&str]]) -> TransactionDB {
        let mut text = String::from("user_id,transaction_id,item,timestamp\n");
        for (i, basket) in baskets.iter().enumerate() {
            for item in *basket {
                text.push_str(&format!("u1,t{:03},{item},2023-01-01T00:00:00\n", i + 1));
            }
        }
        TransactionDB::parse_csv(&text).unwrap()
    }

    fn params(min_support: f64) -> MiningParams {
        MiningParams { min_support, ..MiningParams::default() }
    }

    fn itemsets(result: &[FrequentItemset]) -> Vec<(Vec<&str>, u64)> {
        result
            .iter()
            .map(|f| (f.items.iter().map(|s| s.as_str()).collect(), f.count))
            .collect()
    }

    #[test]
    fn five_basket_example() {
        let db = db_from_baskets(&[
            &["a", "b", "c"],
            &["a", "b"],
            &["a", "c"],
            &["b", "c"],
            &["a", "b", "c"],
        ]);
        let got = apriori(&db, &params(0.6)).unwrap();
        assert_eq!(
            itemsets(&got),
            vec![
                (vec!["a"], 4),
                (vec!["b"], 4),
                (vec!["c"], 4),
                (vec!["a", "b"], 3),
                (vec!["a", "c"], 3),
                (vec!["b", "c"], 3),
            ]
        );
        for f in &got {
            assert!((f.support - f.count as f64 / 5.0).abs() < 1e-12);
        }
    }

    #[test]
    fn tiny_min_support_single_basket() {
        let db = db_from_baskets(&[&["a"]]);
        let got = apriori(&db, &params(1e-9)).unwrap();
        assert_eq!(itemsets(&got), vec![(vec!["a"], 1)]);
        assert_eq!(got[0].support, 1.0);
    }

    #[test]
    fn min_support_one_keeps_universal_itemsets_only() {
        let db = db_from_baskets(&[&["a", "b"], &["a"], &["a", "c"]]);
        let got = apriori(&db, &params(1.0)).unwrap();
        assert_eq!(itemsets(&got), vec![(vec!["a"], 3)]);
    }

    #[test]
    fn empty_db_is_an_error() {
        let db = TransactionDB::from_records(vec![]);
        assert_eq!(apriori(&db, &params(0.5)), Err(MineError::EmptyDatabase));
    }

    #[test]
    fn max_len_caps_itemset_length() {
        let db = db_from_baskets(&[&["a", "b", "c"], &["a", "b", "c"]]);
        let p = MiningParams { min_support: 0.5, max_len: Some(2), ..MiningParams::default() };
        let got = apriori(&db, &p).unwrap();
        assert!(got.iter().all(|f| f.items.len() <= 2));
        assert_eq!(got.len(), 6);
    }

    #[test]
    fn rejects_invalid_params() {
        let db = db_from_baskets(&[&["a"]]);
        let p = MiningParams { min_support: 0.0, ..MiningParams::default() };
        assert!(matches!(apriori(&db, &p), Err(MineError::InvalidParams(_))));
        let p = MiningParams { min_support: 1.5, ..MiningParams::default() };
        assert!(matches!(apriori(&db, &p), Err(MineError::InvalidParams(_))));
    }

    #[test]
    fn downward_closure_holds() {
        let db = db_from_baskets(&[
            &["a", "b", "c", "d"],
            &["a", "b", "c"],
            &["a", "b"],
            &["b", "c", "d"],
            &["a", "c", "d"],
        ]);
        let got = apriori(&db, &params(0.4)).unwrap();
        let by_items: std::collections::HashMap<Vec<String>, u64> =
            got.iter().map(|f| (f.items.clone(), f.count)).collect();
        for f in &got {
            for skip in 0..f.items.len() {
                if f.items.len() == 1 {
                    continue;
                }
                let subset: Vec<String> = f
                    .items
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| i != skip)
                    .map(|(_, s)| s.clone())
                    .collect();
                let sub_count = by_items.get(&subset).copied().unwrap_or(0);
                assert!(sub_count >= f.count, "subset {subset:?} of {:?}", f.items);
            }
        }
    }
}
