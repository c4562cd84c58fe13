//! Shared helpers for integration tests: seeded random dataset generators
//! and brute-force oracles that restate the mining contracts directly,
//! independent of the library's algorithms.

#![allow(dead_code)]

use std::collections::{BTreeMap, HashMap, HashSet};

use basketmine::txstore::{SequenceDB, SequenceElement, TransactionDB};
use chrono::NaiveDateTime;
use rand::Rng;
use rand_chacha::ChaCha12Rng;

/// A random transaction database with at most `max_items` distinct items and
/// at most `max_baskets` baskets (at least one of each).
pub fn random_db(rng: &mut ChaCha12Rng, max_items: usize, max_baskets: usize) -> TransactionDB {
    let n_items = rng.random_range(1..=max_items);
    let n_baskets = rng.random_range(1..=max_baskets);
    let mut csv = String::from("user_id,transaction_id,item,timestamp\n");
    for t in 0..n_baskets {
        let size = rng.random_range(1..=n_items.min(6));
        for _ in 0..size {
            let item = rng.random_range(0..n_items);
            csv.push_str(&format!("u{t},t{t:03},i{item:02},2023-01-01T00:00:00\n"));
        }
    }
    TransactionDB::parse_csv(&csv).expect("generated CSV is well-formed")
}

/// Every itemset whose containment count `c` satisfies `c / n >= min_support`,
/// found by checking all 2^|universe|-1 subsets against every basket.
/// Returned as (sorted items, count), ordered by (length, lexicographic).
pub fn brute_force_itemsets(db: &TransactionDB, min_support: f64) -> Vec<(Vec<String>, u64)> {
    let universe = db.item_universe();
    let u = universe.len();
    assert!(u <= 16, "oracle is exponential in the universe size");
    let n = db.n_baskets() as f64;
    let basket_masks: Vec<u32> = db
        .baskets()
        .values()
        .map(|b| {
            b.items
                .iter()
                .map(|i| 1u32 << universe.binary_search(i).expect("item in universe"))
                .fold(0, |acc, bit| acc | bit)
        })
        .collect();

    let mut out = Vec::new();
    for mask in 1u32..(1u32 << u) {
        let count = basket_masks.iter().filter(|&&bm| bm & mask == mask).count() as u64;
        if count as f64 / n >= min_support {
            let items: Vec<String> = (0..u)
                .filter(|j| mask & (1 << j) != 0)
                .map(|j| universe[j].clone())
                .collect();
            out.push((items, count));
        }
    }
    out.sort_by(|a, b| a.0.len().cmp(&b.0.len()).then_with(|| a.0.cmp(&b.0)));
    out
}

/// A random sequence database: at most 8 users, 6 transactions per user,
/// 5 distinct items, 2 items per transaction (flattened length <= 12, so
/// the subsequence oracle stays cheap).
pub fn random_sdb(rng: &mut ChaCha12Rng) -> SequenceDB {
    let n_users = rng.random_range(1..=8);
    let n_items = rng.random_range(1..=5);
    let mut sequences = BTreeMap::new();
    for u in 0..n_users {
        let n_elements = rng.random_range(1..=6);
        let elements: Vec<SequenceElement> = (0..n_elements)
            .map(|e| {
                let size = rng.random_range(1..=2);
                let items = (0..size)
                    .map(|_| format!("s{}", rng.random_range(0..n_items)))
                    .collect();
                SequenceElement {
                    transaction_id: format!("t{e}"),
                    timestamp: NaiveDateTime::parse_from_str(
                        &format!("2023-01-01T00:{e:02}:00"),
                        "%Y-%m-%dT%H:%M:%S",
                    )
                    .unwrap(),
                    items,
                }
            })
            .collect();
        sequences.insert(format!("u{u}"), elements);
    }
    SequenceDB::from_elements(sequences)
}

/// Every pattern contained (as an order-preserving subsequence of the
/// flattened per-user item sequence) in at least `min_count` user sequences,
/// found by enumerating all subsequences of every user. Returned as
/// (elements, count), ordered by (length, lexicographic).
pub fn brute_force_patterns(sdb: &SequenceDB, min_count: u64) -> Vec<(Vec<String>, u64)> {
    let mut counts: HashMap<Vec<String>, u64> = HashMap::new();
    for elements in sdb.sequences().values() {
        let flat: Vec<&String> = elements.iter().flat_map(|e| &e.items).collect();
        let len = flat.len();
        assert!(len <= 20, "oracle is exponential in the sequence length");
        let mut seen: HashSet<Vec<&String>> = HashSet::new();
        for mask in 1u32..(1u32 << len) {
            let sub: Vec<&String> = (0..len)
                .filter(|j| mask & (1 << j) != 0)
                .map(|j| flat[j])
                .collect();
            seen.insert(sub);
        }
        for sub in seen {
            *counts.entry(sub.into_iter().cloned().collect()).or_insert(0) += 1;
        }
    }
    let mut out: Vec<(Vec<String>, u64)> = counts
        .into_iter()
        .filter(|&(_, c)| c >= min_count.max(1))
        .collect();
    out.sort_by(|a, b| a.0.len().cmp(&b.0.len()).then_with(|| a.0.cmp(&b.0)));
    out
}
