//! FP-Growth miner.
//!
//! Builds a prefix tree of baskets with items ordered by descending
//! frequency, then mines it recursively: for each item (least frequent
//! first) it emits the itemset, extracts the conditional pattern base from
//! the header-table node links, and rebuilds a smaller conditional tree.
//! Output is identical to [`apriori`](super::apriori).

use std::collections::HashMap;

use super::{encode, finalize_itemsets, min_count, FrequentItemset, MineError, MiningParams};
use crate::txstore::TransactionDB;

/// Mines all itemsets with support >= `p.min_support`.
pub fn fpgrowth(db: &TransactionDB, p: &MiningParams) -> Result<Vec<FrequentItemset>, MineError> {
    p.validate()?;
    if db.is_empty() {
        return Err(MineError::EmptyDatabase);
    }
    let enc = encode(db);
    let n_baskets = enc.baskets.len();
    let minc = min_count(p.min_support, n_baskets);
    let max_len = p.max_len.unwrap_or(usize::MAX);

    let weighted: Vec<(Vec<u32>, u64)> = enc.baskets.iter().map(|b| (b.clone(), 1)).collect();
    let mut found = Vec::new();
    let mut suffix = Vec::new();
    mine(&weighted, minc, max_len, &mut suffix, &mut found);

    Ok(finalize_itemsets(found, &enc.universe, n_baskets))
}

struct Node {
    item: u32,
    count: u64,
    parent: usize,
    /// Child edges as (item, node index); linear scan is fine at tree fanout.
    children: Vec<(u32, usize)>,
}

/// FP-tree over one (possibly conditional) weighted transaction set.
/// `nodes[0]` is the root; `header` links every node of an item.
struct FpTree {
    nodes: Vec<Node>,
    header: Vec<(u32, Vec<usize>)>,
}

impl FpTree {
    /// Builds the tree, keeping only items with weighted count >= `minc`.
    /// Path items are ordered by (count desc, id asc) so frequent items
    /// share prefixes.
    fn build(transactions: &[(Vec<u32>, u64)], minc: u64) -> FpTree {
        let mut item_counts: HashMap<u32, u64> = HashMap::new();
        for (items, weight) in transactions {
            for &item in items {
                *item_counts.entry(item).or_insert(0) += weight;
            }
        }
        let mut rank: Vec<(u32, u64)> = item_counts
            .iter()
            .filter(|&(_, &c)| c >= minc)
            .map(|(&i, &c)| (i, c))
            .collect();
        rank.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
        let order: HashMap<u32, usize> = rank.iter().enumerate().map(|(pos, &(i, _))| (i, pos)).collect();

        let mut tree = FpTree {
            nodes: vec![Node { item: u32::MAX, count: 0, parent: usize::MAX, children: Vec::new() }],
            header: rank.iter().map(|&(i, _)| (i, Vec::new())).collect(),
        };
        let mut path = Vec::new();
        for (items, weight) in transactions {
            path.clear();
            path.extend(items.iter().copied().filter(|i| order.contains_key(i)));
            path.sort_by_key(|i| order[i]);
            tree.insert(&path, *weight, &order);
        }
        tree
    }

    fn insert(&mut self, path: &[u32], weight: u64, order: &HashMap<u32, usize>) {
        let mut at = 0;
        for &item in path {
            match self.nodes[at].children.iter().find(|&&(i, _)| i == item) {
                Some(&(_, child)) => {
                    self.nodes[child].count += weight;
                    at = child;
                }
                None => {
                    let child = self.nodes.len();
                    self.nodes.push(Node { item, count: weight, parent: at, children: Vec::new() });
                    self.nodes[at].children.push((item, child));
                    self.header[order[&item]].1.push(child);
                    at = child;
                }
            }
        }
    }

    /// Prefix paths above every node of `header_pos`, weighted by that
    /// node's count.
    fn conditional_pattern_base(&self, header_pos: usize) -> Vec<(Vec<u32>, u64)> {
        let mut base = Vec::new();
        for &node_idx in &self.header[header_pos].1 {
            let weight = self.nodes[node_idx].count;
            let mut path = Vec::new();
            let mut at = self.nodes[node_idx].parent;
            while at != 0 {
                path.push(self.nodes[at].item);
                at = self.nodes[at].parent;
            }
            if !path.is_empty() {
                path.reverse();
                base.push((path, weight));
            }
        }
        base
    }
}

fn mine(
    transactions: &[(Vec<u32>, u64)],
    minc: u64,
    max_len: usize,
    suffix: &mut Vec<u32>,
    out: &mut Vec<(Vec<u32>, u64)>,
) {
    let tree = FpTree::build(transactions, minc);
    // Least frequent first: its conditional base covers complete prefixes.
    for pos in (0..tree.header.len()).rev() {
        let (item, ref nodes) = tree.header[pos];
        let total: u64 = nodes.iter().map(|&n| tree.nodes[n].count).sum();
        debug_assert!(total >= minc);
        suffix.push(item);
        let mut itemset = suffix.clone();
        itemset.sort_unstable();
        out.push((itemset, total));
        if suffix.len() < max_len {
            let base = tree.conditional_pattern_base(pos);
            if !base.is_empty() {
                mine(&base, minc, max_len, suffix, out);
            }
        }
        suffix.pop();
    }
}
