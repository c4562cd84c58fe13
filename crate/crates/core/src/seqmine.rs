//! Sequential pattern mining with PrefixSpan.
//!
//! Each user's transaction sequence is flattened to single-item steps (a
//! transaction's items expand, sorted, into consecutive steps), and patterns
//! are mined by recursive prefix projection: for the current prefix, every
//! sequence is represented by the position right after the prefix's earliest
//! match, and only items frequent in those suffixes extend the prefix.

use serde::{Deserialize, Serialize};

use crate::txstore::SequenceDB;

/// PrefixSpan thresholds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeqParams {
    /// Minimum absolute support: the number of distinct user sequences that
    /// must contain a pattern. Values below 1 behave as 1.
    pub min_count: u64,
    /// Maximum pattern length; `None` means unlimited.
    pub max_len: Option<usize>,
}

impl Default for SeqParams {
    fn default() -> Self {
        SeqParams { min_count: 10, max_len: None }
    }
}

/// An ordered purchase pattern and the number of user sequences containing
/// it as an (order-preserving, not necessarily contiguous) subsequence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SequentialPattern {
    #[serde(rename = "pattern")]
    pub elements: Vec<String>,
    pub count: u64,
}

/// Mines every pattern contained in at least `p.min_count` user sequences,
/// sorted by (length, lexicographic elements). Each user sequence counts at
/// most once per pattern, no matter how often the pattern recurs within it.
pub fn prefixspan(sdb: &SequenceDB, p: &SeqParams) -> Vec<SequentialPattern> {
    let minc = p.min_count.max(1);
    let max_len = p.max_len.unwrap_or(usize::MAX);
    if max_len == 0 {
        return Vec::new();
    }

    // Item universe, sorted: item-id order equals lexicographic order.
    let mut universe: Vec<&str> = sdb
        .sequences()
        .values()
        .flatten()
        .flat_map(|e| e.items.iter().map(|s| s.as_str()))
        .collect();
    universe.sort_unstable();
    universe.dedup();

    let seqs: Vec<Vec<u32>> = sdb
        .sequences()
        .values()
        .map(|elements| {
            elements
                .iter()
                .flat_map(|e| &e.items)
                .map(|item| universe.binary_search(&item.as_str()).expect("item in universe") as u32)
                .collect()
        })
        .collect();

    let initial: Vec<(usize, usize)> = (0..seqs.len()).map(|i| (i, 0)).collect();
    let mut prefix = Vec::new();
    let mut found = Vec::new();
    project(&seqs, &initial, minc, max_len, &mut prefix, &mut found);

    found.sort_by(|a, b| a.0.len().cmp(&b.0.len()).then_with(|| a.0.cmp(&b.0)));
    found
        .into_iter()
        .map(|(ids, count)| SequentialPattern {
            elements: ids.iter().map(|&i| universe[i as usize].to_string()).collect(),
            count,
        })
        .collect()
}

/// One projection step: `proj` holds, per live sequence, the index of its
/// first unconsumed step after matching the current prefix.
fn project(
    seqs: &[Vec<u32>],
    proj: &[(usize, usize)],
    minc: u64,
    max_len: usize,
    prefix: &mut Vec<u32>,
    found: &mut Vec<(Vec<u32>, u64)>,
) {
    // Count each item once per projected sequence.
    let mut counts: std::collections::HashMap<u32, u64> = std::collections::HashMap::new();
    let mut seen: std::collections::HashSet<u32> = std::collections::HashSet::new();
    for &(seq, start) in proj {
        seen.clear();
        for &item in &seqs[seq][start..] {
            if seen.insert(item) {
                *counts.entry(item).or_insert(0) += 1;
            }
        }
    }
    let mut frequent: Vec<(u32, u64)> =
        counts.into_iter().filter(|&(_, c)| c >= minc).collect();
    frequent.sort_unstable();

    for (item, count) in frequent {
        prefix.push(item);
        found.push((prefix.clone(), count));
        if prefix.len() < max_len {
            // Earliest-match projection: position after the first occurrence.
            let next: Vec<(usize, usize)> = proj
                .iter()
                .filter_map(|&(seq, start)| {
                    seqs[seq][start..]
                        .iter()
                        .position(|&i| i == item)
                        .map(|off| (seq, start + off + 1))
                })
                .collect();
            project(seqs, &next, minc, max_len, prefix, found);
        }
        prefix.pop();
    }
}
