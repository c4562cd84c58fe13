//! Canonical data model for transaction logs.
//!
//! A log is a flat list of `(user, transaction, item, timestamp)` records.
//! [`TransactionDB`] groups records into per-transaction baskets with set
//! semantics (duplicate items within a transaction collapse to one) and keeps
//! a sorted universe of distinct items. Derived views: per-user ordered
//! sequences ([`SequenceDB`]) and a one-hot basket matrix ([`BasketMatrix`]).

use std::collections::BTreeMap;

use chrono::NaiveDateTime;
use thiserror::Error;

/// Timestamp format used everywhere: ISO-8601 without timezone.
pub const TIMESTAMP_FORMAT: &str = "%Y-%m-%dT%H:%M:%S";

/// CSV header expected by [`TransactionDB::parse_csv`].
pub const CSV_HEADER: &str = "user_id,transaction_id,item,timestamp";

/// One purchased item: a single row of the transaction log.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Record {
    pub user_id: String,
    pub transaction_id: String,
    pub item: String,
    pub timestamp: NaiveDateTime,
}

/// A transaction's deduplicated item set plus its owner and earliest timestamp.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Basket {
    pub user_id: String,
    /// Earliest record timestamp of the transaction.
    pub timestamp: NaiveDateTime,
    /// Distinct items, sorted ascending.
    pub items: Vec<String>,
}

/// Immutable transaction store with derived indexes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransactionDB {
    records: Vec<Record>,
    baskets: BTreeMap<String, Basket>,
    item_universe: Vec<String>,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("line 1: expected header `{CSV_HEADER}`")]
    BadHeader,
    #[error("line {0}: wrong column count")]
    MalformedRow(usize),
    #[error("line {0}: unparseable timestamp")]
    BadTimestamp(usize),
    #[error("line {0}: empty item")]
    EmptyItem(usize),
}

impl TransactionDB {
    /// Builds the store from raw records, deriving baskets and the item
    /// universe. Record order is preserved.
    pub fn from_records(records: Vec<Record>) -> Self {
        let mut baskets: BTreeMap<String, Basket> = BTreeMap::new();
        for rec in &records {
            let basket = baskets
                .entry(rec.transaction_id.clone())
                .or_insert_with(|| Basket {
                    user_id: rec.user_id.clone(),
                    timestamp: rec.timestamp,
                    items: Vec::new(),
                });
            if rec.timestamp < basket.timestamp {
                basket.timestamp = rec.timestamp;
            }
            if !basket.items.contains(&rec.item) {
                basket.items.push(rec.item.clone());
            }
        }
        let mut item_universe: Vec<String> = Vec::new();
        for basket in baskets.values_mut() {
            basket.items.sort();
            for item in &basket.items {
                if !item_universe.contains(item) {
                    item_universe.push(item.clone());
                }
            }
        }
        item_universe.sort();
        TransactionDB {
            records,
            baskets,
            item_universe,
        }
    }

    /// Parses the canonical CSV layout: header `user_id,transaction_id,item,timestamp`,
    /// one row per purchased item, timestamps as `YYYY-MM-DDTHH:MM:SS`.
    /// Accepts `\n` or `\r\n` terminators. Any bad row aborts the parse.
    pub fn parse_csv(text: &str) -> Result<Self, ParseError> {
        let mut lines = text.split('\n').enumerate();
        let header = match lines.next() {
            Some((_, h)) => h.trim_end_matches('\r'),
            None => return Err(ParseError::BadHeader),
        };
        if header != CSV_HEADER {
            return Err(ParseError::BadHeader);
        }
        let mut records = Vec::new();
        for (idx, line) in lines {
            let line = line.trim_end_matches('\r');
            if line.is_empty() {
                continue;
            }
            let lineno = idx + 1;
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != 4 {
                return Err(ParseError::MalformedRow(lineno));
            }
            if fields[2].is_empty() {
                return Err(ParseError::EmptyItem(lineno));
            }
            let timestamp = NaiveDateTime::parse_from_str(fields[3], TIMESTAMP_FORMAT)
                .map_err(|_| ParseError::BadTimestamp(lineno))?;
            records.push(Record {
                user_id: fields[0].to_string(),
                transaction_id: fields[1].to_string(),
                item: fields[2].to_string(),
                timestamp,
            });
        }
        Ok(TransactionDB::from_records(records))
    }

    /// Serializes the records view back to the canonical CSV layout.
    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(64 * (self.records.len() + 1));
        out.push_str(CSV_HEADER);
        out.push('\n');
        for rec in &self.records {
            out.push_str(&rec.user_id);
            out.push(',');
            out.push_str(&rec.transaction_id);
            out.push(',');
            out.push_str(&rec.item);
            out.push(',');
            out.push_str(&rec.timestamp.format(TIMESTAMP_FORMAT).to_string());
            out.push('\n');
        }
        out
    }

    pub fn records(&self) -> &[Record] {
        &self.records
    }

    /// Baskets keyed by transaction id, ascending.
    pub fn baskets(&self) -> &BTreeMap<String, Basket> {
        &self.baskets
    }

    pub fn n_baskets(&self) -> usize {
        self.baskets.len()
    }

    /// Distinct items, sorted ascending.
    pub fn item_universe(&self) -> &[String] {
        &self.item_universe
    }

    pub fn is_empty(&self) -> bool {
        self.baskets.is_empty()
    }

    /// Distinct user ids, sorted ascending.
    pub fn users(&self) -> Vec<String> {
        let mut users: Vec<String> = self.baskets.values().map(|b| b.user_id.clone()).collect();
        users.sort();
        users.dedup();
        users
    }

    /// All items a user has ever purchased, ordered by first purchase
    /// (basket timestamp, then transaction id, then item order within the basket).
    pub fn user_history(&self, user_id: &str) -> Vec<String> {
        let mut baskets: Vec<&Basket> = self
            .baskets
            .values()
            .filter(|b| b.user_id == user_id)
            .collect();
        baskets.sort_by_key(|basket| basket.timestamp);
        let mut history = Vec::new();
        for basket in baskets {
            for item in &basket.items {
                if !history.contains(item) {
                    history.push(item.clone());
                }
            }
        }
        history
    }
}

/// One element of a user's purchase sequence: a whole transaction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SequenceElement {
    pub transaction_id: String,
    pub timestamp: NaiveDateTime,
    /// Distinct items, sorted ascending.
    pub items: Vec<String>,
}

/// Per-user ordered purchase sequences, one element per transaction.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SequenceDB {
    sequences: BTreeMap<String, Vec<SequenceElement>>,
}

impl SequenceDB {
    /// Builds a SequenceDB from raw per-user elements, restoring the
    /// invariants: elements re-sorted by (timestamp, transaction id), items
    /// within each element sorted and deduplicated, empty elements and empty
    /// users dropped.
    pub fn from_elements(sequences: BTreeMap<String, Vec<SequenceElement>>) -> SequenceDB {
        let sequences = sequences
            .into_iter()
            .filter_map(|(user, mut elements)| {
                for e in &mut elements {
                    e.items.sort();
                    e.items.dedup();
                }
                elements.retain(|e| !e.items.is_empty());
                elements.sort_by(|a, b| {
                    a.timestamp
                        .cmp(&b.timestamp)
                        .then_with(|| a.transaction_id.cmp(&b.transaction_id))
                });
                (!elements.is_empty()).then_some((user, elements))
            })
            .collect();
        SequenceDB { sequences }
    }

    /// Sequences keyed by user id, ascending.
    pub fn sequences(&self) -> &BTreeMap<String, Vec<SequenceElement>> {
        &self.sequences
    }

    /// Number of user sequences.
    pub fn n_sequences(&self) -> usize {
        self.sequences.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sequences.is_empty()
    }
}

/// Groups baskets into per-user sequences ordered by
/// (timestamp, transaction id) ascending.
pub fn build_sequences(db: &TransactionDB) -> SequenceDB {
    let mut sequences: BTreeMap<String, Vec<SequenceElement>> = BTreeMap::new();
    for (txn_id, basket) in db.baskets() {
        sequences
            .entry(basket.user_id.clone())
            .or_default()
            .push(SequenceElement {
                transaction_id: txn_id.clone(),
                timestamp: basket.timestamp,
                items: basket.items.clone(),
            });
    }
    for elements in sequences.values_mut() {
        elements.sort_by(|a, b| {
            a.timestamp
                .cmp(&b.timestamp)
                .then_with(|| a.transaction_id.cmp(&b.transaction_id))
        });
    }
    SequenceDB { sequences }
}

/// Boolean transactions × items presence matrix.
///
/// Rows follow transaction ids sorted ascending; columns follow the item
/// universe order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasketMatrix {
    pub transaction_ids: Vec<String>,
    pub items: Vec<String>,
    pub rows: Vec<Vec<bool>>,
}

/// One-hot encodes the baskets of `db`.
pub fn one_hot(db: &TransactionDB) -> BasketMatrix {
    let items = db.item_universe().to_vec();
    let mut transaction_ids = Vec::with_capacity(db.n_baskets());
    let mut rows = Vec::with_capacity(db.n_baskets());
    for (txn_id, basket) in db.baskets() {
        transaction_ids.push(txn_id.clone());
        let row = items
            .iter()
            .map(|item| basket.items.binary_search(item).is_ok())
            .collect();
        rows.push(row);
    }
    BasketMatrix {
        transaction_ids,
        items,
        rows,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ts(s: &str) -> NaiveDateTime {
        NaiveDateTime::parse_from_str(s, TIMESTAMP_FORMAT).unwrap()
    }

    #[test]
    fn parse_header_only() {
        let db = TransactionDB::parse_csv("user_id,transaction_id,item,timestamp\n").unwrap();
        assert_eq!(db.records().len(), 0);
        assert_eq!(db.n_baskets(), 0);
        assert!(db.item_universe().is_empty());
    }

    #[test]
    fn parse_single_row() {
        let db = TransactionDB::parse_csv(
            "user_id,transaction_id,item,timestamp\nu1,t1,item_3,2023-01-01T09:15:00\n",
        )
        .unwrap();
        assert_eq!(db.n_baskets(), 1);
        assert_eq!(db.baskets()["t1"].items, vec!["item_3"]);
        assert_eq!(db.item_universe(), &["item_3".to_string()]);
    }

    #[test]
    fn parse_deduplicates_within_transaction() {
        let db = TransactionDB::parse_csv(
            "user_id,transaction_id,item,timestamp\n\
             u1,t1,item_3,2023-01-01T09:15:00\n\
             u1,t1,item_3,2023-01-01T09:15:00\n",
        )
        .unwrap();
        assert_eq!(db.records().len(), 2);
        assert_eq!(db.baskets()["t1"].items.len(), 1);
    }

    #[test]
    fn parse_accepts_crlf() {
        let db = TransactionDB::parse_csv(
            "user_id,transaction_id,item,timestamp\r\nu1,t1,a,2023-01-01T00:00:00\r\n",
        )
        .unwrap();
        assert_eq!(db.n_baskets(), 1);
    }

    #[test]
    fn parse_rejects_bad_header() {
        assert_eq!(
            TransactionDB::parse_csv("user,txn,item,ts\n"),
            Err(ParseError::BadHeader)
        );
    }

    #[test]
    fn parse_rejects_wrong_column_count() {
        let err = TransactionDB::parse_csv("user_id,transaction_id,item,timestamp\nu1,t1,a\n");
        assert_eq!(err, Err(ParseError::MalformedRow(2)));
    }

    #[test]
    fn parse_rejects_bad_timestamp() {
        let err = TransactionDB::parse_csv(
            "user_id,transaction_id,item,timestamp\nu1,t1,a,2023-13-01T00:00:00\n",
        );
        assert_eq!(err, Err(ParseError::BadTimestamp(2)));
    }

    #[test]
    fn parse_rejects_empty_item() {
        let err = TransactionDB::parse_csv(
            "user_id,transaction_id,item,timestamp\nu1,t1,,2023-01-01T00:00:00\n",
        );
        assert_eq!(err, Err(ParseError::EmptyItem(2)));
    }

    #[test]
    fn csv_round_trip_preserves_records() {
        let text = "user_id,transaction_id,item,timestamp\n\
                    u1,t1,b,2023-01-01T09:15:00\n\
                    u1,t1,a,2023-01-01T09:15:00\n\
                    u2,t2,a,2023-02-03T18:00:01\n";
        let db = TransactionDB::parse_csv(text).unwrap();
        assert_eq!(db.to_csv(), text);
    }

    #[test]
    fn basket_timestamp_is_earliest_record() {
        let db = TransactionDB::parse_csv(
            "user_id,transaction_id,item,timestamp\n\
             u1,t1,a,2023-01-01T10:00:00\n\
             u1,t1,b,2023-01-01T09:00:00\n",
        )
        .unwrap();
        assert_eq!(db.baskets()["t1"].timestamp, ts("2023-01-01T09:00:00"));
    }

    #[test]
    fn sequences_empty_db() {
        let db = TransactionDB::from_records(vec![]);
        assert!(build_sequences(&db).is_empty());
    }

    #[test]
    fn sequences_ordered_by_timestamp() {
        let db = TransactionDB::parse_csv(
            "user_id,transaction_id,item,timestamp\n\
             u1,t1,a,2023-01-01T09:00:00\n\
             u1,t2,b,2023-01-01T08:00:00\n",
        )
        .unwrap();
        let sdb = build_sequences(&db);
        let seq = &sdb.sequences()["u1"];
        assert_eq!(seq.len(), 2);
        assert_eq!(seq[0].items, vec!["b"]);
        assert_eq!(seq[1].items, vec!["a"]);
    }

    #[test]
    fn sequences_tie_broken_by_transaction_id() {
        let db = TransactionDB::parse_csv(
            "user_id,transaction_id,item,timestamp\n\
             u1,t2,b,2023-01-01T08:00:00\n\
             u1,t1,a,2023-01-01T08:00:00\n",
        )
        .unwrap();
        let sdb = build_sequences(&db);
        let seq = &sdb.sequences()["u1"];
        assert_eq!(seq[0].transaction_id, "t1");
        assert_eq!(seq[1].transaction_id, "t2");
    }

    #[test]
    fn sequences_partition_by_user() {
        let db = TransactionDB::parse_csv(
            "user_id,transaction_id,item,timestamp\n\
             u1,t1,a,2023-01-01T09:00:00\n\
             u2,t2,b,2023-01-01T10:00:00\n",
        )
        .unwrap();
        let sdb = build_sequences(&db);
        assert_eq!(sdb.n_sequences(), 2);
        assert_eq!(sdb.sequences()["u1"].len(), 1);
        assert_eq!(sdb.sequences()["u2"].len(), 1);
    }

    #[test]
    fn one_hot_direct_construction() {
        let db = TransactionDB::parse_csv(
            "user_id,transaction_id,item,timestamp\n\
             u1,t1,a,2023-01-01T09:00:00\n\
             u1,t1,b,2023-01-01T09:00:00\n\
             u2,t2,b,2023-01-01T10:00:00\n",
        )
        .unwrap();
        let m = one_hot(&db);
        assert_eq!(m.items, vec!["a", "b"]);
        assert_eq!(m.rows, vec![vec![true, true], vec![false, true]]);
    }

    #[test]
    fn one_hot_empty_db() {
        let m = one_hot(&TransactionDB::from_records(vec![]));
        assert!(m.rows.is_empty());
        assert!(m.items.is_empty());
    }

    #[test]
    fn one_hot_full_row() {
        let db = TransactionDB::parse_csv(
            "user_id,transaction_id,item,timestamp\n\
             u1,t1,a,2023-01-01T09:00:00\n\
             u1,t1,b,2023-01-01T09:00:00\n",
        )
        .unwrap();
        let m = one_hot(&db);
        assert_eq!(m.rows, vec![vec![true, true]]);
    }

    #[test]
    fn user_history_ordered_by_first_purchase() {
        let db = TransactionDB::parse_csv(
            "user_id,transaction_id,item,timestamp\n\
             u1,t2,c,2023-02-01T00:00:00\n\
             u1,t1,b,2023-01-01T00:00:00\n\
             u1,t1,a,2023-01-01T00:00:00\n\
             u1,t2,a,2023-02-01T00:00:00\n",
        )
        .unwrap();
        assert_eq!(db.user_history("u1"), vec!["a", "b", "c"]);
        assert!(db.user_history("nobody").is_empty());
    }
}
