//! Transaction-volume histograms by hour of day and day of week.
//!
//! A basket's timestamp is the earliest record timestamp of its transaction.
//! Zero-count buckets are always emitted, so the hourly histogram has 24
//! buckets and the daily one 7 (Monday first).

use chrono::{Datelike, Timelike};

use crate::txstore::TransactionDB;

pub const WEEKDAYS: [&str; 7] = [
    "Monday",
    "Tuesday",
    "Wednesday",
    "Thursday",
    "Friday",
    "Saturday",
    "Sunday",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HistogramKind {
    Hourly,
    Daily,
}

/// Bucketed transaction counts; sum of counts equals the basket count of
/// the source database.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Histogram {
    pub kind: HistogramKind,
    pub buckets: Vec<(String, u64)>,
}

impl Histogram {
    pub fn total(&self) -> u64 {
        self.buckets.iter().map(|(_, c)| c).sum()
    }

    /// Plot-ready CSV: `hour,count` or `weekday,count`.
    pub fn to_csv(&self) -> String {
        let label = match self.kind {
            HistogramKind::Hourly => "hour",
            HistogramKind::Daily => "weekday",
        };
        let mut out = format!("{label},count\n");
        for (name, count) in &self.buckets {
            out.push_str(&format!("{name},{count}\n"));
        }
        out
    }
}

/// Counts baskets per hour of day (buckets 0..=23).
pub fn hourly_histogram(db: &TransactionDB) -> Histogram {
    let mut counts = [0u64; 24];
    for basket in db.baskets().values() {
        counts[basket.timestamp.hour() as usize] += 1;
    }
    Histogram {
        kind: HistogramKind::Hourly,
        buckets: (0..24).map(|h| (h.to_string(), counts[h])).collect(),
    }
}

/// Counts baskets per day of week (Monday..Sunday).
pub fn daily_histogram(db: &TransactionDB) -> Histogram {
    let mut counts = [0u64; 7];
    for basket in db.baskets().values() {
        counts[basket.timestamp.weekday().num_days_from_monday() as usize] += 1;
    }
    Histogram {
        kind: HistogramKind::Daily,
        buckets: (0..7)
            .map(|d| (WEEKDAYS[d].to_string(), counts[d]))
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datagen::{generate, GenConfig};
    use crate::txstore::TransactionDB;

    fn db_from_rows(rows: &[&str]) -> TransactionDB {
        let mut text = String::from("user_id,transaction_id,item,timestamp\n");
        for row in rows {
            text.push_str(row);
            text.push('\n');
        }
        TransactionDB::parse_csv(&text).unwrap()
    }

    #[test]
    fn hourly_empty_db() {
        let h = hourly_histogram(&TransactionDB::from_records(vec![]));
        assert_eq!(h.buckets.len(), 24);
        assert_eq!(h.total(), 0);
    }

    #[test]
    fn hourly_direct_count() {
        let db = db_from_rows(&[
            "u1,t1,a,2023-01-01T09:05:00",
            "u1,t2,a,2023-01-01T09:59:00",
            "u1,t3,a,2023-01-01T21:00:00",
        ]);
        let h = hourly_histogram(&db);
        assert_eq!(h.buckets[9], ("9".to_string(), 2));
        assert_eq!(h.buckets[21], ("21".to_string(), 1));
        assert_eq!(h.total(), 3);
    }

    #[test]
    fn daily_empty_db() {
        let h = daily_histogram(&TransactionDB::from_records(vec![]));
        assert_eq!(h.buckets.len(), 7);
        assert_eq!(h.total(), 0);
    }

    #[test]
    fn daily_calendar_check() {
        // 2023-01-02 was a Monday.
        let db = db_from_rows(&["u1,t1,a,2023-01-02T12:00:00"]);
        let h = daily_histogram(&db);
        assert_eq!(h.buckets[0], ("Monday".to_string(), 1));
    }

    #[test]
    fn default_dataset_conserves_counts() {
        let db = generate(&GenConfig::default()).unwrap();
        assert_eq!(hourly_histogram(&db).total(), 1000);
        assert_eq!(daily_histogram(&db).total(), 1000);
    }

    #[test]
    fn histogram_invariant_under_record_permutation() {
        let db = db_from_rows(&[
            "u1,t1,a,2023-01-01T09:05:00",
            "u2,t2,b,2023-01-03T10:00:00",
            "u1,t3,c,2023-01-05T23:30:00",
        ]);
        let mut records = db.records().to_vec();
        records.reverse();
        let permuted = TransactionDB::from_records(records);
        assert_eq!(hourly_histogram(&db), hourly_histogram(&permuted));
        assert_eq!(daily_histogram(&db), daily_histogram(&permuted));
    }

    #[test]
    fn histogram_is_additive_over_disjoint_dbs() {
        let a = db_from_rows(&["u1,t1,a,2023-01-01T09:05:00"]);
        let b = db_from_rows(&["u2,t2,b,2023-01-02T09:30:00"]);
        let mut merged = a.records().to_vec();
        merged.extend(b.records().to_vec());
        let union = TransactionDB::from_records(merged);
        let (ha, hb, hu) = (hourly_histogram(&a), hourly_histogram(&b), hourly_histogram(&union));
        for i in 0..24 {
            assert_eq!(hu.buckets[i].1, ha.buckets[i].1 + hb.buckets[i].1);
        }
    }

    #[test]
    fn csv_output_schema() {
        let db = db_from_rows(&["u1,t1,a,2023-01-02T12:00:00"]);
        let csv = daily_histogram(&db).to_csv();
        assert!(csv.starts_with("weekday,count\nMonday,1\n"));
        let csv = hourly_histogram(&db).to_csv();
        assert!(csv.starts_with("hour,count\n0,0\n"));
        assert_eq!(csv.lines().count(), 25);
    }
}
