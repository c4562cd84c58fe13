//! Seeded synthetic transaction generator.
//!
//! The PRNG is ChaCha12 (`rand_chacha::ChaCha12Rng`), seeded via
//! `SeedableRng::seed_from_u64`. Per transaction the draw order is fixed:
//! user index, basket size, item indices (partial Fisher-Yates, one
//! `random_range` per drawn item), then the timestamp offset in seconds.
//! Identical seeds therefore produce bit-identical output.

use chrono::NaiveDateTime;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use thiserror::Error;

use crate::txstore::{Record, TransactionDB};

/// Generator parameters. Defaults mirror the stock dataset: 50 users,
/// 1000 transactions, 20 items, basket sizes 1..=5, calendar year 2023.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenConfig {
    pub n_users: u32,
    pub n_transactions: u32,
    pub n_items: u32,
    pub min_basket: u32,
    pub max_basket: u32,
    pub start: NaiveDateTime,
    pub end: NaiveDateTime,
    pub seed: u64,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            n_users: 50,
            n_transactions: 1000,
            n_items: 20,
            min_basket: 1,
            max_basket: 5,
            start: datetime(2023, 1, 1, 0, 0, 0),
            end: datetime(2023, 12, 31, 23, 59, 59),
            seed: 42,
        }
    }
}

fn datetime(y: i32, mo: u32, d: u32, h: u32, mi: u32, s: u32) -> NaiveDateTime {
    chrono::NaiveDate::from_ymd_opt(y, mo, d)
        .unwrap()
        .and_hms_opt(h, mi, s)
        .unwrap()
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GenError {
    #[error("invalid config: {0}")]
    InvalidConfig(String),
}

impl GenConfig {
    /// Bounds for the given calendar year: Jan 1 00:00:00 to Dec 31 23:59:59.
    pub fn with_year(mut self, year: i32) -> Self {
        self.start = datetime(year, 1, 1, 0, 0, 0);
        self.end = datetime(year, 12, 31, 23, 59, 59);
        self
    }

    pub fn validate(&self) -> Result<(), GenError> {
        if self.n_users == 0 || self.n_transactions == 0 || self.n_items == 0 {
            return Err(GenError::InvalidConfig(
                "user, transaction, and item counts must be positive".into(),
            ));
        }
        if !(1 <= self.min_basket && self.min_basket <= self.max_basket) {
            return Err(GenError::InvalidConfig(
                "need 1 <= min_basket <= max_basket".into(),
            ));
        }
        if self.max_basket > self.n_items {
            return Err(GenError::InvalidConfig(
                "max_basket exceeds number of distinct items".into(),
            ));
        }
        if self.start >= self.end {
            return Err(GenError::InvalidConfig("start must precede end".into()),);
        }
        Ok(())
    }
}

fn pad_width(n: u32, min: usize) -> usize {
    n.to_string().len().max(min)
}

/// Generates a synthetic [`TransactionDB`]: transaction ids `t0001`...,
/// users drawn uniformly from `user_01`..., basket sizes uniform in
/// [min_basket, max_basket], items sampled uniformly without replacement
/// from `item_1`..`item_{n_items}`, timestamps uniform at second
/// granularity in [start, end].
pub fn generate(cfg: &GenConfig) -> Result<TransactionDB, GenError> {
    cfg.validate()?;
    let mut rng = ChaCha12Rng::seed_from_u64(cfg.seed);

    let txn_width = pad_width(cfg.n_transactions, 4);
    let user_width = pad_width(cfg.n_users, 2);
    let span_secs = (cfg.end - cfg.start).num_seconds();

    let item_names: Vec<String> = (1..=cfg.n_items).map(|i| format!("item_{i}")).collect();
    let mut pool: Vec<u32> = (0..cfg.n_items).collect();

    let mut records = Vec::new();
    for txn_idx in 0..cfg.n_transactions {
        let transaction_id = format!("t{:0width$}", txn_idx + 1, width = txn_width);
        let user_idx = rng.random_range(0..cfg.n_users);
        let user_id = format!("user_{:0width$}", user_idx + 1, width = user_width);
        let size = rng.random_range(cfg.min_basket..=cfg.max_basket) as usize;

        // Partial Fisher-Yates: after the loop, pool[0..size] holds the basket.
        for j in 0..size {
            let k = rng.random_range(j as u32..cfg.n_items) as usize;
            pool.swap(j, k);
        }
        let mut chosen: Vec<u32> = pool[..size].to_vec();
        chosen.sort_unstable();

        let offset = rng.random_range(0..=span_secs);
        let timestamp = cfg.start + chrono::Duration::seconds(offset);

        for item_idx in chosen {
            records.push(Record {
                user_id: user_id.clone(),
                transaction_id: transaction_id.clone(),
                item: item_names[item_idx as usize].clone(),
                timestamp,
            });
        }
    }
    Ok(TransactionDB::from_records(records))
}
