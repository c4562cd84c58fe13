//! Transaction-analytics toolkit for retail basket data.
//!
//! The crate covers the full desk-scale pipeline:
//!
//! - [`txstore`] — canonical transaction data model, CSV ingestion, derived views
//! - [`datagen`] — seeded synthetic transaction generator
//! - [`temporal`] — hour-of-day / day-of-week volume histograms
//! - [`freqmine`] — Apriori and FP-Growth itemset mining plus association rules
//! - [`seqmine`] — PrefixSpan sequential pattern mining over per-user sequences
//! - [`predict`] — next-purchase prediction fusing rules with sequential patterns
//! - [`forecast`] — additive daily-quantity forecasting and error metrics
//!
//! Everything is deterministic: identical inputs (and seeds) produce identical
//! outputs, byte for byte.

pub mod datagen;
pub mod forecast;
pub mod freqmine;
pub mod predict;
pub mod seqmine;
pub mod temporal;
pub mod txstore;

pub use datagen::{generate, GenConfig};
pub use forecast::{
    aggregate_daily, evaluate, fit, percentage_change, predict_points, EvalMetrics, ForecastConfig,
    ForecastModel, ForecastPoint, TimeSeries,
};
pub use freqmine::{
    apriori, fpgrowth, gen_rules, rule_metrics, AssociationRule, FrequentItemset, MiningParams,
    RuleMetrics,
};
pub use predict::{combine, predict_next, CombinedPattern, Prediction, RankedItem};
pub use seqmine::{prefixspan, SeqParams, SequentialPattern};
pub use temporal::{daily_histogram, hourly_histogram, Histogram, HistogramKind};
pub use txstore::{build_sequences, one_hot, BasketMatrix, Record, SequenceDB, TransactionDB};
