//! Python bindings for the transaction-analytics toolkit.
//!
//! The module mirrors the Rust crate's surface with Python-native types:
//! [`TransactionStore`] wraps the transaction database, and free functions
//! cover generation, temporal histograms, itemset/rule/sequence mining,
//! next-purchase prediction, forecasting, and evaluation. Collection-valued
//! results come back as lists of plain dicts, ready for `pandas.DataFrame`.

use basketmine::{
    aggregate_daily, apriori, build_sequences, combine, evaluate, fit, fpgrowth, gen_rules,
    generate, percentage_change, predict_next, predict_points, prefixspan, AssociationRule,
    ForecastConfig, FrequentItemset, GenConfig, MiningParams, Prediction, SeqParams,
    SequentialPattern, TransactionDB,
};
use chrono::NaiveDate;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyList};

fn value_err(err: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(err.to_string())
}

/// Immutable store of purchase records with derived per-transaction baskets.
#[pyclass(frozen)]
struct TransactionStore {
    db: TransactionDB,
}

#[pymethods]
impl TransactionStore {
    /// Parses the canonical CSV layout
    /// (`user_id,transaction_id,item,timestamp`, ISO-8601 second timestamps).
    #[staticmethod]
    fn parse_csv(text: &str) -> PyResult<TransactionStore> {
        let db = TransactionDB::parse_csv(text).map_err(value_err)?;
        Ok(TransactionStore { db })
    }

    /// Serializes back to the canonical CSV layout.
    fn to_csv(&self) -> String {
        self.db.to_csv()
    }

    #[getter]
    fn n_baskets(&self) -> usize {
        self.db.n_baskets()
    }

    /// Distinct user ids, sorted.
    fn users(&self) -> Vec<String> {
        self.db.users()
    }

    /// Distinct items across all baskets, sorted.
    fn item_universe(&self) -> Vec<String> {
        self.db.item_universe().to_vec()
    }

    /// A user's distinct items in first-purchase order.
    fn user_history(&self, user: &str) -> Vec<String> {
        self.db.user_history(user)
    }

    /// One dict per transaction: id, user, ISO timestamp, sorted items.
    fn baskets<'py>(&self, py: Python<'py>) -> PyResult<Vec<Bound<'py, PyDict>>> {
        self.db
            .baskets()
            .iter()
            .map(|(txn_id, basket)| {
                let d = PyDict::new(py);
                d.set_item("transaction_id", txn_id)?;
                d.set_item("user_id", &basket.user_id)?;
                d.set_item(
                    "timestamp",
                    basket.timestamp.format("%Y-%m-%dT%H:%M:%S").to_string(),
                )?;
                d.set_item("items", &basket.items)?;
                Ok(d)
            })
            .collect()
    }

    fn __len__(&self) -> usize {
        self.db.n_baskets()
    }

    fn __repr__(&self) -> String {
        format!(
            "TransactionStore({} transactions, {} users, {} items)",
            self.db.n_baskets(),
            self.db.users().len(),
            self.db.item_universe().len()
        )
    }
}

/// Generates a seeded synthetic store; identical arguments give identical
/// data.
#[pyfunction]
#[pyo3(signature = (seed=42, transactions=1000, users=50, items=20, min_basket=1, max_basket=5, year=2023))]
fn generate_store(
    seed: u64,
    transactions: u32,
    users: u32,
    items: u32,
    min_basket: u32,
    max_basket: u32,
    year: i32,
) -> PyResult<TransactionStore> {
    let cfg = GenConfig {
        n_users: users,
        n_transactions: transactions,
        n_items: items,
        min_basket,
        max_basket,
        seed,
        ..GenConfig::default()
    }
    .with_year(year);
    let db = generate(&cfg).map_err(value_err)?;
    Ok(TransactionStore { db })
}

/// Transactions per hour of day as 24 `(hour, count)` pairs.
#[pyfunction]
fn hourly_histogram(store: &TransactionStore) -> Vec<(String, u64)> {
    basketmine::hourly_histogram(&store.db).buckets
}

/// Transactions per weekday as 7 `(weekday, count)` pairs, Monday first.
#[pyfunction]
fn daily_histogram(store: &TransactionStore) -> Vec<(String, u64)> {
    basketmine::daily_histogram(&store.db).buckets
}

fn mining_params(min_support: f64, min_confidence: f64, max_len: Option<usize>) -> MiningParams {
    MiningParams {
        min_support,
        min_confidence,
        max_len,
    }
}

fn run_miner(
    db: &TransactionDB,
    algo: &str,
    params: &MiningParams,
) -> PyResult<Vec<FrequentItemset>> {
    match algo {
        "apriori" => apriori(db, params).map_err(value_err),
        "fpgrowth" => fpgrowth(db, params).map_err(value_err),
        other => Err(PyValueError::new_err(format!(
            "algo must be `apriori` or `fpgrowth`, not `{other}`"
        ))),
    }
}

fn itemset_dict<'py>(py: Python<'py>, fs: &FrequentItemset) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("items", &fs.items)?;
    d.set_item("support", fs.support)?;
    d.set_item("count", fs.count)?;
    Ok(d)
}

/// Frequent itemsets as dicts of `items`, `support`, `count`.
#[pyfunction]
#[pyo3(signature = (store, min_support=0.005, algo="fpgrowth", max_len=None))]
fn mine_itemsets<'py>(
    py: Python<'py>,
    store: &TransactionStore,
    min_support: f64,
    algo: &str,
    max_len: Option<usize>,
) -> PyResult<Vec<Bound<'py, PyDict>>> {
    let params = mining_params(min_support, MiningParams::default().min_confidence, max_len);
    let itemsets = run_miner(&store.db, algo, &params)?;
    itemsets.iter().map(|fs| itemset_dict(py, fs)).collect()
}

fn rule_dict<'py>(py: Python<'py>, rule: &AssociationRule) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("antecedent", &rule.antecedent)?;
    d.set_item("consequent", &rule.consequent)?;
    d.set_item("support", rule.support)?;
    d.set_item("confidence", rule.confidence)?;
    d.set_item("lift", rule.lift)?;
    d.set_item("leverage", rule.leverage)?;
    d.set_item("conviction", rule.conviction)?; // +inf stays float('inf')
    d.set_item("zhangs_metric", rule.zhangs_metric)?;
    Ok(d)
}

/// Association rules with the full metric set, sorted by support then
/// confidence, descending.
#[pyfunction]
#[pyo3(signature = (store, min_support=0.005, min_confidence=0.3, algo="fpgrowth", max_len=None))]
fn mine_rules<'py>(
    py: Python<'py>,
    store: &TransactionStore,
    min_support: f64,
    min_confidence: f64,
    algo: &str,
    max_len: Option<usize>,
) -> PyResult<Vec<Bound<'py, PyDict>>> {
    let params = mining_params(min_support, min_confidence, max_len);
    let itemsets = run_miner(&store.db, algo, &params)?;
    let rules = gen_rules(&itemsets, &params, store.db.n_baskets()).map_err(value_err)?;
    rules.iter().map(|r| rule_dict(py, r)).collect()
}

fn pattern_dict<'py>(py: Python<'py>, p: &SequentialPattern) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("pattern", &p.elements)?;
    d.set_item("count", p.count)?;
    Ok(d)
}

/// Frequent ordered purchase patterns as dicts of `pattern`, `count`
/// (count = users whose history contains the pattern).
#[pyfunction]
#[pyo3(signature = (store, min_count=10, max_len=None))]
fn mine_sequences<'py>(
    py: Python<'py>,
    store: &TransactionStore,
    min_count: u64,
    max_len: Option<usize>,
) -> PyResult<Vec<Bound<'py, PyDict>>> {
    let sdb = build_sequences(&store.db);
    let patterns = prefixspan(&sdb, &SeqParams { min_count, max_len });
    patterns.iter().map(|p| pattern_dict(py, p)).collect()
}

fn prediction_dict<'py>(py: Python<'py>, pred: &Prediction) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("user_id", &pred.user_id)?;
    let ranked: Vec<Bound<'py, PyDict>> = pred
        .predictions
        .iter()
        .map(|r| {
            let e = PyDict::new(py);
            e.set_item("item", &r.item)?;
            e.set_item("score", r.score)?;
            Ok(e)
        })
        .collect::<PyResult<_>>()?;
    d.set_item("predictions", ranked)?;
    Ok(d)
}

/// Ranks a user's likely next purchases by fusing association rules with
/// sequential patterns; items already in the history are excluded.
#[pyfunction]
#[pyo3(signature = (store, user, top=5, min_support=0.005, min_confidence=0.3, min_count=10))]
fn predict_next_items<'py>(
    py: Python<'py>,
    store: &TransactionStore,
    user: &str,
    top: usize,
    min_support: f64,
    min_confidence: f64,
    min_count: u64,
) -> PyResult<Bound<'py, PyDict>> {
    let history = store.db.user_history(user);
    if history.is_empty() {
        return Err(PyValueError::new_err(format!(
            "user `{user}` has no transactions in the store"
        )));
    }
    let params = mining_params(min_support, min_confidence, None);
    let itemsets = fpgrowth(&store.db, &params).map_err(value_err)?;
    let rules = gen_rules(&itemsets, &params, store.db.n_baskets()).map_err(value_err)?;
    let sdb = build_sequences(&store.db);
    let patterns = prefixspan(
        &sdb,
        &SeqParams {
            min_count,
            max_len: None,
        },
    );
    let combined = combine(&rules, &patterns, sdb.n_sequences());
    let prediction = predict_next(&combined, user, &history, top);
    prediction_dict(py, &prediction)
}

/// Fits the additive daily-quantity model and reports the holdout forecast.
///
/// Returns a dict with `points` (ds/yhat/trend/seasonal/holiday/pct_change
/// per day over the holdout plus `horizon` future days), `metrics`
/// (mae/mse/rmse over the holdout), `baseline`, and `holdout`.
#[pyfunction]
#[pyo3(signature = (store, horizon=30, holdout=None, changepoints=25, weekly_order=3,
                    yearly_order=10, ridge_lambda=1e-3, holidays=None, baseline=None))]
#[allow(clippy::too_many_arguments)]
fn forecast_daily<'py>(
    py: Python<'py>,
    store: &TransactionStore,
    horizon: usize,
    holdout: Option<usize>,
    changepoints: usize,
    weekly_order: usize,
    yearly_order: usize,
    ridge_lambda: f64,
    holidays: Option<Vec<String>>,
    baseline: Option<f64>,
) -> PyResult<Bound<'py, PyDict>> {
    let series = aggregate_daily(&store.db).map_err(value_err)?;
    let n = series.len();
    let holdout = holdout.unwrap_or_else(|| (n / 5).max(1));
    if holdout == 0 || n <= holdout {
        return Err(PyValueError::new_err(format!(
            "holdout must be in [1, {}) for a {n}-day series",
            n.max(1)
        )));
    }
    let holiday_dates = holidays
        .unwrap_or_default()
        .iter()
        .map(|s| {
            NaiveDate::parse_from_str(s, "%Y-%m-%d")
                .map_err(|_| PyValueError::new_err(format!("bad holiday date `{s}`")))
        })
        .collect::<PyResult<Vec<_>>>()?;
    let cfg = ForecastConfig {
        n_changepoints: changepoints,
        weekly_order,
        yearly_order,
        ridge_lambda,
        holidays: holiday_dates,
        ..ForecastConfig::default()
    };
    let train = basketmine::TimeSeries::new(series.points()[..n - holdout].to_vec())
        .expect("a prefix of a valid series is valid");
    let model = fit(&train, &cfg).map_err(value_err)?;
    let points = predict_points(&model, holdout + horizon);

    let actual: Vec<f64> = series.values()[n - holdout..].to_vec();
    let predicted: Vec<f64> = points[..holdout].iter().map(|p| p.yhat).collect();
    let metrics = evaluate(&actual, &predicted).map_err(value_err)?;

    let baseline = baseline.unwrap_or_else(|| {
        let values = train.values();
        values.iter().sum::<f64>() / values.len() as f64
    });
    let pct = percentage_change(&points, baseline).map_err(value_err)?;

    let point_dicts: Vec<Bound<'py, PyDict>> = points
        .iter()
        .zip(&pct)
        .map(|(p, (_, change))| {
            let d = PyDict::new(py);
            d.set_item("ds", p.date.format("%Y-%m-%d").to_string())?;
            d.set_item("yhat", p.yhat)?;
            d.set_item("trend", p.trend_part)?;
            d.set_item("seasonal", p.seasonal_part)?;
            d.set_item("holiday", p.holiday_part)?;
            d.set_item("pct_change", change)?;
            Ok(d)
        })
        .collect::<PyResult<_>>()?;

    let out = PyDict::new(py);
    out.set_item("points", PyList::new(py, point_dicts)?)?;
    let m = PyDict::new(py);
    m.set_item("mae", metrics.mae)?;
    m.set_item("mse", metrics.mse)?;
    m.set_item("rmse", metrics.rmse)?;
    out.set_item("metrics", m)?;
    out.set_item("baseline", baseline)?;
    out.set_item("holdout", holdout)?;
    Ok(out)
}

/// MAE/MSE/RMSE between two equal-length series.
#[pyfunction]
fn evaluate_series<'py>(
    py: Python<'py>,
    actual: Vec<f64>,
    predicted: Vec<f64>,
) -> PyResult<Bound<'py, PyDict>> {
    let metrics = evaluate(&actual, &predicted).map_err(value_err)?;
    let d = PyDict::new(py);
    d.set_item("mae", metrics.mae)?;
    d.set_item("mse", metrics.mse)?;
    d.set_item("rmse", metrics.rmse)?;
    Ok(d)
}

/// Confidence, lift, leverage, conviction, and Zhang's metric from the
/// supports of X∪Y, X, and Y. An exact implication yields
/// `conviction == float('inf')`.
#[pyfunction]
fn rule_metrics<'py>(
    py: Python<'py>,
    supp_xy: f64,
    supp_x: f64,
    supp_y: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let m = basketmine::rule_metrics(supp_xy, supp_x, supp_y).map_err(value_err)?;
    let d = PyDict::new(py);
    d.set_item("confidence", m.confidence)?;
    d.set_item("lift", m.lift)?;
    d.set_item("leverage", m.leverage)?;
    d.set_item("conviction", m.conviction)?;
    d.set_item("zhangs_metric", m.zhangs_metric)?;
    Ok(d)
}

#[pymodule]
fn basketmine_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<TransactionStore>()?;
    m.add_function(wrap_pyfunction!(generate_store, m)?)?;
    m.add_function(wrap_pyfunction!(hourly_histogram, m)?)?;
    m.add_function(wrap_pyfunction!(daily_histogram, m)?)?;
    m.add_function(wrap_pyfunction!(mine_itemsets, m)?)?;
    m.add_function(wrap_pyfunction!(mine_rules, m)?)?;
    m.add_function(wrap_pyfunction!(mine_sequences, m)?)?;
    m.add_function(wrap_pyfunction!(predict_next_items, m)?)?;
    m.add_function(wrap_pyfunction!(forecast_daily, m)?)?;
    m.add_function(wrap_pyfunction!(evaluate_series, m)?)?;
    m.add_function(wrap_pyfunction!(rule_metrics, m)?)?;
    Ok(())
}
