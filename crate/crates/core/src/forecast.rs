//! Additive forecasting of daily quantities, plus forecast-quality metrics.
//!
//! The model is a deterministic additive decomposition fit by ridge least
//! squares: piecewise-linear trend (hinge basis at evenly spaced
//! changepoints over the first `changepoint_range` of history), weekly and
//! yearly Fourier seasonality, and one indicator per holiday date. Solved
//! via SVD of the penalty-augmented design matrix, so a zero penalty still
//! yields the minimum-norm least-squares solution.

use chrono::{Days, NaiveDate};
use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::txstore::TransactionDB;

const WEEKLY_PERIOD: f64 = 7.0;
const YEARLY_PERIOD: f64 = 365.25;
/// Minimum number of daily points `fit` accepts.
pub const MIN_FIT_POINTS: usize = 14;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ForecastError {
    #[error("empty database")]
    EmptyDatabase,
    #[error("invalid time series: {0}")]
    InvalidSeries(String),
    #[error("invalid forecast config: {0}")]
    InvalidConfig(String),
    #[error("series too short: {got} points, need at least {min}")]
    SeriesTooShort { got: usize, min: usize },
    #[error("baseline must be positive, got {0}")]
    BadBaseline(f64),
    #[error("length mismatch: {actual} actual vs {predicted} predicted")]
    LengthMismatch { actual: usize, predicted: usize },
    #[error("empty input")]
    EmptyInput,
}

/// A daily quantity series: consecutive dates, non-negative values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeSeries {
    points: Vec<(NaiveDate, f64)>,
}

impl TimeSeries {
    /// Validates that dates are strictly increasing by exactly one day and
    /// quantities are non-negative finite numbers.
    pub fn new(points: Vec<(NaiveDate, f64)>) -> Result<TimeSeries, ForecastError> {
        for &(date, q) in &points {
            if !(q >= 0.0 && q.is_finite()) {
                return Err(ForecastError::InvalidSeries(format!(
                    "quantity {q} on {date} is not a non-negative finite number"
                )));
            }
        }
        for w in points.windows(2) {
            let gap = (w[1].0 - w[0].0).num_days();
            if gap != 1 {
                return Err(ForecastError::InvalidSeries(format!(
                    "dates must be consecutive: {} then {}",
                    w[0].0, w[1].0
                )));
            }
        }
        Ok(TimeSeries { points })
    }

    pub fn points(&self) -> &[(NaiveDate, f64)] {
        &self.points
    }

    pub fn values(&self) -> Vec<f64> {
        self.points.iter().map(|&(_, q)| q).collect()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Model structure: changepoint grid, seasonality orders, ridge strength.
#[derive(Debug, Clone, PartialEq)]
pub struct ForecastConfig {
    /// Number of evenly spaced trend changepoints.
    pub n_changepoints: usize,
    /// Fraction of history (from the start) that may contain changepoints.
    pub changepoint_range: f64,
    /// Weekly Fourier order (sine/cosine pairs).
    pub weekly_order: usize,
    /// Yearly Fourier order (sine/cosine pairs).
    pub yearly_order: usize,
    /// Ridge penalty on every coefficient except the intercept.
    pub ridge_lambda: f64,
    /// Dates that get their own additive indicator coefficient.
    pub holidays: Vec<NaiveDate>,
}

impl Default for ForecastConfig {
    fn default() -> Self {
        ForecastConfig {
            n_changepoints: 25,
            changepoint_range: 0.8,
            weekly_order: 3,
            yearly_order: 10,
            ridge_lambda: 1e-3,
            holidays: Vec::new(),
        }
    }
}

impl ForecastConfig {
    pub fn validate(&self) -> Result<(), ForecastError> {
        if !(self.changepoint_range > 0.0 && self.changepoint_range <= 1.0) {
            return Err(ForecastError::InvalidConfig(
                "changepoint_range must lie in (0, 1]".into(),
            ));
        }
        if !(self.ridge_lambda >= 0.0 && self.ridge_lambda.is_finite()) {
            return Err(ForecastError::InvalidConfig(
                "ridge_lambda must be a non-negative finite number".into(),
            ));
        }
        Ok(())
    }
}

/// A fitted additive model. Day indices `t` count from the first training
/// date (t = 0); prediction continues the same axis.
#[derive(Debug, Clone, PartialEq)]
pub struct ForecastModel {
    start: NaiveDate,
    n_train: usize,
    intercept: f64,
    slope: f64,
    /// (changepoint position in days, slope delta), positions ascending.
    changepoints: Vec<(f64, f64)>,
    /// (sine, cosine) coefficient per weekly harmonic k = 1..=order.
    weekly: Vec<(f64, f64)>,
    /// (sine, cosine) coefficient per yearly harmonic k = 1..=order.
    yearly: Vec<(f64, f64)>,
    /// (holiday date, coefficient), dates ascending and distinct.
    holidays: Vec<(NaiveDate, f64)>,
    diagnostics: EvalMetrics,
}

/// One forecasted day; `yhat` is exactly the sum of the three parts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForecastPoint {
    pub date: NaiveDate,
    pub yhat: f64,
    pub trend_part: f64,
    pub seasonal_part: f64,
    pub holiday_part: f64,
}

/// Forecast-error summary; `rmse` is exactly `mse.sqrt()`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvalMetrics {
    pub mae: f64,
    pub mse: f64,
    pub rmse: f64,
}

/// Sums each day's purchased item count (per-basket deduplicated items)
/// into one point per calendar day, zero-filling days with no baskets.
pub fn aggregate_daily(db: &TransactionDB) -> Result<TimeSeries, ForecastError> {
    if db.is_empty() {
        return Err(ForecastError::EmptyDatabase);
    }
    let mut by_day: std::collections::BTreeMap<NaiveDate, f64> = std::collections::BTreeMap::new();
    for basket in db.baskets().values() {
        *by_day.entry(basket.timestamp.date()).or_insert(0.0) += basket.items.len() as f64;
    }
    let (&first, _) = by_day.first_key_value().expect("non-empty db");
    let (&last, _) = by_day.last_key_value().expect("non-empty db");
    let mut points = Vec::new();
    let mut day = first;
    loop {
        points.push((day, by_day.get(&day).copied().unwrap_or(0.0)));
        if day == last {
            break;
        }
        day = day.succ_opt().expect("date overflow");
    }
    TimeSeries::new(points)
}

/// Column layout of the design matrix, shared by fit and prediction.
struct Basis {
    changepoints: Vec<f64>,
    weekly_order: usize,
    yearly_order: usize,
    holidays: Vec<NaiveDate>,
}

impl Basis {
    fn n_cols(&self) -> usize {
        2 + self.changepoints.len() + 2 * (self.weekly_order + self.yearly_order) + self.holidays.len()
    }

    /// Writes one design-matrix row for day index `t` falling on `date`.
    fn fill_row(&self, t: f64, date: NaiveDate, row: &mut [f64]) {
        row[0] = 1.0;
        row[1] = t;
        let mut col = 2;
        for &c in &self.changepoints {
            row[col] = (t - c).max(0.0);
            col += 1;
        }
        for (order, period) in [(self.weekly_order, WEEKLY_PERIOD), (self.yearly_order, YEARLY_PERIOD)] {
            for k in 1..=order {
                let angle = 2.0 * std::f64::consts::PI * k as f64 * t / period;
                row[col] = angle.sin();
                row[col + 1] = angle.cos();
                col += 2;
            }
        }
        for &h in &self.holidays {
            row[col] = if date == h { 1.0 } else { 0.0 };
            col += 1;
        }
    }
}

/// Fits the additive model to `ts` by ridge least squares (penalty on every
/// coefficient but the intercept). Deterministic: identical inputs give
/// identical coefficients.
pub fn fit(ts: &TimeSeries, cfg: &ForecastConfig) -> Result<ForecastModel, ForecastError> {
    cfg.validate()?;
    let n = ts.len();
    if n < MIN_FIT_POINTS {
        return Err(ForecastError::SeriesTooShort { got: n, min: MIN_FIT_POINTS });
    }
    let start = ts.points[0].0;

    let t_span = cfg.changepoint_range * (n - 1) as f64;
    let changepoints: Vec<f64> = (1..=cfg.n_changepoints)
        .map(|j| t_span * j as f64 / cfg.n_changepoints as f64)
        .collect();
    let mut holidays = cfg.holidays.clone();
    holidays.sort_unstable();
    holidays.dedup();
    let basis = Basis {
        changepoints,
        weekly_order: cfg.weekly_order,
        yearly_order: cfg.yearly_order,
        holidays,
    };

    let p = basis.n_cols();
    // Penalty rows: sqrt(lambda) appended per penalized coefficient turns
    // the ridge problem into ordinary least squares on an augmented system.
    let mut a = DMatrix::zeros(n + (p - 1), p);
    let mut b = DVector::zeros(n + (p - 1));
    let mut row = vec![0.0; p];
    for (i, &(date, y)) in ts.points.iter().enumerate() {
        basis.fill_row(i as f64, date, &mut row);
        for (j, &v) in row.iter().enumerate() {
            a[(i, j)] = v;
        }
        b[i] = y;
    }
    let sqrt_lambda = cfg.ridge_lambda.sqrt();
    for j in 1..p {
        a[(n + j - 1, j)] = sqrt_lambda;
    }

    let svd = a.svd(true, true);
    let sv_max = svd.singular_values.max();
    let eps = if sv_max > 0.0 { sv_max * 1e-12 } else { f64::MIN_POSITIVE };
    let beta = svd.solve(&b, eps).expect("SVD computed with U and V");

    let mut at = 2;
    let changepoints: Vec<(f64, f64)> = basis
        .changepoints
        .iter()
        .map(|&c| {
            let pair = (c, beta[at]);
            at += 1;
            pair
        })
        .collect();
    let mut pairs = |order: usize| -> Vec<(f64, f64)> {
        (0..order)
            .map(|_| {
                let pair = (beta[at], beta[at + 1]);
                at += 2;
                pair
            })
            .collect()
    };
    let weekly = pairs(cfg.weekly_order);
    let yearly = pairs(cfg.yearly_order);
    let holidays: Vec<(NaiveDate, f64)> = basis
        .holidays
        .iter()
        .map(|&h| {
            let pair = (h, beta[at]);
            at += 1;
            pair
        })
        .collect();
    debug_assert_eq!(at, p);

    let mut model = ForecastModel {
        start,
        n_train: n,
        intercept: beta[0],
        slope: beta[1],
        changepoints,
        weekly,
        yearly,
        holidays,
        diagnostics: EvalMetrics { mae: 0.0, mse: 0.0, rmse: 0.0 },
    };
    let fitted: Vec<f64> = model.fitted_points().iter().map(|pt| pt.yhat).collect();
    model.diagnostics = evaluate(&ts.values(), &fitted)?;
    Ok(model)
}

impl ForecastModel {
    /// First training date (day index 0).
    pub fn start(&self) -> NaiveDate {
        self.start
    }

    /// Number of training days.
    pub fn n_train(&self) -> usize {
        self.n_train
    }

    pub fn intercept(&self) -> f64 {
        self.intercept
    }

    /// Base trend slope per day (before changepoint deltas).
    pub fn slope(&self) -> f64 {
        self.slope
    }

    pub fn changepoints(&self) -> &[(f64, f64)] {
        &self.changepoints
    }

    pub fn weekly(&self) -> &[(f64, f64)] {
        &self.weekly
    }

    pub fn yearly(&self) -> &[(f64, f64)] {
        &self.yearly
    }

    pub fn holiday_coefficients(&self) -> &[(NaiveDate, f64)] {
        &self.holidays
    }

    /// In-sample residual summary.
    pub fn diagnostics(&self) -> EvalMetrics {
        self.diagnostics
    }

    /// The three additive components at day index `t`.
    fn components_at(&self, t: f64, date: NaiveDate) -> (f64, f64, f64) {
        let mut trend = self.intercept + self.slope * t;
        for &(c, delta) in &self.changepoints {
            trend += delta * (t - c).max(0.0);
        }
        let mut seasonal = 0.0;
        for (coeffs, period) in [(&self.weekly, WEEKLY_PERIOD), (&self.yearly, YEARLY_PERIOD)] {
            for (k, &(s, c)) in coeffs.iter().enumerate() {
                let angle = 2.0 * std::f64::consts::PI * (k + 1) as f64 * t / period;
                seasonal += s * angle.sin() + c * angle.cos();
            }
        }
        let holiday = match self.holidays.binary_search_by_key(&date, |&(d, _)| d) {
            Ok(i) => self.holidays[i].1,
            Err(_) => 0.0,
        };
        (trend, seasonal, holiday)
    }

    fn point_at(&self, t: usize) -> ForecastPoint {
        let date = self
            .start
            .checked_add_days(Days::new(t as u64))
            .expect("date overflow");
        let (trend_part, seasonal_part, holiday_part) = self.components_at(t as f64, date);
        ForecastPoint {
            date,
            yhat: trend_part + seasonal_part + holiday_part,
            trend_part,
            seasonal_part,
            holiday_part,
        }
    }

    /// Model values over the training days (t = 0..n_train).
    pub fn fitted_points(&self) -> Vec<ForecastPoint> {
        (0..self.n_train).map(|t| self.point_at(t)).collect()
    }
}

/// Forecasts the `horizon_days` days following the training window. The
/// trend continues linearly with the final post-changepoint slope.
pub fn predict_points(model: &ForecastModel, horizon_days: usize) -> Vec<ForecastPoint> {
    (model.n_train..model.n_train + horizon_days)
        .map(|t| model.point_at(t))
        .collect()
}

/// Re-expresses forecasts as percent deviation from `baseline` (typically
/// the training-series mean).
pub fn percentage_change(
    points: &[ForecastPoint],
    baseline: f64,
) -> Result<Vec<(NaiveDate, f64)>, ForecastError> {
    if !(baseline > 0.0 && baseline.is_finite()) {
        return Err(ForecastError::BadBaseline(baseline));
    }
    Ok(points
        .iter()
        .map(|pt| (pt.date, (pt.yhat - baseline) / baseline * 100.0))
        .collect())
}

/// MAE, MSE, and RMSE between two equal-length series.
pub fn evaluate(actual: &[f64], predicted: &[f64]) -> Result<EvalMetrics, ForecastError> {
    if actual.len() != predicted.len() {
        return Err(ForecastError::LengthMismatch {
            actual: actual.len(),
            predicted: predicted.len(),
        });
    }
    if actual.is_empty() {
        return Err(ForecastError::EmptyInput);
    }
    let n = actual.len() as f64;
    let mut abs_sum = 0.0;
    let mut sq_sum = 0.0;
    for (&a, &p) in actual.iter().zip(predicted) {
        let e = a - p;
        abs_sum += e.abs();
        sq_sum += e * e;
    }
    let mse = sq_sum / n;
    Ok(EvalMetrics { mae: abs_sum / n, mse, rmse: mse.sqrt() })
}
