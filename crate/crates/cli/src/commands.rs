use std::fs;
use std::path::{Path, PathBuf};

use basketmine::forecast::MIN_FIT_POINTS;
use basketmine::{
    aggregate_daily, apriori, build_sequences, combine, daily_histogram, evaluate, fit, fpgrowth,
    gen_rules, generate, hourly_histogram, predict_next, predict_points, prefixspan, EvalMetrics,
    ForecastConfig, FrequentItemset, GenConfig, Histogram, MiningParams, Prediction, SeqParams,
    TimeSeries, TransactionDB,
};
use chrono::NaiveDate;
use serde::Serialize;

use crate::error::CliError;
use crate::manifest::RunManifest;
use crate::{
    Algo, EvalArgs, ForecastArgs, GenArgs, MineItemsetsArgs, MineRulesArgs, MineSeqArgs,
    OutputFormat, PipelineArgs, PredictArgs, TemporalArgs,
};

/// Directory a file-valued `--out` lives in; `.` when the path is bare.
fn out_dir(out: &Path) -> &Path {
    match out.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    }
}

fn ensure_dir(dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    ensure_dir(out_dir(path))?;
    fs::write(path, text).map_err(|e| CliError::io(path, e))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value).expect("output types serialize");
    text.push('\n');
    write_file(path, &text)
}

fn load_db(path: &Path) -> Result<TransactionDB, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    TransactionDB::parse_csv(&text)
        .map_err(|e| CliError::Data(format!("{}: {e}", path.display())))
}

fn mine_frequent(
    db: &TransactionDB,
    algo: Algo,
    params: &MiningParams,
) -> Result<Vec<FrequentItemset>, CliError> {
    let itemsets = match algo {
        Algo::Apriori => apriori(db, params)?,
        Algo::Fpgrowth => fpgrowth(db, params)?,
    };
    Ok(itemsets)
}

/// Reads a numeric series: one value per row, either as a single column or
/// as the second column of a `label,value,...` layout (`ds,yhat`-style
/// files work as-is). A non-numeric first row is treated as a header.
fn read_series(path: &Path) -> Result<Vec<f64>, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let mut values = Vec::new();
    let mut first_data_row = true;
    for (idx, line) in text.split('\n').enumerate() {
        let line = line.trim_end_matches('\r');
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        let cell = if fields.len() == 1 { fields[0] } else { fields[1] };
        match cell.trim().parse::<f64>() {
            Ok(v) => values.push(v),
            Err(_) if first_data_row => {} // header row
            Err(_) => {
                return Err(CliError::Data(format!(
                    "{}: line {}: expected a number, found `{cell}`",
                    path.display(),
                    idx + 1
                )));
            }
        }
        first_data_row = false;
    }
    Ok(values)
}

fn histogram_json(h: &Histogram, label: &str) -> serde_json::Value {
    serde_json::Value::Array(
        h.buckets
            .iter()
            .map(|(name, count)| serde_json::json!({ label: name, "count": count }))
            .collect(),
    )
}

pub fn gen(args: &GenArgs) -> Result<Vec<PathBuf>, CliError> {
    let cfg = GenConfig {
        n_users: args.users,
        n_transactions: args.transactions,
        n_items: args.items,
        min_basket: args.min_basket,
        max_basket: args.max_basket,
        seed: args.seed,
        ..GenConfig::default()
    }
    .with_year(args.year);
    let db = generate(&cfg)?;
    write_file(&args.out, &db.to_csv())?;
    let manifest = RunManifest::new("gen")
        .param("seed", args.seed)
        .param("transactions", args.transactions)
        .param("users", args.users)
        .param("items", args.items)
        .param("min_basket", args.min_basket)
        .param("max_basket", args.max_basket)
        .param("year", args.year)
        .param("out", args.out.display().to_string())
        .output(&args.out)
        .emit(out_dir(&args.out))?;
    println!(
        "wrote {} ({} transactions, seed {})",
        args.out.display(),
        db.n_baskets(),
        args.seed
    );
    Ok(vec![args.out.clone(), manifest])
}

pub fn temporal(args: &TemporalArgs) -> Result<Vec<PathBuf>, CliError> {
    let db = load_db(&args.input)?;
    let hourly = hourly_histogram(&db);
    let daily = daily_histogram(&db);
    ensure_dir(&args.out)?;
    let (hourly_path, daily_path) = match args.format {
        OutputFormat::Csv => {
            let h = args.out.join("hourly.csv");
            let d = args.out.join("daily.csv");
            write_file(&h, &hourly.to_csv())?;
            write_file(&d, &daily.to_csv())?;
            (h, d)
        }
        OutputFormat::Json => {
            let h = args.out.join("hourly.json");
            let d = args.out.join("daily.json");
            write_json(&h, &histogram_json(&hourly, "hour"))?;
            write_json(&d, &histogram_json(&daily, "weekday"))?;
            (h, d)
        }
    };
    let manifest = RunManifest::new("temporal")
        .param("format", format!("{:?}", args.format).to_lowercase())
        .param("out", args.out.display().to_string())
        .input(&args.input)?
        .output(&hourly_path)
        .output(&daily_path)
        .emit(&args.out)?;
    println!(
        "wrote {} and {} ({} transactions)",
        hourly_path.display(),
        daily_path.display(),
        hourly.total()
    );
    Ok(vec![hourly_path, daily_path, manifest])
}

pub fn mine_itemsets(args: &MineItemsetsArgs) -> Result<Vec<PathBuf>, CliError> {
    let params = MiningParams {
        min_support: args.min_support,
        max_len: args.max_len,
        ..MiningParams::default()
    };
    params.validate()?; // flag problems are reported before any file I/O
    let db = load_db(&args.input)?;
    let itemsets = mine_frequent(&db, args.algo, &params)?;
    write_json(&args.out, &itemsets)?;
    let manifest = RunManifest::new("mine-itemsets")
        .param("algo", args.algo.name())
        .param("min_support", args.min_support)
        .param("max_len", args.max_len)
        .param("out", args.out.display().to_string())
        .input(&args.input)?
        .output(&args.out)
        .emit(out_dir(&args.out))?;
    println!(
        "wrote {} ({} frequent itemsets)",
        args.out.display(),
        itemsets.len()
    );
    Ok(vec![args.out.clone(), manifest])
}

pub fn mine_rules(args: &MineRulesArgs) -> Result<Vec<PathBuf>, CliError> {
    let params = MiningParams {
        min_support: args.min_support,
        min_confidence: args.min_confidence,
        max_len: args.max_len,
    };
    params.validate()?;
    let db = load_db(&args.input)?;
    let itemsets = mine_frequent(&db, args.algo, &params)?;
    let rules = gen_rules(&itemsets, &params, db.n_baskets())?;
    write_json(&args.out, &rules)?;
    let manifest = RunManifest::new("mine-rules")
        .param("algo", args.algo.name())
        .param("min_support", args.min_support)
        .param("min_confidence", args.min_confidence)
        .param("max_len", args.max_len)
        .param("out", args.out.display().to_string())
        .input(&args.input)?
        .output(&args.out)
        .emit(out_dir(&args.out))?;
    println!("wrote {} ({} rules)", args.out.display(), rules.len());
    Ok(vec![args.out.clone(), manifest])
}

pub fn mine_seq(args: &MineSeqArgs) -> Result<Vec<PathBuf>, CliError> {
    let db = load_db(&args.input)?;
    let sdb = build_sequences(&db);
    let params = SeqParams {
        min_count: args.min_count,
        max_len: args.max_len,
    };
    let patterns = prefixspan(&sdb, &params);
    write_json(&args.out, &patterns)?;
    let manifest = RunManifest::new("mine-seq")
        .param("min_count", args.min_count)
        .param("max_len", args.max_len)
        .param("out", args.out.display().to_string())
        .input(&args.input)?
        .output(&args.out)
        .emit(out_dir(&args.out))?;
    println!(
        "wrote {} ({} sequential patterns over {} users)",
        args.out.display(),
        patterns.len(),
        sdb.n_sequences()
    );
    Ok(vec![args.out.clone(), manifest])
}

/// Mines both channels once and fuses them; shared by `predict` and the
/// pipeline's prediction stage.
fn combined_patterns(
    db: &TransactionDB,
    min_support: f64,
    min_confidence: f64,
    min_count: u64,
) -> Result<Vec<basketmine::CombinedPattern>, CliError> {
    let params = MiningParams {
        min_support,
        min_confidence,
        max_len: None,
    };
    params.validate()?;
    let itemsets = fpgrowth(db, &params)?;
    let rules = gen_rules(&itemsets, &params, db.n_baskets())?;
    let sdb = build_sequences(db);
    // Fusion keeps only each rule's highest-count supporting pattern, and any
    // supporter contains a witness subsequence of exactly the rule's length
    // with at least its count, so mining deeper than the longest rule cannot
    // change the result — it only costs time on dense histories.
    let deepest_rule = rules
        .iter()
        .map(|r| r.antecedent.len() + r.consequent.len())
        .max();
    let patterns = match deepest_rule {
        Some(max_len) => prefixspan(
            &sdb,
            &SeqParams {
                min_count,
                max_len: Some(max_len),
            },
        ),
        None => Vec::new(),
    };
    Ok(combine(&rules, &patterns, sdb.n_sequences()))
}

fn rank_for_user(
    db: &TransactionDB,
    combined: &[basketmine::CombinedPattern],
    user: &str,
    top: usize,
) -> Result<Prediction, CliError> {
    let history = db.user_history(user);
    if history.is_empty() {
        return Err(CliError::Data(format!(
            "user `{user}` has no transactions in the input"
        )));
    }
    Ok(predict_next(combined, user, &history, top))
}

pub fn predict(args: &PredictArgs) -> Result<Vec<PathBuf>, CliError> {
    MiningParams {
        min_support: args.min_support,
        min_confidence: args.min_confidence,
        max_len: None,
    }
    .validate()?;
    let db = load_db(&args.input)?;
    let combined =
        combined_patterns(&db, args.min_support, args.min_confidence, args.min_count)?;
    let prediction = rank_for_user(&db, &combined, &args.user, args.top)?;
    write_json(&args.out, &prediction)?;
    let manifest = RunManifest::new("predict")
        .param("user", args.user.clone())
        .param("top", args.top)
        .param("min_support", args.min_support)
        .param("min_confidence", args.min_confidence)
        .param("min_count", args.min_count)
        .param("out", args.out.display().to_string())
        .input(&args.input)?
        .output(&args.out)
        .emit(out_dir(&args.out))?;
    println!(
        "wrote {} ({} ranked items for {})",
        args.out.display(),
        prediction.predictions.len(),
        args.user
    );
    Ok(vec![args.out.clone(), manifest])
}

fn load_holidays(path: &Path) -> Result<Vec<NaiveDate>, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let mut dates = Vec::new();
    for (idx, line) in text.split('\n').enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let date = NaiveDate::parse_from_str(line, "%Y-%m-%d").map_err(|_| {
            CliError::Data(format!(
                "{}: line {}: expected a YYYY-MM-DD date, found `{line}`",
                path.display(),
                idx + 1
            ))
        })?;
        dates.push(date);
    }
    Ok(dates)
}

pub fn forecast(args: &ForecastArgs) -> Result<Vec<PathBuf>, CliError> {
    ForecastConfig {
        n_changepoints: args.changepoints,
        weekly_order: args.weekly_order,
        yearly_order: args.yearly_order,
        ridge_lambda: args.ridge_lambda,
        ..ForecastConfig::default()
    }
    .validate()?;
    let db = load_db(&args.input)?;
    let series = aggregate_daily(&db)?;
    let n = series.len();
    let holdout = args.holdout.unwrap_or_else(|| (n / 5).max(1));
    if holdout == 0 {
        return Err(CliError::Usage("--holdout must be at least 1 day".into()));
    }
    if n < holdout + MIN_FIT_POINTS {
        return Err(CliError::Data(format!(
            "series spans {n} days; need at least {MIN_FIT_POINTS} training days \
             in addition to the {holdout}-day holdout"
        )));
    }
    let holidays = match &args.holidays {
        Some(path) => load_holidays(path)?,
        None => Vec::new(),
    };
    let cfg = ForecastConfig {
        n_changepoints: args.changepoints,
        weekly_order: args.weekly_order,
        yearly_order: args.yearly_order,
        ridge_lambda: args.ridge_lambda,
        holidays,
        ..ForecastConfig::default()
    };
    let train = TimeSeries::new(series.points()[..n - holdout].to_vec())
        .expect("a prefix of a valid series is valid");
    if cfg.yearly_order > 0 && train.len() < 365 {
        eprintln!(
            "warning: {} training days cannot identify yearly seasonality; \
             consider --yearly-order 0 for series shorter than a year",
            train.len()
        );
    }
    let model = fit(&train, &cfg)?;
    let points = predict_points(&model, holdout + args.horizon);

    let actual: Vec<f64> = series.values()[n - holdout..].to_vec();
    let predicted: Vec<f64> = points[..holdout].iter().map(|p| p.yhat).collect();
    let metrics = evaluate(&actual, &predicted)?;

    let baseline = match args.baseline {
        Some(b) => b,
        None => {
            let values = train.values();
            values.iter().sum::<f64>() / values.len() as f64
        }
    };
    let pct = basketmine::percentage_change(&points, baseline)?;

    ensure_dir(&args.out)?;
    let forecast_path = args.out.join("forecast.csv");
    let mut forecast_csv = String::from("ds,yhat,trend,seasonal,holiday\n");
    for p in &points {
        forecast_csv.push_str(&format!(
            "{},{},{},{},{}\n",
            p.date.format("%Y-%m-%d"),
            p.yhat,
            p.trend_part,
            p.seasonal_part,
            p.holiday_part
        ));
    }
    write_file(&forecast_path, &forecast_csv)?;

    let pct_path = args.out.join("pct_change.csv");
    let mut pct_csv = String::from("ds,percentage_change\n");
    for (date, change) in &pct {
        pct_csv.push_str(&format!("{},{}\n", date.format("%Y-%m-%d"), change));
    }
    write_file(&pct_path, &pct_csv)?;

    let metrics_path = args.out.join("metrics.json");
    write_json(&metrics_path, &metrics)?;

    let manifest = RunManifest::new("forecast")
        .param("horizon", args.horizon)
        .param("holdout", holdout)
        .param("baseline", baseline)
        .param("changepoints", args.changepoints)
        .param("weekly_order", args.weekly_order)
        .param("yearly_order", args.yearly_order)
        .param("ridge_lambda", args.ridge_lambda)
        .param(
            "holidays",
            args.holidays.as_ref().map(|p| p.display().to_string()),
        )
        .param("out", args.out.display().to_string())
        .input(&args.input)?
        .output(&forecast_path)
        .output(&pct_path)
        .output(&metrics_path)
        .emit(&args.out)?;
    println!(
        "wrote {}, {}, {} (holdout {} days, rmse {:.4}, horizon {} days)",
        forecast_path.display(),
        pct_path.display(),
        metrics_path.display(),
        holdout,
        metrics.rmse,
        args.horizon
    );
    Ok(vec![forecast_path, pct_path, metrics_path, manifest])
}

pub fn eval(args: &EvalArgs) -> Result<Vec<PathBuf>, CliError> {
    let actual = read_series(&args.actual)?;
    let predicted = read_series(&args.pred)?;
    let metrics: EvalMetrics = evaluate(&actual, &predicted)?;
    println!(
        "{}",
        serde_json::to_string(&metrics).expect("metrics serialize")
    );
    let mut written = Vec::new();
    if let Some(out) = &args.out {
        write_json(out, &metrics)?;
        let manifest = RunManifest::new("eval")
            .param("out", out.display().to_string())
            .input(&args.actual)?
            .input(&args.pred)?
            .output(out)
            .emit(out_dir(out))?;
        written.push(out.clone());
        written.push(manifest);
    }
    Ok(written)
}

pub fn pipeline(args: &PipelineArgs) -> Result<Vec<PathBuf>, CliError> {
    ensure_dir(&args.out)?;
    let data = args.out.join("data.csv");
    let mut written = Vec::new();

    written.extend(gen(&GenArgs {
        seed: args.seed,
        transactions: args.transactions,
        users: args.users,
        items: args.items,
        min_basket: args.min_basket,
        max_basket: args.max_basket,
        year: args.year,
        out: data.clone(),
    })?);

    written.extend(temporal(&TemporalArgs {
        input: data.clone(),
        format: OutputFormat::Csv,
        out: args.out.clone(),
    })?);

    written.extend(mine_itemsets(&MineItemsetsArgs {
        input: data.clone(),
        algo: args.algo,
        min_support: args.min_support,
        max_len: args.max_len,
        out: args.out.join("itemsets.json"),
    })?);

    written.extend(mine_rules(&MineRulesArgs {
        input: data.clone(),
        algo: args.algo,
        min_support: args.min_support,
        min_confidence: args.min_confidence,
        max_len: args.max_len,
        out: args.out.join("rules.json"),
    })?);

    written.extend(mine_seq(&MineSeqArgs {
        input: data.clone(),
        min_count: args.min_count,
        max_len: args.max_len,
        out: args.out.join("sequences.json"),
    })?);

    // Prediction stage: one ranking object for --user, else one per user.
    let db = load_db(&data)?;
    let predictions_path = args.out.join("predictions.json");
    let ranked_users = match &args.user {
        Some(user) => vec![user.clone()],
        None => db.users(),
    };
    let combined = combined_patterns(&db, args.min_support, args.min_confidence, args.min_count)?;
    let mut rankings = Vec::with_capacity(ranked_users.len());
    for user in &ranked_users {
        rankings.push(rank_for_user(&db, &combined, user, args.top)?);
    }
    if args.user.is_some() {
        write_json(&predictions_path, &rankings[0])?;
    } else {
        write_json(&predictions_path, &rankings)?;
    }
    let predict_manifest = RunManifest::new("predict")
        .param("user", args.user.clone())
        .param("top", args.top)
        .param("min_support", args.min_support)
        .param("min_confidence", args.min_confidence)
        .param("min_count", args.min_count)
        .param("out", predictions_path.display().to_string())
        .input(&data)?
        .output(&predictions_path)
        .emit(&args.out)?;
    println!(
        "wrote {} (rankings for {} user(s))",
        predictions_path.display(),
        ranked_users.len()
    );
    written.push(predictions_path);
    written.push(predict_manifest);

    written.extend(forecast(&ForecastArgs {
        input: data.clone(),
        horizon: args.horizon,
        holdout: args.holdout,
        holidays: None,
        baseline: args.baseline,
        changepoints: args.changepoints,
        weekly_order: args.weekly_order,
        yearly_order: args.yearly_order,
        ridge_lambda: args.ridge_lambda,
        out: args.out.clone(),
    })?);

    let mut manifest = RunManifest::new("pipeline")
        .param("seed", args.seed)
        .param("transactions", args.transactions)
        .param("users", args.users)
        .param("items", args.items)
        .param("min_basket", args.min_basket)
        .param("max_basket", args.max_basket)
        .param("year", args.year)
        .param("algo", args.algo.name())
        .param("min_support", args.min_support)
        .param("min_confidence", args.min_confidence)
        .param("max_len", args.max_len)
        .param("min_count", args.min_count)
        .param("user", args.user.clone())
        .param("top", args.top)
        .param("horizon", args.horizon)
        .param("holdout", args.holdout)
        .param("baseline", args.baseline)
        .param("changepoints", args.changepoints)
        .param("weekly_order", args.weekly_order)
        .param("yearly_order", args.yearly_order)
        .param("ridge_lambda", args.ridge_lambda)
        .param("out", args.out.display().to_string());
    for path in &written {
        manifest = manifest.output(path);
    }
    let manifest_path = manifest.emit(&args.out)?;
    written.push(manifest_path);
    println!(
        "pipeline complete: {} files in {}",
        written.len(),
        args.out.display()
    );
    Ok(written)
}
