use serde::Serialize;

use fthbi::calibrate::{
    best_fixed_exponent_drift, fixed_exponent_report, optimize_exponent_sub, variable_order_report_with,
    BestFixedExponent, CalibrationOptions, CalibrationResult, ErrorReport,
};
use fthbi::oracle::MAX_ETA;
use fthbi::profiles::n_s_fit;
use fthbi::report::{self, arithmetic_grid, exponent_label, profile_sweep, Cell, Sweep, Table};
use fthbi::specfun::{mwright, MWrightOrder};
use fthbi::{EvalMode, ExponentSpec, FractionalOrder, ProblemKind, ProblemSpec};

use crate::config::{default_grid, Axis, Format, Grid, RunConfig};
use crate::CliError;

/// Rendered output plus whether any part of it failed numerically.
pub struct Output {
    pub text: String,
    pub failure: Option<String>,
}

impl Output {
    fn ok(text: String) -> Self {
        Self { text, failure: None }
    }
}

fn render_table(table: &Table, format: Format) -> Result<String, CliError> {
    match format {
        Format::Csv => Ok(table.to_csv()),
        Format::Json => to_json(table),
    }
}

fn to_json<T: Serialize>(value: &T) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| CliError::Io(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

fn grid_values(grid: Grid) -> Result<Vec<f64>, CliError> {
    Ok(arithmetic_grid(grid.min, grid.max, grid.step)?)
}

pub fn table(which: u8, front_gamma: Option<f64>, cfg: &RunConfig) -> Result<Output, CliError> {
    let table = match (which, front_gamma) {
        (1, None) => {
            let orders: Vec<f64> = match &cfg.mu {
                Some(m) => m.iter().map(|o| o.value()).collect(),
                None => report::TABLE1_ORDERS.to_vec(),
            };
            report::table1(&orders, &CalibrationOptions::default())?
        }
        (2, None) => report::table2()?,
        (3, None) => report::table3()?,
        (3, Some(g)) => report::table3_with_front_gamma(g)?,
        (_, Some(_)) => return Err(CliError::Config("--front-gamma applies to table 3 only".into())),
        (n, _) => return Err(CliError::Config(format!("no table {n}; expected 1, 2 or 3"))),
    };
    Ok(Output::ok(render_table(&table, cfg.format)?))
}

pub fn profile(cfg: &RunConfig) -> Result<Output, CliError> {
    let mu = cfg.single_mu()?.ok_or_else(|| CliError::Config("profile needs --mu".into()))?;
    let spec = ProblemSpec::new(cfg.problem, mu, cfg.coeff)?;
    let exponents = if !cfg.exponents.is_empty() {
        cfg.exponents.clone()
    } else if cfg.problem == ProblemKind::Subdiffusion {
        vec![ExponentSpec::fixed(n_s_fit(mu))?]
    } else {
        return Err(CliError::Config("drift profiles need --exponent or --exponent-rule".into()));
    };
    let grid = grid_values(cfg.grid.or(default_grid(cfg.sweep)).expect("every axis has a default grid"))?;
    let sweep = match cfg.sweep {
        Axis::Eta => Sweep::Eta(grid),
        Axis::X => Sweep::Space { t: cfg.time.unwrap_or(1.0), xs: grid },
        Axis::T => Sweep::Time { x: cfg.x.unwrap_or(0.5), ts: grid },
    };
    let mode = if cfg.clamp { EvalMode::Clamped } else { EvalMode::Raw };
    let table = profile_sweep(&spec, &exponents, cfg.front, &sweep, mode)?;
    Ok(Output::ok(render_table(&table, cfg.format)?))
}

#[derive(Serialize)]
#[serde(untagged)]
enum SubEntry {
    Ok(CalibrationResult),
    Failed { mu: FractionalOrder, error: String },
}

#[derive(Serialize)]
struct ExponentReport {
    mu: FractionalOrder,
    exponent: String,
    #[serde(flatten)]
    report: ErrorReport,
}

#[derive(Serialize)]
#[serde(tag = "problem", rename_all = "lowercase")]
enum CalibrationReport {
    Subdiffusion { results: Vec<SubEntry> },
    Drift { best_fit: Vec<BestFixedExponent>, reports: Vec<ExponentReport> },
}

pub fn calibrate(cfg: &RunConfig) -> Result<Output, CliError> {
    let orders: Vec<FractionalOrder> = match &cfg.mu {
        Some(m) => m.clone(),
        None => report::TABLE1_ORDERS.iter().map(|&m| FractionalOrder::new(m)).collect::<Result<_, _>>()?,
    };
    match cfg.problem {
        ProblemKind::Subdiffusion => calibrate_sub(&orders, cfg.format),
        ProblemKind::Drift => calibrate_drift(&orders, cfg),
    }
}

fn calibrate_sub(orders: &[FractionalOrder], format: Format) -> Result<Output, CliError> {
    let mut results = Vec::with_capacity(orders.len());
    let mut failure = None;
    for &mu in orders {
        match optimize_exponent_sub(mu) {
            Ok(r) => results.push(SubEntry::Ok(r)),
            Err(e) => {
                failure.get_or_insert_with(|| format!("mu = {}: {e}", mu.value()));
                results.push(SubEntry::Failed { mu, error: e.to_string() });
            }
        }
    }
    let text = match format {
        Format::Json => to_json(&CalibrationReport::Subdiffusion { results })?,
        Format::Csv => {
            let mut t = Table::new(["mu", "n_s", "objective", "status"].map(str::to_owned).to_vec());
            for r in results {
                t.rows.push(match r {
                    SubEntry::Ok(r) => vec![
                        Cell::Num(r.mu.value()),
                        Cell::Num(r.optimal_n),
                        Cell::Num(r.objective_value),
                        Cell::Text("ok".into()),
                    ],
                    SubEntry::Failed { mu, error } => {
                        vec![Cell::Num(mu.value()), Cell::Empty, Cell::Empty, Cell::Text(format!("error: {error}"))]
                    }
                });
            }
            t.to_csv()
        }
    };
    Ok(Output { text, failure })
}

/// Without exponents: best constant n over the η range. With exponents:
/// an error report for each one over the η grid.
fn calibrate_drift(orders: &[FractionalOrder], cfg: &RunConfig) -> Result<Output, CliError> {
    let grid = cfg.grid.unwrap_or(Grid { min: 0.0, max: MAX_ETA, step: 0.05 });
    let mut best_fit = Vec::new();
    let mut reports = Vec::new();
    for &mu in orders {
        if cfg.exponents.is_empty() {
            best_fit.push(best_fixed_exponent_drift(mu, grid.min, grid.max, cfg.metric)?);
            continue;
        }
        let etas = grid_values(grid)?;
        for e in &cfg.exponents {
            let report = match e {
                ExponentSpec::Fixed(n) => fixed_exponent_report(mu, *n, &etas)?,
                rule => variable_order_report_with(mu, *rule, &etas, cfg.front)?,
            };
            reports.push(ExponentReport { mu, exponent: exponent_label(e), report });
        }
    }
    let text = match cfg.format {
        Format::Json => to_json(&CalibrationReport::Drift { best_fit, reports })?,
        Format::Csv if cfg.exponents.is_empty() => {
            let mut t = Table::new(["mu", "n", "metric_value", "eta_min", "eta_max"].map(str::to_owned).to_vec());
            for b in best_fit {
                t.rows.push([b.mu.value(), b.n, b.metric_value, b.eta_range.0, b.eta_range.1].map(Cell::Num).to_vec());
            }
            t.to_csv()
        }
        Format::Csv => {
            let columns = ["mu", "exponent", "max_abs", "mean_abs", "rms", "max_abs_percent", "dropped"];
            let mut t = Table::new(columns.map(str::to_owned).to_vec());
            for r in reports {
                let e = &r.report;
                t.rows.push(vec![
                    Cell::Num(r.mu.value()),
                    Cell::Text(r.exponent),
                    Cell::Num(e.max_abs),
                    Cell::Num(e.mean_abs),
                    Cell::Num(e.rms),
                    Cell::Num(e.max_abs_percent),
                    Cell::Num(e.dropped.len() as f64),
                ]);
            }
            t.to_csv()
        }
    };
    Ok(Output::ok(text))
}

/// M_ν(z) over the grid, ν taken from --mu.
pub fn mwright_values(cfg: &RunConfig) -> Result<Output, CliError> {
    let nu = cfg.single_mu()?.ok_or_else(|| CliError::Config("mwright needs --mu (the order ν)".into()))?;
    let order = MWrightOrder::new(nu.value())?;
    let zs = grid_values(cfg.grid.unwrap_or(Grid { min: 0.0, max: 5.0, step: 0.1 }))?;
    let mut t = Table::new(vec!["z".into(), "m".into()]);
    for z in zs {
        t.rows.push(vec![Cell::Num(z), Cell::Num(mwright(order, z)?)]);
    }
    Ok(Output::ok(render_table(&t, cfg.format)?))
}
