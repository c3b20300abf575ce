//! Table and sweep generation with a fixed CSV dialect.
//!
//! CSV: comma separated, '.' decimal point, LF line endings, one header
//! row. Numbers print with 4 fractional digits; undefined cells are empty.

use std::fmt::Write as _;

use serde::{Serialize, Serializer};

use crate::calibrate::{optimize_exponent_sub_with, CalibrationOptions};
use crate::error::{Error, Result};
use crate::oracle::ExactProfile;
use crate::profiles::{
    j_factor_subdiffusion, EvalMode, ExponentSpec, FractionalOrder, FrontMode, ProblemKind, ProblemSpec,
    SimilarityProfile,
};

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Empty,
    Text(String),
}

impl Cell {
    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Cell::Num(v) => Some(*v),
            _ => None,
        }
    }
}

impl From<Option<f64>> for Cell {
    fn from(v: Option<f64>) -> Self {
        v.map_or(Cell::Empty, Cell::Num)
    }
}

impl Serialize for Cell {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Cell::Num(v) => s.serialize_f64(*v),
            Cell::Empty => s.serialize_none(),
            Cell::Text(t) => s.serialize_str(t),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: Vec<String>) -> Self {
        Self { columns, rows: Vec::new() }
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    /// Cell at (row whose first column equals `key`, named column).
    pub fn lookup(&self, key: f64, column: &str) -> Option<&Cell> {
        let col = self.column(column)?;
        self.rows.iter().find(|r| r[0].as_f64().is_some_and(|k| (k - key).abs() < 1e-9)).map(|r| &r[col])
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(format_cell).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new().has_headers(true).from_reader(text.as_bytes());
        let columns = reader
            .headers()
            .map_err(|e| Error::InvalidParameter(format!("csv header: {e}")))?
            .iter()
            .map(str::to_owned)
            .collect::<Vec<_>>();
        let mut table = Table::new(columns);
        for record in reader.records() {
            let record = record.map_err(|e| Error::InvalidParameter(format!("csv record: {e}")))?;
            table.rows.push(record.iter().map(parse_cell).collect());
        }
        Ok(table)
    }
}

/// Four fractional digits, round-half-even on the binary value, no "-0.0000".
pub fn format_fixed4(v: f64) -> String {
    let s = format!("{v:.4}");
    if s == "-0.0000" {
        "0.0000".to_owned()
    } else {
        s
    }
}

fn format_cell(c: &Cell) -> String {
    match c {
        Cell::Num(v) => format_fixed4(*v),
        Cell::Empty => String::new(),
        Cell::Text(t) => {
            if t.contains([',', '"', '\n']) {
                format!("\"{}\"", t.replace('"', "\"\""))
            } else {
                t.clone()
            }
        }
    }
}

fn parse_cell(s: &str) -> Cell {
    if s.is_empty() {
        Cell::Empty
    } else {
        s.parse::<f64>().map_or_else(|_| Cell::Text(s.to_owned()), Cell::Num)
    }
}

/// Column label for an exponent: "n=1.25", "hyperbolic(n0=1)".
/// Values are shown to at most 4 decimals.
pub fn exponent_label(e: &ExponentSpec) -> String {
    let short = |v: f64| (v * 1e4).round() / 1e4;
    match e {
        ExponentSpec::Fixed(n) => format!("n={}", short(*n)),
        ExponentSpec::Hyperbolic(n0) => format!("hyperbolic(n0={})", short(*n0)),
        ExponentSpec::InverseExponential(n0) => format!("invexp(n0={})", short(*n0)),
    }
}

pub const TABLE2_ETAS: [f64; 28] = [
    0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0, 1.25, 1.5, 1.75, 2.0, 2.25, 2.5, 2.75, 3.0, 3.25, 3.75, 4.0,
    4.25, 4.5, 4.75, 5.0, 5.25, 5.5, 6.0,
];
pub const TABLE2_EXPONENTS: [f64; 7] = [1.0, 1.25, 1.5, 1.75, 2.0, 2.25, 2.5];
pub const TABLE3_ETAS: [f64; 26] = [
    0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0, 1.25, 1.5, 1.75, 2.0, 2.25, 2.5, 2.75, 3.0, 3.25, 3.75, 4.0,
    4.25, 4.5, 4.75, 5.0, 5.25,
];
pub const TABLE3_EXPONENTS: [f64; 6] = [1.0, 1.25, 1.5, 1.75, 2.0, 2.25];
pub const TABLE1_ORDERS: [f64; 9] = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9];

/// Exact column then one Raw profile column per exponent.
///
/// `front_gamma` replaces Γ(2-μ) in λ = n(n+1)Γ(2-μ) when set.
pub fn drift_table(mu: FractionalOrder, etas: &[f64], exponents: &[f64], front_gamma: Option<f64>) -> Result<Table> {
    let mut columns = vec!["eta".to_owned(), "exact".to_owned()];
    let mut profiles = Vec::with_capacity(exponents.len());
    for &n in exponents {
        let spec = ExponentSpec::fixed(n)?;
        let profile = match front_gamma {
            None => SimilarityProfile::for_problem(ProblemKind::Drift, mu, spec, FrontMode::Recompute)?,
            Some(g) => SimilarityProfile::new(n * (n + 1.0) * g, n)?,
        };
        columns.push(exponent_label(&spec));
        profiles.push(profile);
    }
    let exact = ExactProfile::new(mu);
    let mut table = Table::new(columns);
    for &eta in etas {
        let mut row = vec![Cell::Num(eta), Cell::Num(exact.eval(eta)?)];
        for p in &profiles {
            row.push(p.eval(eta, EvalMode::Raw)?.into());
        }
        table.rows.push(row);
    }
    Ok(table)
}

pub fn table2() -> Result<Table> {
    drift_table(FractionalOrder::new(0.5)?, &TABLE2_ETAS, &TABLE2_EXPONENTS, None)
}

pub fn table3() -> Result<Table> {
    drift_table(FractionalOrder::new(1.0 / 3.0)?, &TABLE3_ETAS, &TABLE3_EXPONENTS, None)
}

/// Table 3 with the front factor Γ(2-μ) replaced by `gamma_value`.
pub fn table3_with_front_gamma(gamma_value: f64) -> Result<Table> {
    drift_table(FractionalOrder::new(1.0 / 3.0)?, &TABLE3_ETAS, &TABLE3_EXPONENTS, Some(gamma_value))
}

/// Calibrated subdiffusion exponent and j_μ per order; failures keep the
/// row with an empty n_s and the error text in `status`.
pub fn table1(orders: &[f64], opts: &CalibrationOptions) -> Result<Table> {
    let mut table = Table::new(["mu", "n_s", "j_mu", "objective", "status"].map(str::to_owned).to_vec());
    for &m in orders {
        let mu = FractionalOrder::new(m)?;
        let j = j_factor_subdiffusion(mu);
        let row = match optimize_exponent_sub_with(mu, opts) {
            Ok(r) => vec![
                Cell::Num(m),
                Cell::Num(r.optimal_n),
                Cell::Num(j),
                Cell::Num(r.objective_value),
                Cell::Text("ok".into()),
            ],
            Err(e) => vec![Cell::Num(m), Cell::Empty, Cell::Num(j), Cell::Empty, Cell::Text(format!("error: {e}"))],
        };
        table.rows.push(row);
    }
    Ok(table)
}

/// What a profile sweep varies.
#[derive(Debug, Clone, PartialEq)]
pub enum Sweep {
    /// Similarity variable.
    Eta(Vec<f64>),
    /// Position at a fixed time.
    Space { t: f64, xs: Vec<f64> },
    /// Time at a fixed position.
    Time { x: f64, ts: Vec<f64> },
}

/// Θ curves for each exponent along the sweep.
pub fn profile_sweep(
    spec: &ProblemSpec,
    exponents: &[ExponentSpec],
    front: FrontMode,
    sweep: &Sweep,
    mode: EvalMode,
) -> Result<Table> {
    let profiles = exponents
        .iter()
        .map(|e| SimilarityProfile::for_problem(spec.kind(), spec.mu(), *e, front))
        .collect::<Result<Vec<_>>>()?;
    let labels = exponents.iter().map(exponent_label);
    let mut columns: Vec<String> = match sweep {
        Sweep::Eta(_) => vec!["eta".into()],
        Sweep::Space { .. } => vec!["x".into(), "eta".into()],
        Sweep::Time { .. } => vec!["t".into(), "eta".into()],
    };
    columns.extend(labels);
    let mut table = Table::new(columns);

    let eval_row = |eta: f64, mut row: Vec<Cell>| -> Result<Vec<Cell>> {
        for p in &profiles {
            row.push(match p.eval(eta, mode) {
                Ok(v) => v.into(),
                Err(Error::Domain { .. }) => Cell::Empty,
                Err(e) => return Err(e),
            });
        }
        Ok(row)
    };
    match sweep {
        Sweep::Eta(etas) => {
            for &eta in etas {
                table.rows.push(eval_row(eta, vec![Cell::Num(eta)])?);
            }
        }
        Sweep::Space { t, xs } => {
            for &x in xs {
                let eta = crate::profiles::similarity_eta(spec, x, *t)?;
                table.rows.push(eval_row(eta, vec![Cell::Num(x), Cell::Num(eta)])?);
            }
        }
        Sweep::Time { x, ts } => {
            for &t in ts {
                if t == 0.0 {
                    // δ(0) = 0: only the boundary itself is disturbed.
                    let theta = if *x == 0.0 { 1.0 } else { 0.0 };
                    let mut row = vec![Cell::Num(t), Cell::Empty];
                    row.extend(profiles.iter().map(|_| Cell::Num(theta)));
                    table.rows.push(row);
                    continue;
                }
                let eta = crate::profiles::similarity_eta(spec, *x, t)?;
                table.rows.push(eval_row(eta, vec![Cell::Num(t), Cell::Num(eta)])?);
            }
        }
    }
    Ok(table)
}

/// Inclusive arithmetic grid min, min+step, …, ≤ max.
pub fn arithmetic_grid(min: f64, max: f64, step: f64) -> Result<Vec<f64>> {
    if !(min.is_finite() && max.is_finite() && step.is_finite()) || !(min < max) || !(step > 0.0) {
        return Err(Error::InvalidParameter(format!("invalid grid min={min} max={max} step={step}")));
    }
    let count = ((max - min) / step + 1e-9).floor() as usize + 1;
    Ok((0..count).map(|i| min + step * i as f64).collect())
}

/// Plain-text rendering for terminals.
pub fn to_text(table: &Table) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{}", table.columns.join("\t"));
    for row in &table.rows {
        let cells: Vec<String> = row.iter().map(format_cell).collect();
        let _ = writeln!(out, "{}", cells.join("\t"));
    }
    out
}
