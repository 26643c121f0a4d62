//! Fits of the embedded tables against their published columns, and plain
//! text / CSV / JSON rendering of fit results.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::dataset::CountDataset;
use crate::error::{Error, Result};
use crate::fitting::{fit_model, FitResult, ModelKind, ModelParams, NbShape};
use crate::fixtures::{Fixture, PublishedColumn, FIXTURES};
use crate::ndoppe::CoefficientVector;
use crate::simulate::Execution;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Text,
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "text" | "table" => Ok(OutputFormat::Text),
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(Error::invalid(
                "format",
                format!("unknown format `{other}`; expected text, csv or json"),
            )),
        }
    }
}

/// Formats a real with 7 significant digits.
pub fn sig7(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let exponent = x.abs().log10().floor() as i32;
    if (-4..=6).contains(&exponent) {
        format!("{:.*}", (6 - exponent).max(0) as usize, x)
    } else {
        format!("{x:.6e}")
    }
}

/// `|ours - published| / |published|`.
pub fn relative_error(ours: f64, published: f64) -> f64 {
    (ours - published).abs() / published.abs()
}

/// Published cells below this size are compared on absolute error.
pub const SMALL_CELL: f64 = 10.0;

/// Cell tolerance: `rel_tol` relative, or `abs_tol` absolute when the
/// published cell is below [`SMALL_CELL`].
pub fn cell_within(ours: f64, published: f64, rel_tol: f64, abs_tol: f64) -> bool {
    if published.abs() < SMALL_CELL {
        (ours - published).abs() <= abs_tol
    } else {
        relative_error(ours, published) <= rel_tol
    }
}

/// Relative errors of one fitted column against its published counterpart.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ColumnComparison {
    pub model: ModelKind,
    /// `None` for cells excluded from comparison.
    pub cells: Vec<Option<f64>>,
    pub nll: f64,
    pub chi_sq: f64,
}

impl ColumnComparison {
    fn new(fit: &FitResult, published: &PublishedColumn, excluded: &[u64]) -> Self {
        let cells = fit
            .counts
            .iter()
            .zip(&fit.fitted)
            .zip(published.fitted)
            .map(|((x, ours), theirs)| (!excluded.contains(x)).then(|| relative_error(*ours, *theirs)))
            .collect();
        Self {
            model: fit.model(),
            cells,
            nll: relative_error(fit.nll, published.nll),
            chi_sq: relative_error(fit.chi_sq, published.chi_sq),
        }
    }

    pub fn max_cell(&self) -> f64 {
        self.cells.iter().flatten().fold(0.0, |m, e| m.max(*e))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableReport {
    pub id: String,
    pub n: u64,
    pub fits: Vec<FitResult>,
    pub comparisons: Vec<ColumnComparison>,
}

impl TableReport {
    pub fn fit(&self, model: ModelKind) -> Option<&FitResult> {
        self.fits.iter().find(|f| f.model() == model)
    }

    pub fn comparison(&self, model: ModelKind) -> Option<&ColumnComparison> {
        self.comparisons.iter().find(|c| c.model == model)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub nb_shape: NbShape,
    pub tables: Vec<TableReport>,
}

/// Fits Poisson, negative binomial and NDOPPE to one fixture and compares with the published values.
pub fn report_fixture(fixture: &Fixture, nb_shape: NbShape) -> Result<TableReport> {
    let data = fixture.dataset();
    let coeffs = fixture.coefficients();
    let fits = ModelKind::ALL
        .iter()
        .map(|&kind| fit_model(&data, kind, &coeffs, nb_shape))
        .collect::<Result<Vec<_>>>()?;
    let comparisons = fits
        .iter()
        .map(|fit| match fit.model() {
            ModelKind::Poisson => ColumnComparison::new(fit, &fixture.poisson, &[]),
            ModelKind::NegBin => ColumnComparison::new(fit, &fixture.negbin, &[]),
            ModelKind::Ndoppe => ColumnComparison::new(fit, &fixture.ndoppe, fixture.excluded_ndoppe_cells),
        })
        .collect();
    Ok(TableReport {
        id: fixture.id.to_string(),
        n: data.n(),
        fits,
        comparisons,
    })
}

/// Runs [`report_fixture`] over all embedded tables.
pub fn build_report(nb_shape: NbShape, execution: Execution) -> Result<Report> {
    let tables: Vec<Result<TableReport>> = match execution {
        #[cfg(feature = "parallel")]
        Execution::Parallel => {
            use rayon::prelude::*;
            FIXTURES.par_iter().map(|f| report_fixture(f, nb_shape)).collect()
        }
        _ => FIXTURES.iter().map(|f| report_fixture(f, nb_shape)).collect(),
    };
    Ok(Report {
        nb_shape,
        tables: tables.into_iter().collect::<Result<_>>()?,
    })
}

/// Fits the requested models to one dataset.
pub fn fit_models(
    data: &CountDataset,
    models: &[ModelKind],
    coeffs: &CoefficientVector,
    nb_shape: NbShape,
) -> Result<Vec<FitResult>> {
    models.iter().map(|&m| fit_model(data, m, coeffs, nb_shape)).collect()
}

fn describe_params(params: &ModelParams) -> String {
    match params {
        ModelParams::Poisson { rate } => format!("alpha={}", sig7(*rate)),
        ModelParams::NegBin { size, prob } => format!("r={} p={}", sig7(*size), sig7(*prob)),
        ModelParams::Ndoppe { coeffs, theta } => format!("a=[{coeffs}] theta={}", sig7(*theta)),
    }
}

fn render_fits_text(out: &mut String, fits: &[FitResult]) {
    let Some(first) = fits.first() else { return };
    let width = 14;
    let _ = write!(out, "{:>6} {:>width$}", "count", "observed");
    for fit in fits {
        let _ = write!(out, " {:>width$}", fit.model().name());
    }
    out.push('\n');
    for (i, (x, o)) in first.counts.iter().zip(&first.observed).enumerate() {
        let _ = write!(out, "{x:>6} {o:>width$}");
        for fit in fits {
            let _ = write!(out, " {:>width$}", sig7(fit.fitted[i]));
        }
        out.push('\n');
    }
    for (label, pick) in [
        ("NLL", (|f: &FitResult| f.nll) as fn(&FitResult) -> f64),
        ("chi-sq", |f| f.chi_sq),
    ] {
        let _ = write!(out, "{label:>6} {:>width$}", "");
        for fit in fits {
            let _ = write!(out, " {:>width$}", sig7(pick(fit)));
        }
        out.push('\n');
    }
    for fit in fits {
        let _ = writeln!(out, "{}: {}", fit.model().name(), describe_params(&fit.params));
        for w in &fit.warnings {
            let _ = writeln!(out, "  warning: {w}");
        }
    }
}

fn render_fits_csv(out: &mut String, fits: &[FitResult], prefix: Option<&str>) {
    let Some(first) = fits.first() else { return };
    let lead = prefix.map(|p| format!("{p},")).unwrap_or_default();
    for (i, (x, o)) in first.counts.iter().zip(&first.observed).enumerate() {
        let _ = write!(out, "{lead}{x},{o}");
        for fit in fits {
            let _ = write!(out, ",{}", sig7(fit.fitted[i]));
        }
        out.push('\n');
    }
    for (label, pick) in [
        ("nll", (|f: &FitResult| f.nll) as fn(&FitResult) -> f64),
        ("chi_sq", |f| f.chi_sq),
    ] {
        let _ = write!(out, "{lead}{label},");
        for fit in fits {
            let _ = write!(out, ",{}", sig7(pick(fit)));
        }
        out.push('\n');
    }
}

fn csv_header(fits: &[FitResult], with_table: bool) -> String {
    let mut header = String::from(if with_table {
        "table,count,observed"
    } else {
        "count,observed"
    });
    for fit in fits {
        header.push(',');
        header.push_str(fit.model().name());
    }
    header.push('\n');
    header
}

/// Renders the fits of one dataset. JSON output deserializes back into `Vec<FitResult>`.
pub fn render_fits(fits: &[FitResult], format: OutputFormat) -> Result<String> {
    Ok(match format {
        OutputFormat::Text => {
            let mut out = String::new();
            render_fits_text(&mut out, fits);
            out
        }
        OutputFormat::Csv => {
            let mut out = csv_header(fits, false);
            render_fits_csv(&mut out, fits, None);
            out
        }
        OutputFormat::Json => to_json(fits)?,
    })
}

fn to_json<T: Serialize + ?Sized>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| Error::Io(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

/// Renders the full table comparison.
pub fn render_report(report: &Report, format: OutputFormat) -> Result<String> {
    Ok(match format {
        OutputFormat::Json => to_json(report)?,
        OutputFormat::Csv => {
            let mut out = String::new();
            if let Some(t) = report.tables.first() {
                out.push_str(&csv_header(&t.fits, true));
            }
            for t in &report.tables {
                render_fits_csv(&mut out, &t.fits, Some(&t.id));
            }
            out
        }
        OutputFormat::Text => {
            let mut out = String::new();
            for t in &report.tables {
                let _ = writeln!(out, "== {} (n = {}) ==", t.id, t.n);
                render_fits_text(&mut out, &t.fits);
                out.push('\n');
            }
            let _ = writeln!(out, "relative error against published values");
            let _ = writeln!(
                out,
                "{:<8} {:<8} {:>12} {:>12} {:>12}",
                "table", "model", "max cell", "NLL", "chi-sq"
            );
            for t in &report.tables {
                for c in &t.comparisons {
                    let _ = writeln!(
                        out,
                        "{:<8} {:<8} {:>12.3e} {:>12.3e} {:>12.3e}",
                        t.id,
                        c.model.name(),
                        c.max_cell(),
                        c.nll,
                        c.chi_sq
                    );
                }
            }
            out
        }
    })
}
