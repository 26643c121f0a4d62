//! Claim-count frequency tables.

use std::collections::BTreeMap;
use std::io::Read;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Observed frequencies per count value, sorted by count.
///
/// Cells with zero frequency are kept: they still contribute to the
/// chi-square statistic.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountDataset {
    counts: Vec<u64>,
    frequencies: Vec<u64>,
}

impl CountDataset {
    /// Builds a dataset from `(count, frequency)` cells in any order.
    pub fn from_cells(cells: impl IntoIterator<Item = (u64, u64)>) -> Result<Self> {
        let mut table = BTreeMap::new();
        for (count, freq) in cells {
            if table.insert(count, freq).is_some() {
                return Err(Error::DuplicateCount { count });
            }
        }
        if table.values().all(|f| *f == 0) {
            return Err(Error::EmptyDataset);
        }
        let (counts, frequencies) = table.into_iter().unzip();
        Ok(Self { counts, frequencies })
    }

    /// Frequencies for counts `0, 1, 2, …`.
    pub fn from_frequencies(frequencies: &[u64]) -> Result<Self> {
        Self::from_cells(frequencies.iter().enumerate().map(|(x, &f)| (x as u64, f)))
    }

    /// Parses CSV with a `count,frequency` header; lines starting with `#` are comments.
    pub fn from_reader<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .comment(Some(b'#'))
            .trim(csv::Trim::All)
            .from_reader(reader);
        let header = rdr.headers().map_err(|e| csv_error(&e))?.clone();
        if header.len() != 2 || &header[0] != "count" || &header[1] != "frequency" {
            return Err(Error::Parse {
                line: 1,
                reason: format!(
                    "expected header `count,frequency`, found `{}`",
                    header.iter().collect::<Vec<_>>().join(",")
                ),
            });
        }

        let mut cells = Vec::new();
        for record in rdr.records() {
            let record = record.map_err(|e| csv_error(&e))?;
            let line = record.position().map_or(0, |p| p.line());
            if record.len() != 2 {
                return Err(Error::Parse {
                    line,
                    reason: format!("expected 2 fields, found {}", record.len()),
                });
            }
            let count: u64 = record[0].parse().map_err(|e| Error::Parse {
                line,
                reason: format!("count `{}`: {e}", &record[0]),
            })?;
            let freq: i64 = record[1].parse().map_err(|e| Error::Parse {
                line,
                reason: format!("frequency `{}`: {e}", &record[1]),
            })?;
            if freq < 0 {
                return Err(Error::NegativeFrequency { line, value: freq });
            }
            cells.push((count, freq as u64));
        }
        Self::from_cells(cells)
    }

    pub fn from_csv_str(text: &str) -> Result<Self> {
        Self::from_reader(text.as_bytes())
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn frequencies(&self) -> &[u64] {
        &self.frequencies
    }

    pub fn cells(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        self.counts.iter().copied().zip(self.frequencies.iter().copied())
    }

    /// Total number of observations.
    pub fn n(&self) -> u64 {
        self.frequencies.iter().sum()
    }

    /// Sum of all observed counts.
    pub fn total(&self) -> f64 {
        self.cells().map(|(x, f)| x as f64 * f as f64).sum()
    }

    pub fn mean(&self) -> f64 {
        self.total() / self.n() as f64
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("count,frequency\n");
        for (x, f) in self.cells() {
            out.push_str(&format!("{x},{f}\n"));
        }
        out
    }
}

/// Reads a dataset from a CSV file.
pub fn ingest(path: impl AsRef<Path>) -> Result<CountDataset> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    CountDataset::from_reader(std::io::BufReader::new(file))
}

fn csv_error(e: &csv::Error) -> Error {
    match e.position() {
        Some(p) => Error::Parse {
            line: p.line(),
            reason: e.to_string(),
        },
        None => Error::Io(e.to_string()),
    }
}
