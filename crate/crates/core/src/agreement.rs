//! Agreement-table mathematics: observed agreement, marginals, proportion
//! and chance-expected tables, and Cohen's kappa.
//!
//! An [`AgreementTable`] stores raw integer counts of paired classifications
//! (rows = first evaluation, columns = second evaluation) over a
//! [`CategoryScheme`]. Counts, never proportions, are the source of truth;
//! every derived statistic divides them on demand, so published diagonal/total
//! fractions reproduce exactly.
//!
//! Kappa is `(P_o - P_e) / (1 - P_e)`: the observed agreement discounted by
//! the agreement a blind rater drawing independently from the table's own
//! marginals would reach. When all mass sits in one diagonal cell, `P_e = 1`
//! and kappa is reported as [`Kappa::Degenerate`] instead of a number, so
//! batch analyses keep going past pathological tables.

use std::fmt;
use std::io::BufRead;

use thiserror::Error;

use crate::categories::CategoryScheme;

/// Threshold below which `1 - P_e` is treated as zero and kappa as degenerate.
const DEGENERACY_EPS: f64 = 1e-12;

/// Tolerance for "cells sum to 1" checks on proportion tables.
const SUM_EPS: f64 = 1e-12;

/// Errors from table construction and table CSV parsing.
#[derive(Debug, Error, PartialEq)]
pub enum TableError {
    #[error("count matrix is not square: row {row} has {found} entries, expected {expected}")]
    NotSquare {
        row: usize,
        found: usize,
        expected: usize,
    },
    #[error("count matrix is {found}x{found} but the scheme has {expected} categories")]
    SchemeSizeMismatch { found: usize, expected: usize },
    #[error("negative count {value} at row {row}, column {col}")]
    NegativeCount { row: usize, col: usize, value: i64 },
    #[error("table has zero total count")]
    ZeroTotal,
    #[error("proportion {value} at row {row}, column {col} is outside [0, 1]")]
    ProportionOutOfRange { row: usize, col: usize, value: f64 },
    #[error("proportions sum to {0}, expected 1")]
    ProportionsNotNormalized(f64),
    #[error("line {line}: {message}")]
    Csv { line: usize, message: String },
}

/// Which margin of a table to sum over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    Rows,
    Cols,
}

/// Cohen's kappa, or a flag when the chance-expected agreement is 1 and the
/// ratio is undefined.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Kappa {
    Value(f64),
    Degenerate,
}

impl Kappa {
    pub fn value(&self) -> Option<f64> {
        match self {
            Kappa::Value(v) => Some(*v),
            Kappa::Degenerate => None,
        }
    }

    pub fn is_degenerate(&self) -> bool {
        matches!(self, Kappa::Degenerate)
    }
}

impl fmt::Display for Kappa {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Kappa::Value(v) => write!(f, "{v}"),
            Kappa::Degenerate => f.write_str("degenerate"),
        }
    }
}

/// Kappa from an observed/expected agreement pair.
pub fn kappa_from_rates(p_observed: f64, p_expected: f64) -> Kappa {
    if 1.0 - p_expected < DEGENERACY_EPS {
        Kappa::Degenerate
    } else {
        Kappa::Value((p_observed - p_expected) / (1.0 - p_expected))
    }
}

/// The statistics of one agreement table, bundled.
#[derive(Debug, Clone, PartialEq)]
pub struct AgreementSummary {
    pub p_observed: f64,
    pub p_expected: f64,
    pub kappa: Kappa,
    pub row_marginals: Vec<f64>,
    pub col_marginals: Vec<f64>,
    /// Total number of paired evaluations behind the table.
    pub n: u64,
}

/// A square matrix of paired-classification counts over a scheme.
#[derive(Debug, Clone, PartialEq)]
pub struct AgreementTable {
    scheme: CategoryScheme,
    /// Row-major K×K counts; rows = first evaluation, cols = second.
    counts: Vec<u64>,
    total: u64,
}

impl AgreementTable {
    /// Validates and wraps a count matrix.
    ///
    /// The matrix must be square with one row per scheme category, entries
    /// must be nonnegative, and the grand total must be at least 1.
    pub fn from_counts(matrix: &[Vec<i64>], scheme: CategoryScheme) -> Result<Self, TableError> {
        let k = matrix.len();
        for (row, entries) in matrix.iter().enumerate() {
            if entries.len() != k {
                return Err(TableError::NotSquare {
                    row,
                    found: entries.len(),
                    expected: k,
                });
            }
        }
        if k != scheme.len() {
            return Err(TableError::SchemeSizeMismatch {
                found: k,
                expected: scheme.len(),
            });
        }
        let mut counts = Vec::with_capacity(k * k);
        for (row, entries) in matrix.iter().enumerate() {
            for (col, &value) in entries.iter().enumerate() {
                if value < 0 {
                    return Err(TableError::NegativeCount { row, col, value });
                }
                counts.push(value as u64);
            }
        }
        let total: u64 = counts.iter().sum();
        if total == 0 {
            return Err(TableError::ZeroTotal);
        }
        Ok(Self {
            scheme,
            counts,
            total,
        })
    }

    pub fn scheme(&self) -> &CategoryScheme {
        &self.scheme
    }

    /// Number of categories (the table is `size x size`).
    pub fn size(&self) -> usize {
        self.scheme.len()
    }

    pub fn count(&self, row: usize, col: usize) -> u64 {
        self.counts[row * self.size() + col]
    }

    /// Grand total of all cells.
    pub fn total(&self) -> u64 {
        self.total
    }

    /// Sum of the diagonal cells: paired evaluations that agreed.
    pub fn diagonal_total(&self) -> u64 {
        (0..self.size()).map(|i| self.count(i, i)).sum()
    }

    /// Fraction of paired evaluations that landed on the diagonal.
    pub fn observed_agreement(&self) -> f64 {
        self.diagonal_total() as f64 / self.total as f64
    }

    /// Row or column sums divided by the total; sums to 1.
    pub fn marginals(&self, axis: Axis) -> Vec<f64> {
        let k = self.size();
        let mut sums = vec![0u64; k];
        for i in 0..k {
            for j in 0..k {
                let idx = match axis {
                    Axis::Rows => i,
                    Axis::Cols => j,
                };
                sums[idx] += self.count(i, j);
            }
        }
        sums.iter().map(|&s| s as f64 / self.total as f64).collect()
    }

    /// Every cell divided by the grand total.
    pub fn proportion_table(&self) -> ProportionTable {
        let props = self
            .counts
            .iter()
            .map(|&c| c as f64 / self.total as f64)
            .collect();
        ProportionTable {
            scheme: self.scheme.clone(),
            props,
        }
    }

    /// The independence table: cell `(i, j)` is `row_marginal(i) * col_marginal(j)`.
    pub fn expected_table(&self) -> ProportionTable {
        let rows = self.marginals(Axis::Rows);
        let cols = self.marginals(Axis::Cols);
        let k = self.size();
        let mut props = Vec::with_capacity(k * k);
        for r in &rows {
            for c in &cols {
                props.push(r * c);
            }
        }
        ProportionTable {
            scheme: self.scheme.clone(),
            props,
        }
    }

    /// Chance-expected agreement: the diagonal of the independence table.
    ///
    /// Computed from integer margin sums as `sum(row_i * col_i) / total^2`,
    /// one correctly-rounded division, so a table whose observed and expected
    /// agreement coincide as rationals yields kappa exactly 0.
    #[allow(clippy::needless_range_loop)]
    pub fn expected_agreement(&self) -> f64 {
        let k = self.size();
        let mut row_sums = vec![0u128; k];
        let mut col_sums = vec![0u128; k];
        for i in 0..k {
            for j in 0..k {
                let c = self.count(i, j) as u128;
                row_sums[i] += c;
                col_sums[j] += c;
            }
        }
        let mass: u128 = row_sums.iter().zip(&col_sums).map(|(r, c)| r * c).sum();
        let total = self.total as u128;
        mass as f64 / (total * total) as f64
    }

    /// Cohen's kappa of the table.
    pub fn cohen_kappa(&self) -> Kappa {
        kappa_from_rates(self.observed_agreement(), self.expected_agreement())
    }

    /// All the table's statistics in one pass.
    pub fn summarize(&self) -> AgreementSummary {
        let p_observed = self.observed_agreement();
        let p_expected = self.expected_agreement();
        AgreementSummary {
            p_observed,
            p_expected,
            kappa: kappa_from_rates(p_observed, p_expected),
            row_marginals: self.marginals(Axis::Rows),
            col_marginals: self.marginals(Axis::Cols),
            n: self.total,
        }
    }

    /// The table with rows and columns swapped.
    pub fn transpose(&self) -> AgreementTable {
        let k = self.size();
        let mut counts = vec![0u64; k * k];
        for i in 0..k {
            for j in 0..k {
                counts[j * k + i] = self.count(i, j);
            }
        }
        Self {
            scheme: self.scheme.clone(),
            counts,
            total: self.total,
        }
    }

    /// Serializes the table in the interchange CSV layout: an empty cell then
    /// the category labels, then one `label,counts...` row per category.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push(',');
        out.push_str(&self.scheme.labels().join(","));
        out.push('\n');
        for i in 0..self.size() {
            out.push_str(self.scheme.label(i));
            for j in 0..self.size() {
                out.push(',');
                out.push_str(&self.count(i, j).to_string());
            }
            out.push('\n');
        }
        out
    }
}

/// Reads a table from the interchange CSV layout.
///
/// The first non-comment row must be an empty cell followed by the category
/// labels (which define the scheme); each following row must start with the
/// matching label in the same order. Lines starting with `#` are skipped.
pub fn read_table_csv<R: BufRead>(reader: R) -> Result<AgreementTable, TableError> {
    let csv_err = |line: usize, message: String| TableError::Csv { line, message };

    let mut rows: Vec<(usize, String)> = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| csv_err(i + 1, format!("read failed: {e}")))?;
        let line = line.trim_end_matches('\r').to_string();
        if line.starts_with('#') {
            continue;
        }
        rows.push((i + 1, line));
    }
    // Tolerate a trailing blank line but nothing else.
    while rows.last().is_some_and(|(_, l)| l.is_empty()) {
        rows.pop();
    }

    let mut it = rows.into_iter();
    let (header_line, header) = it
        .next()
        .ok_or_else(|| csv_err(1, "empty input".to_string()))?;
    let mut fields = header.split(',');
    let first = fields.next().unwrap_or_default();
    if !first.is_empty() {
        return Err(csv_err(
            header_line,
            "header must start with an empty cell".to_string(),
        ));
    }
    let labels: Vec<&str> = fields.collect();
    let scheme = CategoryScheme::new(labels.iter().copied()).map_err(|e| {
        csv_err(header_line, format!("bad header labels: {e}"))
    })?;

    let k = scheme.len();
    let mut matrix: Vec<Vec<i64>> = Vec::with_capacity(k);
    for expected_label in scheme.labels() {
        let (line_no, line) = it.next().ok_or_else(|| {
            csv_err(
                header_line,
                format!("expected {k} data rows, found {}", matrix.len()),
            )
        })?;
        let mut fields = line.split(',');
        let label = fields.next().unwrap_or_default();
        if label != expected_label {
            return Err(csv_err(
                line_no,
                format!("row label `{label}` does not match scheme label `{expected_label}`"),
            ));
        }
        let counts: Vec<i64> = fields
            .map(|f| {
                f.parse::<i64>()
                    .map_err(|_| csv_err(line_no, format!("`{f}` is not an integer count")))
            })
            .collect::<Result<_, _>>()?;
        if counts.len() != k {
            return Err(csv_err(
                line_no,
                format!("expected {k} counts, found {}", counts.len()),
            ));
        }
        matrix.push(counts);
    }
    if let Some((line_no, _)) = it.next() {
        return Err(csv_err(line_no, "unexpected extra row".to_string()));
    }

    AgreementTable::from_counts(&matrix, scheme)
}

/// A square matrix of cell proportions summing to 1.
#[derive(Debug, Clone, PartialEq)]
pub struct ProportionTable {
    scheme: CategoryScheme,
    /// Row-major K×K proportions.
    props: Vec<f64>,
}

impl ProportionTable {
    /// Validates and wraps a proportion matrix (cells in [0, 1], sum 1).
    pub fn from_proportions(
        matrix: &[Vec<f64>],
        scheme: CategoryScheme,
    ) -> Result<Self, TableError> {
        let k = matrix.len();
        for (row, entries) in matrix.iter().enumerate() {
            if entries.len() != k {
                return Err(TableError::NotSquare {
                    row,
                    found: entries.len(),
                    expected: k,
                });
            }
        }
        if k != scheme.len() {
            return Err(TableError::SchemeSizeMismatch {
                found: k,
                expected: scheme.len(),
            });
        }
        let mut props = Vec::with_capacity(k * k);
        let mut sum = 0.0;
        for (row, entries) in matrix.iter().enumerate() {
            for (col, &value) in entries.iter().enumerate() {
                if !value.is_finite() || !(-SUM_EPS..=1.0 + SUM_EPS).contains(&value) {
                    return Err(TableError::ProportionOutOfRange { row, col, value });
                }
                props.push(value);
                sum += value;
            }
        }
        if (sum - 1.0).abs() > SUM_EPS {
            return Err(TableError::ProportionsNotNormalized(sum));
        }
        Ok(Self { scheme, props })
    }

    pub fn scheme(&self) -> &CategoryScheme {
        &self.scheme
    }

    pub fn size(&self) -> usize {
        self.scheme.len()
    }

    pub fn proportion(&self, row: usize, col: usize) -> f64 {
        self.props[row * self.size() + col]
    }

    pub fn observed_agreement(&self) -> f64 {
        (0..self.size()).map(|i| self.proportion(i, i)).sum()
    }

    pub fn marginals(&self, axis: Axis) -> Vec<f64> {
        let k = self.size();
        let mut sums = vec![0.0; k];
        for i in 0..k {
            for j in 0..k {
                let idx = match axis {
                    Axis::Rows => i,
                    Axis::Cols => j,
                };
                sums[idx] += self.proportion(i, j);
            }
        }
        sums
    }

    pub fn expected_agreement(&self) -> f64 {
        let rows = self.marginals(Axis::Rows);
        let cols = self.marginals(Axis::Cols);
        rows.iter().zip(&cols).map(|(r, c)| r * c).sum()
    }

    pub fn cohen_kappa(&self) -> Kappa {
        kappa_from_rates(self.observed_agreement(), self.expected_agreement())
    }

    /// Same CSV layout as [`AgreementTable::to_csv`], with float cells.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push(',');
        out.push_str(&self.scheme.labels().join(","));
        out.push('\n');
        for i in 0..self.size() {
            out.push_str(self.scheme.label(i));
            for j in 0..self.size() {
                out.push(',');
                out.push_str(&self.proportion(i, j).to_string());
            }
            out.push('\n');
        }
        out
    }
}
