//! Conclusion category schemes and the pooling transformations between them.
//!
//! A [`CategoryScheme`] is an ordered list of category labels; the order fixes
//! the row/column layout of every table built on it. A [`PoolingScheme`] maps
//! every source label onto a target label, merging categories. Two poolings
//! used for firearms-examination conclusions ship as builtins; arbitrary ones
//! can be read from a config file with one `source -> target` line per label.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::agreement::AgreementTable;

/// Errors from scheme construction and pooling application.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum CategoryError {
    #[error("a category scheme needs at least 2 labels, got {0}")]
    TooFewLabels(usize),
    #[error("duplicate category label `{0}`")]
    DuplicateLabel(String),
    #[error("unknown pooling `{0}` (expected `pool_inconclusives` or `pool_to_lean`)")]
    UnknownPooling(String),
    #[error("pooling does not cover source label `{0}`")]
    UncoveredLabel(String),
    #[error("label `{0}` is not part of the source scheme")]
    ForeignLabel(String),
    #[error("source label `{0}` is mapped more than once")]
    DuplicateMapping(String),
    #[error("table scheme does not match the pooling's source scheme")]
    SchemeMismatch,
    #[error("line {line}: expected `source -> target`, got `{text}`")]
    MalformedMapping { line: usize, text: String },
}

/// An ordered set of conclusion labels.
///
/// Order is significant: it defines the row and column order of every
/// agreement table over the scheme.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CategoryScheme {
    labels: Vec<String>,
}

impl CategoryScheme {
    /// Builds a scheme from labels, rejecting duplicates and fewer than two.
    pub fn new<I, S>(labels: I) -> Result<Self, CategoryError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.len() < 2 {
            return Err(CategoryError::TooFewLabels(labels.len()));
        }
        for (i, label) in labels.iter().enumerate() {
            if labels[..i].contains(label) {
                return Err(CategoryError::DuplicateLabel(label.clone()));
            }
        }
        Ok(Self { labels })
    }

    /// A placeholder scheme with labels `C1`..`Ck`, for models whose
    /// categories have no intrinsic names.
    pub fn numbered(k: usize) -> Result<Self, CategoryError> {
        Self::new((1..=k).map(|i| format!("C{i}")))
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, index: usize) -> &str {
        &self.labels[index]
    }

    /// Position of a label in the scheme, if present (exact, case-sensitive).
    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }
}

/// The canonical six-way range of conclusions used in firearms examination.
pub fn full_afte_scheme() -> CategoryScheme {
    CategoryScheme::new([
        "Identification",
        "Inconclusive-A",
        "Inconclusive-B",
        "Inconclusive-C",
        "Elimination",
        "Unsuitable",
    ])
    .expect("builtin labels are valid")
}

/// The two builtin poolings of the six-way scheme.
///
/// `PoolInconclusives` merges the three inconclusive categories into one.
/// `PoolToLean` merges each leaning inconclusive into the conclusion it leans
/// toward. Unsuitable stays its own category under both.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BuiltinPooling {
    PoolInconclusives,
    PoolToLean,
}

impl FromStr for BuiltinPooling {
    type Err = CategoryError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "pool_inconclusives" => Ok(Self::PoolInconclusives),
            "pool_to_lean" => Ok(Self::PoolToLean),
            other => Err(CategoryError::UnknownPooling(other.to_string())),
        }
    }
}

impl fmt::Display for BuiltinPooling {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::PoolInconclusives => f.write_str("pool_inconclusives"),
            Self::PoolToLean => f.write_str("pool_to_lean"),
        }
    }
}

/// A total map from one scheme's labels onto a coarser scheme's labels.
///
/// Target order is induced by first appearance in source order, so a pooling
/// is fully determined by the `(source, target)` label pairs regardless of
/// the order they were supplied in.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PoolingScheme {
    source: CategoryScheme,
    target: CategoryScheme,
    /// map[i] = target index of source category i
    map: Vec<usize>,
}

impl PoolingScheme {
    /// Builds a pooling from `(source_label, target_label)` pairs.
    ///
    /// Every source label must be mapped exactly once; every target label is
    /// then the image of at least one source label by construction.
    pub fn from_pairs<I, A, B>(source: &CategoryScheme, pairs: I) -> Result<Self, CategoryError>
    where
        I: IntoIterator<Item = (A, B)>,
        A: AsRef<str>,
        B: AsRef<str>,
    {
        let mut by_source: HashMap<usize, String> = HashMap::new();
        for (from, to) in pairs {
            let from = from.as_ref();
            let index = source
                .index_of(from)
                .ok_or_else(|| CategoryError::ForeignLabel(from.to_string()))?;
            if by_source
                .insert(index, to.as_ref().to_string())
                .is_some()
            {
                return Err(CategoryError::DuplicateMapping(from.to_string()));
            }
        }

        let mut target_labels: Vec<String> = Vec::new();
        let mut map = Vec::with_capacity(source.len());
        for (index, label) in source.labels().iter().enumerate() {
            let target = by_source
                .get(&index)
                .ok_or_else(|| CategoryError::UncoveredLabel(label.clone()))?;
            let position = match target_labels.iter().position(|l| l == target) {
                Some(p) => p,
                None => {
                    target_labels.push(target.clone());
                    target_labels.len() - 1
                }
            };
            map.push(position);
        }

        // A total map from K >= 2 source labels yields >= 1 target label; the
        // scheme constructor still enforces >= 2, ruling out all-to-one maps.
        let target = CategoryScheme::new(target_labels)?;
        Ok(Self {
            source: source.clone(),
            target,
            map,
        })
    }

    /// The pooling that maps every label to itself.
    pub fn identity(scheme: &CategoryScheme) -> Self {
        Self::from_pairs(scheme, scheme.labels().iter().map(|l| (l, l)))
            .expect("identity map is total")
    }

    /// Parses `source_label -> target_label` lines. Blank lines and lines
    /// starting with `#` are ignored; labels match exactly, case-sensitive.
    pub fn parse_config(text: &str, source: &CategoryScheme) -> Result<Self, CategoryError> {
        let mut pairs = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (from, to) = line.split_once("->").ok_or(CategoryError::MalformedMapping {
                line: i + 1,
                text: raw.to_string(),
            })?;
            let (from, to) = (from.trim(), to.trim());
            if from.is_empty() || to.is_empty() {
                return Err(CategoryError::MalformedMapping {
                    line: i + 1,
                    text: raw.to_string(),
                });
            }
            pairs.push((from.to_string(), to.to_string()));
        }
        Self::from_pairs(source, pairs)
    }

    pub fn source(&self) -> &CategoryScheme {
        &self.source
    }

    pub fn target(&self) -> &CategoryScheme {
        &self.target
    }

    /// Target index of source category `i`.
    pub fn map_index(&self, i: usize) -> usize {
        self.map[i]
    }

    /// Target label a source label maps to, if the label belongs to the source.
    pub fn map_label(&self, source_label: &str) -> Option<&str> {
        self.source
            .index_of(source_label)
            .map(|i| self.target.label(self.map[i]))
    }
}

/// Builds one of the two builtin poolings over the six-way scheme.
pub fn builtin_pooling(name: BuiltinPooling) -> PoolingScheme {
    let source = full_afte_scheme();
    let pairs: Vec<(&str, &str)> = match name {
        BuiltinPooling::PoolInconclusives => vec![
            ("Identification", "Identification"),
            ("Inconclusive-A", "Inconclusive"),
            ("Inconclusive-B", "Inconclusive"),
            ("Inconclusive-C", "Inconclusive"),
            ("Elimination", "Elimination"),
            ("Unsuitable", "Unsuitable"),
        ],
        BuiltinPooling::PoolToLean => vec![
            ("Identification", "ID∪Inc-A"),
            ("Inconclusive-A", "ID∪Inc-A"),
            ("Inconclusive-B", "Inconclusive-B"),
            ("Inconclusive-C", "Elim∪Inc-C"),
            ("Elimination", "Elim∪Inc-C"),
            ("Unsuitable", "Unsuitable"),
        ],
    };
    PoolingScheme::from_pairs(&source, pairs).expect("builtin poolings are total")
}

/// Collapses a table onto the pooling's target scheme.
///
/// Cell `(g, h)` of the result is the sum of all source cells `(i, j)` with
/// `map(i) = g` and `map(j) = h`; the grand total is preserved exactly.
pub fn apply_pooling(
    table: &AgreementTable,
    pooling: &PoolingScheme,
) -> Result<AgreementTable, CategoryError> {
    if table.scheme() != pooling.source() {
        return Err(CategoryError::SchemeMismatch);
    }
    let k = pooling.target().len();
    let mut counts = vec![vec![0i64; k]; k];
    for i in 0..table.scheme().len() {
        for j in 0..table.scheme().len() {
            counts[pooling.map_index(i)][pooling.map_index(j)] += table.count(i, j) as i64;
        }
    }
    Ok(AgreementTable::from_counts(&counts, pooling.target().clone())
        .expect("pooled counts stay valid"))
}
