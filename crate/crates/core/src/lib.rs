//! Reliability analysis for categorical ratings.
//!
//! concord measures how consistently raters classify the same material into
//! a fixed set of categories — with themselves across occasions
//! (repeatability) or with each other (reproducibility). It covers the full
//! pipeline: ingesting long-format evaluation records, building agreement
//! tables, computing observed agreement, chance-expected agreement and
//! Cohen's kappa, pooling categories, testing observed-vs-expected
//! differences with an exact sign test, benchmarking raters against a
//! guessing model whose kappa is known in closed form, and rendering SVG
//! diagnostics.
//!
//! ```
//! use concord::{AgreementTable, CategoryScheme, Kappa};
//!
//! let scheme = CategoryScheme::new(["hit", "miss"]).unwrap();
//! let table = AgreementTable::from_counts(
//!     &[vec![40, 10], vec![5, 45]],
//!     scheme,
//! ).unwrap();
//! let summary = table.summarize();
//! assert_eq!(summary.p_observed, 0.85);
//! assert!(matches!(summary.kappa, Kappa::Value(k) if k > 0.69 && k < 0.71));
//! ```

#![forbid(unsafe_code)]

pub mod agreement;
pub mod categories;
pub mod display;
pub mod guessing;
pub mod inference;
pub mod ingest;
pub mod report;

pub use agreement::{
    kappa_from_rates, read_table_csv, AgreementSummary, AgreementTable, Axis, Kappa,
    ProportionTable, TableError,
};
pub use categories::{
    apply_pooling, builtin_pooling, full_afte_scheme, BuiltinPooling, CategoryError,
    CategoryScheme, PoolingScheme,
};
pub use guessing::{sweep_kappa, GuessingError, GuessingModel, GENERATOR_ID};
pub use inference::{
    box_stats, interpret_kappa, kappa_isoline, sign_test, BoxStats, InferenceError, KappaBand,
    SignTestResult,
};
pub use ingest::{
    build_tables, parse_records, records_to_csv, repeatability_pairs, reproducibility_pairs,
    synthetic_records, EvaluationRecord, GroundTruth, GroupBy, IngestError, Material,
    PairedEvaluation, SubjectKey, TableKey,
};
pub use report::{
    render_summary, scatter_plot, ReportError, ScatterPoint, ScatterSpec, SummaryFormat,
    SummaryRow, SUMMARY_CSV_HEADER,
};
