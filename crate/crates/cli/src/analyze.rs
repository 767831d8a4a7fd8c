//! The `analyze` subcommand: batch repeatability/reproducibility analysis of
//! an evaluation-records file.
//!
//! For each pairing mode (repeatability, reproducibility) the pipeline builds
//! pooled and per-subject agreement tables stratified by material and ground
//! truth, scores them under the three scoring schemes (full six-way,
//! inconclusives pooled, leaning inconclusives merged), writes summary files,
//! renders one scatter per group with the per-subject points, and runs a sign
//! test on the per-subject observed-minus-expected differences.
//!
//! Outputs, per mode with any pairs:
//!   <stem>.<mode>.summary.csv   machine-readable rows (full precision)
//!   <stem>.<mode>.summary.txt   readable table at the chosen decimals
//!   <stem>.<mode>.<material>.<stratum>.<scheme>.svg  per-group scatters
//! Sign-test results go to stdout, one line per group.

use std::collections::{BTreeMap, BTreeSet};
use std::error::Error;
use std::fs;
use std::path::PathBuf;

use clap::Args;

use concord::{
    apply_pooling, build_tables, builtin_pooling, full_afte_scheme, parse_records,
    repeatability_pairs, reproducibility_pairs, scatter_plot, sign_test, AgreementTable,
    BuiltinPooling, GroupBy, InferenceError, PairedEvaluation, PoolingScheme, ScatterPoint,
    ScatterSpec, SubjectKey, SummaryFormat, SummaryRow, TableKey,
};

#[derive(Args)]
pub struct AnalyzeArgs {
    /// Evaluation-records CSV
    #[arg(long)]
    records: PathBuf,
    /// Prefix for every output file
    #[arg(long)]
    output_stem: String,
    /// Decimal places for percentage display in the text summaries
    #[arg(long, default_value_t = 1)]
    decimals: u32,
    /// Comma-separated conclusion labels whose pairs to drop, e.g. Unsuitable
    #[arg(long)]
    exclude: Option<String>,
}

/// The three scoring schemes applied to every table.
fn scorings() -> Vec<(&'static str, Option<PoolingScheme>)> {
    vec![
        ("full", None),
        (
            "pool_inconclusives",
            Some(builtin_pooling(BuiltinPooling::PoolInconclusives)),
        ),
        (
            "pool_to_lean",
            Some(builtin_pooling(BuiltinPooling::PoolToLean)),
        ),
    ]
}

pub fn run(args: AnalyzeArgs) -> Result<(), Box<dyn Error>> {
    let scheme = full_afte_scheme();
    let file = std::fs::File::open(&args.records)
        .map_err(|e| format!("{}: {e}", args.records.display()))?;
    let records = parse_records(std::io::BufReader::new(file), &scheme)
        .map_err(|e| format!("{}: {e}", args.records.display()))?;

    let excluded: BTreeSet<String> = args
        .exclude
        .as_deref()
        .map(|list| list.split(',').map(|l| l.trim().to_string()).collect())
        .unwrap_or_default();

    let modes: [(&str, Vec<PairedEvaluation>); 2] = [
        ("repeatability", repeatability_pairs(&records)?),
        ("reproducibility", reproducibility_pairs(&records)),
    ];

    for (mode, pairs) in &modes {
        if pairs.is_empty() {
            println!("{mode}: no pairs, skipping");
            continue;
        }
        analyze_mode(mode, pairs, &args, &excluded)?;
    }
    Ok(())
}

/// Per-subject (subject, expected, observed) points keyed by
/// (material, stratum, scheme).
type GroupedPoints = BTreeMap<(String, String, String), Vec<(String, f64, f64)>>;

fn analyze_mode(
    mode: &str,
    pairs: &[PairedEvaluation],
    args: &AnalyzeArgs,
    excluded: &BTreeSet<String>,
) -> Result<(), Box<dyn Error>> {
    let scheme = full_afte_scheme();
    let pooled = build_tables(pairs, &scheme, GroupBy::PooledOverSubjects, excluded)?;
    let per_subject = build_tables(pairs, &scheme, GroupBy::PerSubject, excluded)?;

    let mut rows: Vec<SummaryRow> = Vec::new();
    let mut groups: GroupedPoints = BTreeMap::new();

    for (key, table) in pooled.iter().chain(per_subject.iter()) {
        for (scoring_name, pooling) in scorings() {
            let scored: AgreementTable = match &pooling {
                Some(p) => apply_pooling(table, p)?,
                None => table.clone(),
            };
            let summary = scored.summarize();
            if let SubjectKey::Single(subject) = &key.subject {
                groups
                    .entry(group_key(key, scoring_name))
                    .or_default()
                    .push((subject.clone(), summary.p_expected, summary.p_observed));
            }
            rows.push(SummaryRow {
                subject: key.subject.to_string(),
                stratum: key.stratum.to_string(),
                material: key.material.to_string(),
                scheme: scoring_name.to_string(),
                summary,
            });
        }
    }

    let csv = concord::render_summary(&rows, SummaryFormat::Csv, args.decimals)?;
    let text = concord::render_summary(&rows, SummaryFormat::Text, args.decimals)?;
    let csv_path = format!("{}.{mode}.summary.csv", args.output_stem);
    let txt_path = format!("{}.{mode}.summary.txt", args.output_stem);
    fs::write(&csv_path, csv).map_err(|e| format!("{csv_path}: {e}"))?;
    fs::write(&txt_path, text).map_err(|e| format!("{txt_path}: {e}"))?;
    println!("wrote {csv_path}");
    println!("wrote {txt_path}");

    for ((material, stratum, scoring_name), mut points) in groups {
        points.sort_by(|a, b| a.0.cmp(&b.0));
        // One scatter per group, examiners (or pairs) as points.
        let spec = ScatterSpec {
            title: format!("{mode} {material} {stratum} ({scoring_name})"),
            points: points
                .iter()
                .map(|(subject, p_expected, p_observed)| ScatterPoint {
                    label: subject.clone(),
                    p_expected: *p_expected,
                    p_observed: *p_observed,
                })
                .collect(),
            isolines: ScatterSpec::default_isolines(),
        };
        let svg_path = format!(
            "{}.{mode}.{material}.{stratum}.{scoring_name}.svg",
            args.output_stem
        );
        fs::write(&svg_path, scatter_plot(&spec)?).map_err(|e| format!("{svg_path}: {e}"))?;
        println!("wrote {svg_path}");

        // Sign test over per-subject observed-minus-expected differences.
        let differences: Vec<f64> = points
            .iter()
            .map(|(_, p_expected, p_observed)| p_observed - p_expected)
            .collect();
        match sign_test(&differences) {
            Ok(result) => println!(
                "signtest mode={mode} material={material} stratum={stratum} scheme={scoring_name} {result}"
            ),
            Err(InferenceError::NoInformation) => println!(
                "signtest mode={mode} material={material} stratum={stratum} scheme={scoring_name} no nonzero differences"
            ),
            Err(e) => return Err(e.into()),
        }
    }
    Ok(())
}

fn group_key(key: &TableKey, scoring_name: &str) -> (String, String, String) {
    (
        key.material.to_string(),
        key.stratum.to_string(),
        scoring_name.to_string(),
    )
}
