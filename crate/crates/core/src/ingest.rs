//! Long-format evaluation records and their assembly into agreement tables.
//!
//! A record is one examiner's conclusion on one specimen set in one round.
//! Records pair up two ways: the same examiner seeing the same set in two
//! rounds (repeatability), or two different examiners seeing the same set
//! (reproducibility). Pairs accumulate into per-subject or pooled agreement
//! tables, always stratified by ground truth and material.
//!
//! Input is a UTF-8 comma-separated file with the exact header
//! `examiner_id,set_id,round,material,ground_truth,conclusion`. No quoting:
//! none of the defined vocabulary needs it. Every parse error carries the
//! offending line number.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;
use std::io::BufRead;
use std::str::FromStr;

use thiserror::Error;

use crate::agreement::AgreementTable;
use crate::categories::CategoryScheme;

/// Exact header of a records file.
pub const RECORDS_HEADER: &str = "examiner_id,set_id,round,material,ground_truth,conclusion";

#[derive(Debug, Error, PartialEq)]
pub enum IngestError {
    #[error("line {line}: header must be `{RECORDS_HEADER}`, got `{found}`")]
    BadHeader { line: usize, found: String },
    #[error("line {line}: {reason}")]
    MalformedRow { line: usize, reason: String },
    #[error("line {line}: unknown conclusion label `{label}`")]
    UnknownLabel { line: usize, label: String },
    #[error("line {line}: duplicate record for examiner `{examiner_id}`, set `{set_id}`, round {round}")]
    DuplicateKey {
        line: usize,
        examiner_id: String,
        set_id: String,
        round: u8,
    },
    #[error("line {line}: set `{set_id}` changes ground truth")]
    InconsistentGroundTruth { line: usize, set_id: String },
    #[error("line {line}: set `{set_id}` changes material")]
    InconsistentMaterial { line: usize, set_id: String },
    #[error("examiner `{examiner_id}` evaluated set `{set_id}` {count} times; at most 2 are expected")]
    TooManyEvaluations {
        examiner_id: String,
        set_id: String,
        count: usize,
    },
    #[error("conclusion label `{label}` is not part of the scheme")]
    ForeignLabel { label: String },
    #[error("read failed: {0}")]
    Read(String),
}

/// What the specimens were.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Material {
    Bullet,
    Cartridge,
}

impl FromStr for Material {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "bullet" => Ok(Self::Bullet),
            "cartridge" => Ok(Self::Cartridge),
            other => Err(format!("material must be `bullet` or `cartridge`, got `{other}`")),
        }
    }
}

impl fmt::Display for Material {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Bullet => "bullet",
            Self::Cartridge => "cartridge",
        })
    }
}

/// Whether the unknown specimen truly came from the same gun as the knowns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GroundTruth {
    Matching,
    Nonmatching,
}

impl FromStr for GroundTruth {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "matching" => Ok(Self::Matching),
            "nonmatching" => Ok(Self::Nonmatching),
            other => Err(format!(
                "ground_truth must be `matching` or `nonmatching`, got `{other}`"
            )),
        }
    }
}

impl fmt::Display for GroundTruth {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Matching => "matching",
            Self::Nonmatching => "nonmatching",
        })
    }
}

/// One examiner's conclusion on one set in one round (a mailing index, 1-6).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvaluationRecord {
    pub examiner_id: String,
    pub set_id: String,
    pub round: u8,
    pub material: Material,
    pub ground_truth: GroundTruth,
    pub conclusion: String,
}

/// Two conclusions on the same set, ready to land in an agreement table
/// (first = row, second = column).
///
/// For repeatability the subject is the examiner and `first` is the earlier
/// round. For reproducibility the subject is `smaller_id|larger_id` and the
/// lexicographically smaller examiner supplies `first`; any fixed convention
/// gives the same statistics since they are transpose-invariant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairedEvaluation {
    pub subject: String,
    pub set_id: String,
    pub material: Material,
    pub stratum: GroundTruth,
    pub first: String,
    pub second: String,
}

/// Parses and validates a records file against a scheme.
pub fn parse_records<R: BufRead>(
    reader: R,
    scheme: &CategoryScheme,
) -> Result<Vec<EvaluationRecord>, IngestError> {
    let mut lines = reader.lines().enumerate();

    let (_, header) = lines
        .next()
        .ok_or(IngestError::BadHeader {
            line: 1,
            found: String::new(),
        })
        .and_then(|(i, l)| l.map(|l| (i, l)).map_err(|e| IngestError::Read(e.to_string())))?;
    if header.trim_end_matches('\r') != RECORDS_HEADER {
        return Err(IngestError::BadHeader {
            line: 1,
            found: header,
        });
    }

    let mut records = Vec::new();
    let mut seen: HashSet<(String, String, u8)> = HashSet::new();
    let mut set_truths: HashMap<String, GroundTruth> = HashMap::new();
    let mut set_materials: HashMap<String, Material> = HashMap::new();

    for (i, line) in lines {
        let line_no = i + 1;
        let line = line.map_err(|e| IngestError::Read(e.to_string()))?;
        let line = line.trim_end_matches('\r');
        let malformed = |reason: String| IngestError::MalformedRow {
            line: line_no,
            reason,
        };

        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 6 {
            return Err(malformed(format!("expected 6 fields, found {}", fields.len())));
        }
        let [examiner_id, set_id, round, material, ground_truth, conclusion] =
            <[&str; 6]>::try_from(fields).expect("length checked");
        if examiner_id.is_empty() || set_id.is_empty() {
            return Err(malformed("examiner_id and set_id must be nonempty".to_string()));
        }
        let round: u8 = round
            .parse()
            .ok()
            .filter(|r| (1..=6).contains(r))
            .ok_or_else(|| malformed(format!("round must be an integer in 1..=6, got `{round}`")))?;
        let material: Material = material.parse().map_err(malformed)?;
        let ground_truth: GroundTruth = ground_truth.parse().map_err(malformed)?;
        if scheme.index_of(conclusion).is_none() {
            return Err(IngestError::UnknownLabel {
                line: line_no,
                label: conclusion.to_string(),
            });
        }

        if !seen.insert((examiner_id.to_string(), set_id.to_string(), round)) {
            return Err(IngestError::DuplicateKey {
                line: line_no,
                examiner_id: examiner_id.to_string(),
                set_id: set_id.to_string(),
                round,
            });
        }
        match set_truths.get(set_id) {
            Some(&known) if known != ground_truth => {
                return Err(IngestError::InconsistentGroundTruth {
                    line: line_no,
                    set_id: set_id.to_string(),
                });
            }
            Some(_) => {}
            None => {
                set_truths.insert(set_id.to_string(), ground_truth);
            }
        }
        match set_materials.get(set_id) {
            Some(&known) if known != material => {
                return Err(IngestError::InconsistentMaterial {
                    line: line_no,
                    set_id: set_id.to_string(),
                });
            }
            Some(_) => {}
            None => {
                set_materials.insert(set_id.to_string(), material);
            }
        }

        records.push(EvaluationRecord {
            examiner_id: examiner_id.to_string(),
            set_id: set_id.to_string(),
            round,
            material,
            ground_truth,
            conclusion: conclusion.to_string(),
        });
    }
    Ok(records)
}

/// Serializes records in the same format `parse_records` reads.
pub fn records_to_csv(records: &[EvaluationRecord]) -> String {
    let mut out = String::from(RECORDS_HEADER);
    out.push('\n');
    for r in records {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            r.examiner_id, r.set_id, r.round, r.material, r.ground_truth, r.conclusion
        ));
    }
    out
}

/// Same-examiner pairs: one pair per (examiner, set) seen in exactly two
/// rounds, earlier round first. Sets seen once are skipped; a third sighting
/// is a data-shape error.
pub fn repeatability_pairs(
    records: &[EvaluationRecord],
) -> Result<Vec<PairedEvaluation>, IngestError> {
    let mut groups: BTreeMap<(&str, &str), Vec<&EvaluationRecord>> = BTreeMap::new();
    for r in records {
        groups
            .entry((r.examiner_id.as_str(), r.set_id.as_str()))
            .or_default()
            .push(r);
    }

    let mut pairs = Vec::new();
    for ((examiner_id, set_id), mut group) in groups {
        match group.len() {
            1 => continue,
            2 => {
                group.sort_by_key(|r| r.round);
                pairs.push(PairedEvaluation {
                    subject: examiner_id.to_string(),
                    set_id: set_id.to_string(),
                    material: group[0].material,
                    stratum: group[0].ground_truth,
                    first: group[0].conclusion.clone(),
                    second: group[1].conclusion.clone(),
                });
            }
            count => {
                return Err(IngestError::TooManyEvaluations {
                    examiner_id: examiner_id.to_string(),
                    set_id: set_id.to_string(),
                    count,
                });
            }
        }
    }
    Ok(pairs)
}

/// Different-examiner pairs: one pair per set and unordered pair of distinct
/// examiners who evaluated it. When an examiner saw a set more than once,
/// only their earliest evaluation participates.
pub fn reproducibility_pairs(records: &[EvaluationRecord]) -> Vec<PairedEvaluation> {
    // set -> examiner -> earliest record
    let mut by_set: BTreeMap<&str, BTreeMap<&str, &EvaluationRecord>> = BTreeMap::new();
    for r in records {
        let slot = by_set
            .entry(r.set_id.as_str())
            .or_default()
            .entry(r.examiner_id.as_str())
            .or_insert(r);
        if r.round < slot.round {
            *slot = r;
        }
    }

    let mut pairs = Vec::new();
    for (set_id, examiners) in by_set {
        let records: Vec<&&EvaluationRecord> = examiners.values().collect();
        for (a, first) in records.iter().enumerate() {
            for second in &records[a + 1..] {
                // BTreeMap iteration already orders examiner ids, so `first`
                // has the lexicographically smaller id.
                pairs.push(PairedEvaluation {
                    subject: format!("{}|{}", first.examiner_id, second.examiner_id),
                    set_id: set_id.to_string(),
                    material: first.material,
                    stratum: first.ground_truth,
                    first: first.conclusion.clone(),
                    second: second.conclusion.clone(),
                });
            }
        }
    }
    pairs
}

/// How to group pairs into tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupBy {
    PooledOverSubjects,
    PerSubject,
}

/// Identifies one subject's stratum table, or the pooled table of all
/// subjects.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum SubjectKey {
    Pooled,
    Single(String),
}

impl fmt::Display for SubjectKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SubjectKey::Pooled => f.write_str("ALL"),
            SubjectKey::Single(s) => f.write_str(s),
        }
    }
}

/// Key of one accumulated table: material and stratum always separate.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct TableKey {
    pub material: Material,
    pub stratum: GroundTruth,
    pub subject: SubjectKey,
}

/// Accumulates pairs into agreement tables over `scheme`, first conclusion
/// as row and second as column.
///
/// Pairs containing a label in `excluded` are dropped before counting; the
/// scheme itself is unchanged (excluded categories keep all-zero cells).
pub fn build_tables(
    pairs: &[PairedEvaluation],
    scheme: &CategoryScheme,
    group_by: GroupBy,
    excluded: &BTreeSet<String>,
) -> Result<BTreeMap<TableKey, AgreementTable>, IngestError> {
    let k = scheme.len();
    let mut acc: BTreeMap<TableKey, Vec<Vec<i64>>> = BTreeMap::new();

    for pair in pairs {
        if excluded.contains(&pair.first) || excluded.contains(&pair.second) {
            continue;
        }
        let row = scheme.index_of(&pair.first).ok_or_else(|| IngestError::ForeignLabel {
            label: pair.first.clone(),
        })?;
        let col = scheme.index_of(&pair.second).ok_or_else(|| IngestError::ForeignLabel {
            label: pair.second.clone(),
        })?;
        let subject = match group_by {
            GroupBy::PooledOverSubjects => SubjectKey::Pooled,
            GroupBy::PerSubject => SubjectKey::Single(pair.subject.clone()),
        };
        let key = TableKey {
            material: pair.material,
            stratum: pair.stratum,
            subject,
        };
        acc.entry(key).or_insert_with(|| vec![vec![0i64; k]; k])[row][col] += 1;
    }

    Ok(acc
        .into_iter()
        .map(|(key, counts)| {
            let table = AgreementTable::from_counts(&counts, scheme.clone())
                .expect("accumulated tables hold at least one pair");
            (key, table)
        })
        .collect())
}

/// Expands a table back into synthetic records: each cell pair becomes its
/// own single-set examiner evaluated in rounds 1 and 2. Re-ingesting the
/// result reproduces the table exactly.
pub fn synthetic_records(
    table: &AgreementTable,
    material: Material,
    ground_truth: GroundTruth,
) -> Vec<EvaluationRecord> {
    let mut records = Vec::with_capacity(2 * table.total() as usize);
    let mut serial = 0u64;
    for i in 0..table.size() {
        for j in 0..table.size() {
            for _ in 0..table.count(i, j) {
                serial += 1;
                let examiner_id = format!("E{serial:06}");
                let set_id = format!("S{serial:06}");
                for (round, conclusion) in [(1u8, i), (2u8, j)] {
                    records.push(EvaluationRecord {
                        examiner_id: examiner_id.clone(),
                        set_id: set_id.clone(),
                        round,
                        material,
                        ground_truth,
                        conclusion: table.scheme().label(conclusion).to_string(),
                    });
                }
            }
        }
    }
    records
}

#[cfg(test)]
mod tests {
    use super::*;

    fn abc() -> CategoryScheme {
        CategoryScheme::new(["a", "b", "c"]).unwrap()
    }

    fn record(
        examiner: &str,
        set: &str,
        round: u8,
        truth: GroundTruth,
        conclusion: &str,
    ) -> EvaluationRecord {
        EvaluationRecord {
            examiner_id: examiner.to_string(),
            set_id: set.to_string(),
            round,
            material: Material::Bullet,
            ground_truth: truth,
            conclusion: conclusion.to_string(),
        }
    }

    #[test]
    fn parses_valid_rows() {
        let csv = "examiner_id,set_id,round,material,ground_truth,conclusion\n\
                   E1,S1,1,bullet,matching,a\n\
                   E1,S1,3,bullet,matching,b\n\
                   E2,S2,1,cartridge,nonmatching,c\n";
        let records = parse_records(csv.as_bytes(), &abc()).unwrap();
        assert_eq!(records.len(), 3);
        assert_eq!(records[1].round, 3);
        assert_eq!(records[2].material, Material::Cartridge);
    }

    #[test]
    fn rejects_bad_header_and_rows() {
        let err = parse_records("nope\n".as_bytes(), &abc()).unwrap_err();
        assert!(matches!(err, IngestError::BadHeader { line: 1, .. }));

        let csv = format!("{RECORDS_HEADER}\nE1,S1,1,bullet,matching\n");
        let err = parse_records(csv.as_bytes(), &abc()).unwrap_err();
        assert!(matches!(err, IngestError::MalformedRow { line: 2, .. }));

        let csv = format!("{RECORDS_HEADER}\nE1,S1,9,bullet,matching,a\n");
        let err = parse_records(csv.as_bytes(), &abc()).unwrap_err();
        assert!(matches!(err, IngestError::MalformedRow { line: 2, .. }));

        let csv = format!("{RECORDS_HEADER}\nE1,S1,1,pellet,matching,a\n");
        let err = parse_records(csv.as_bytes(), &abc()).unwrap_err();
        assert!(matches!(err, IngestError::MalformedRow { line: 2, .. }));
    }

    #[test]
    fn rejects_unknown_conclusion_with_line() {
        let csv = format!("{RECORDS_HEADER}\nE1,S1,1,bullet,matching,a\nE1,S2,1,bullet,matching,Maybe\n");
        let err = parse_records(csv.as_bytes(), &abc()).unwrap_err();
        assert_eq!(
            err,
            IngestError::UnknownLabel {
                line: 3,
                label: "Maybe".to_string()
            }
        );
    }

    #[test]
    fn rejects_duplicate_key() {
        let csv = format!(
            "{RECORDS_HEADER}\nE1,S1,1,bullet,matching,a\nE1,S1,1,bullet,matching,b\n"
        );
        let err = parse_records(csv.as_bytes(), &abc()).unwrap_err();
        assert!(matches!(err, IngestError::DuplicateKey { line: 3, .. }));
    }

    #[test]
    fn rejects_ground_truth_drift() {
        let csv = format!(
            "{RECORDS_HEADER}\nE1,S1,1,bullet,matching,a\nE2,S1,1,bullet,nonmatching,b\n"
        );
        let err = parse_records(csv.as_bytes(), &abc()).unwrap_err();
        assert!(matches!(
            err,
            IngestError::InconsistentGroundTruth { line: 3, .. }
        ));
    }

    #[test]
    fn repeatability_pairs_by_round_order() {
        let records = vec![
            record("E", "S", 4, GroundTruth::Matching, "b"),
            record("E", "S", 1, GroundTruth::Matching, "a"),
        ];
        let pairs = repeatability_pairs(&records).unwrap();
        assert_eq!(pairs.len(), 1);
        assert_eq!(pairs[0].first, "a");
        assert_eq!(pairs[0].second, "b");
        assert_eq!(pairs[0].subject, "E");
    }

    #[test]
    fn single_sighting_makes_no_pair() {
        let records = vec![record("E", "S", 1, GroundTruth::Matching, "a")];
        assert!(repeatability_pairs(&records).unwrap().is_empty());
    }

    #[test]
    fn three_sightings_are_a_data_shape_error() {
        let records = vec![
            record("E", "S", 1, GroundTruth::Matching, "a"),
            record("E", "S", 3, GroundTruth::Matching, "a"),
            record("E", "S", 5, GroundTruth::Matching, "a"),
        ];
        let err = repeatability_pairs(&records).unwrap_err();
        assert_eq!(
            err,
            IngestError::TooManyEvaluations {
                examiner_id: "E".to_string(),
                set_id: "S".to_string(),
                count: 3
            }
        );
    }

    #[test]
    fn reproducibility_pairs_all_distinct_examiners() {
        let records = vec![
            record("A", "S", 1, GroundTruth::Matching, "a"),
            record("B", "S", 2, GroundTruth::Matching, "b"),
            record("C", "S", 3, GroundTruth::Matching, "c"),
        ];
        let pairs = reproducibility_pairs(&records);
        let subjects: Vec<&str> = pairs.iter().map(|p| p.subject.as_str()).collect();
        assert_eq!(subjects, ["A|B", "A|C", "B|C"]);
        // Smaller id supplies the row conclusion.
        assert_eq!(pairs[0].first, "a");
        assert_eq!(pairs[0].second, "b");
    }

    #[test]
    fn lone_examiner_makes_no_reproducibility_pair() {
        let records = vec![record("A", "S", 1, GroundTruth::Matching, "a")];
        assert!(reproducibility_pairs(&records).is_empty());
    }

    #[test]
    fn pair_count_is_k_choose_2() {
        for k in 2..=6usize {
            let records: Vec<EvaluationRecord> = (0..k)
                .map(|i| record(&format!("E{i}"), "S", 1, GroundTruth::Matching, "a"))
                .collect();
            assert_eq!(reproducibility_pairs(&records).len(), k * (k - 1) / 2);
        }
    }

    #[test]
    fn repeated_examiner_contributes_earliest_evaluation() {
        let records = vec![
            record("A", "S", 4, GroundTruth::Matching, "c"),
            record("A", "S", 1, GroundTruth::Matching, "a"),
            record("B", "S", 2, GroundTruth::Matching, "b"),
        ];
        let pairs = reproducibility_pairs(&records);
        assert_eq!(pairs.len(), 1);
        assert_eq!(pairs[0].first, "a", "A's round-1 conclusion participates");

        // Brute-force check over the same fixture: enumerate every unordered
        // examiner pair from scratch, keeping each examiner's earliest round.
        let mut earliest: BTreeMap<&str, &EvaluationRecord> = BTreeMap::new();
        for r in &records {
            let e = earliest.entry(r.examiner_id.as_str()).or_insert(r);
            if r.round < e.round {
                *e = r;
            }
        }
        let expected: Vec<(String, String, String)> = {
            let v: Vec<_> = earliest.values().collect();
            let mut out = Vec::new();
            for x in 0..v.len() {
                for y in x + 1..v.len() {
                    out.push((
                        format!("{}|{}", v[x].examiner_id, v[y].examiner_id),
                        v[x].conclusion.clone(),
                        v[y].conclusion.clone(),
                    ));
                }
            }
            out
        };
        let actual: Vec<(String, String, String)> = pairs
            .iter()
            .map(|p| (p.subject.clone(), p.first.clone(), p.second.clone()))
            .collect();
        assert_eq!(actual, expected);
    }

    #[test]
    fn build_tables_per_subject_and_pooled() {
        let records = vec![
            record("A", "S1", 1, GroundTruth::Matching, "a"),
            record("A", "S1", 3, GroundTruth::Matching, "a"),
            record("A", "S2", 1, GroundTruth::Nonmatching, "b"),
            record("A", "S2", 3, GroundTruth::Nonmatching, "c"),
            record("B", "S3", 1, GroundTruth::Matching, "b"),
            record("B", "S3", 4, GroundTruth::Matching, "b"),
        ];
        let pairs = repeatability_pairs(&records).unwrap();
        let scheme = abc();

        let per = build_tables(&pairs, &scheme, GroupBy::PerSubject, &BTreeSet::new()).unwrap();
        assert_eq!(per.len(), 3);

        let pooled =
            build_tables(&pairs, &scheme, GroupBy::PooledOverSubjects, &BTreeSet::new()).unwrap();
        assert_eq!(pooled.len(), 2);
        let matching = &pooled[&TableKey {
            material: Material::Bullet,
            stratum: GroundTruth::Matching,
            subject: SubjectKey::Pooled,
        }];
        assert_eq!(matching.total(), 2);
        assert_eq!(matching.count(0, 0), 1);
        assert_eq!(matching.count(1, 1), 1);
    }

    #[test]
    fn excluded_labels_drop_whole_pairs() {
        let records = vec![
            record("A", "S1", 1, GroundTruth::Matching, "a"),
            record("A", "S1", 3, GroundTruth::Matching, "c"),
            record("A", "S2", 1, GroundTruth::Matching, "b"),
            record("A", "S2", 3, GroundTruth::Matching, "b"),
        ];
        let pairs = repeatability_pairs(&records).unwrap();
        let excluded: BTreeSet<String> = ["c".to_string()].into();
        let tables =
            build_tables(&pairs, &abc(), GroupBy::PooledOverSubjects, &excluded).unwrap();
        let table = tables.values().next().unwrap();
        assert_eq!(table.total(), 1, "the pair touching `c` is gone");
    }

    #[test]
    fn synthetic_records_round_trip() {
        let scheme = abc();
        let table = AgreementTable::from_counts(
            &[vec![3, 1, 0], vec![0, 2, 2], vec![1, 0, 4]],
            scheme.clone(),
        )
        .unwrap();
        let records = synthetic_records(&table, Material::Bullet, GroundTruth::Nonmatching);
        let pairs = repeatability_pairs(&records).unwrap();
        let tables =
            build_tables(&pairs, &scheme, GroupBy::PooledOverSubjects, &BTreeSet::new()).unwrap();
        assert_eq!(tables.len(), 1);
        assert_eq!(tables.values().next().unwrap(), &table);
    }

    #[test]
    fn csv_round_trip_preserves_records() {
        let records = vec![
            record("A", "S1", 1, GroundTruth::Matching, "a"),
            record("B", "S2", 2, GroundTruth::Nonmatching, "c"),
        ];
        let csv = records_to_csv(&records);
        let back = parse_records(csv.as_bytes(), &abc()).unwrap();
        assert_eq!(back, records);
    }
}
