//! Golden tests against the bundled bullet-repeatability tables, checking the
//! pipeline against the values published for this data.

mod common;

use std::collections::BTreeSet;

use concord::display::round_half_away;
use concord::{
    apply_pooling, build_tables, builtin_pooling, full_afte_scheme, repeatability_pairs,
    synthetic_records, Axis, BuiltinPooling, GroundTruth, GroupBy, Material,
};

use common::{matching_table, nonmatching_table};

#[test]
fn fixture_totals_are_as_published() {
    assert_eq!(matching_table().total(), 960);
    assert_eq!(nonmatching_table().total(), 1855);
    assert_eq!(matching_table().diagonal_total(), 758);
    assert_eq!(nonmatching_table().diagonal_total(), 1201);
}

#[test]
fn observed_agreement_matches_published_percentages() {
    // 758/960 displays as 79.0%, 1201/1855 as 64.7%.
    let matching = matching_table().observed_agreement();
    let nonmatching = nonmatching_table().observed_agreement();
    assert_eq!(matching, 758.0 / 960.0);
    assert_eq!(nonmatching, 1201.0 / 1855.0);
    assert!((matching * 100.0 - 79.0).abs() < 0.05);
    assert!((nonmatching * 100.0 - 64.7).abs() < 0.05);
}

#[test]
fn nonmatching_marginals_match_the_published_vectors() {
    let table = nonmatching_table();
    let rows: Vec<f64> = table.marginals(Axis::Rows).iter().map(|m| m * 100.0).collect();
    let cols: Vec<f64> = table.marginals(Axis::Cols).iter().map(|m| m * 100.0).collect();
    // The published vectors were accumulated from cell percentages already
    // rounded to two decimals, so exact count-based marginals sit within
    // 0.015 points of them.
    let published_rows = [1.02, 8.51, 28.41, 25.88, 34.51, 1.67];
    let published_cols = [0.48, 7.44, 29.16, 26.84, 35.00, 1.08];
    for (computed, published) in rows.iter().zip(published_rows) {
        assert!((computed - published).abs() < 0.015, "{computed} vs {published}");
    }
    for (computed, published) in cols.iter().zip(published_cols) {
        assert!((computed - published).abs() < 0.015, "{computed} vs {published}");
    }
}

#[test]
fn nonmatching_proportion_cells_match_published_display() {
    let table = nonmatching_table();
    let scheme = full_afte_scheme();
    let props = table.proportion_table();
    let inc_b = scheme.index_of("Inconclusive-B").unwrap();
    let elim = scheme.index_of("Elimination").unwrap();
    assert_eq!(round_half_away(props.proportion(inc_b, inc_b) * 100.0, 2), 18.38);
    assert_eq!(round_half_away(props.proportion(elim, elim) * 100.0, 2), 27.71);
}

#[test]
fn nonmatching_expected_agreement_is_just_under_28_percent() {
    let table = nonmatching_table();
    let p_expected = table.expected_agreement();
    assert!((p_expected * 100.0 - 27.96).abs() < 0.01);

    let scheme = full_afte_scheme();
    let expected = table.expected_table();
    let inc_c = scheme.index_of("Inconclusive-C").unwrap();
    let elim = scheme.index_of("Elimination").unwrap();
    assert!((expected.proportion(inc_c, elim) * 100.0 - 9.05).abs() < 0.01);
    assert_eq!(round_half_away(expected.proportion(elim, elim) * 100.0, 2), 12.07);
}

#[test]
fn nonmatching_kappa_from_published_rates() {
    // Substituting the published observed and expected rates by hand gives
    // (0.6474 - 0.2796) / (1 - 0.2796) = 0.5106.
    let kappa = nonmatching_table().cohen_kappa().value().unwrap();
    assert!((kappa - 0.5106).abs() < 5e-4, "{kappa}");
}

#[test]
fn pooling_reproduces_published_agreement_rates() {
    let pool_inc = builtin_pooling(BuiltinPooling::PoolInconclusives);
    let pool_lean = builtin_pooling(BuiltinPooling::PoolToLean);
    // (table, pooling, diagonal, percent)
    let cases = [
        (matching_table(), &pool_inc, 801, 83.4),
        (matching_table(), &pool_lean, 821, 85.5),
        (nonmatching_table(), &pool_inc, 1550, 83.6),
        (nonmatching_table(), &pool_lean, 1323, 71.3),
    ];
    for (table, pooling, diagonal, percent) in cases {
        let pooled = apply_pooling(&table, pooling).unwrap();
        assert_eq!(pooled.total(), table.total());
        assert_eq!(pooled.diagonal_total(), diagonal);
        assert!((pooled.observed_agreement() * 100.0 - percent).abs() < 0.05);

        // Independent block-summation oracle for the pooled diagonal: sum
        // every source cell whose row and column map to the same target.
        let mut block_diagonal = 0u64;
        for i in 0..table.size() {
            for j in 0..table.size() {
                if pooling.map_index(i) == pooling.map_index(j) {
                    block_diagonal += table.count(i, j);
                }
            }
        }
        assert_eq!(block_diagonal, diagonal);
    }
}

#[test]
fn corner_anomalies_match_the_narrative() {
    // Matching sets: three unsuitable-vs-identification corner cases and
    // 8 + 8 elimination/identification flips.
    let matching = matching_table();
    let scheme = full_afte_scheme();
    let id = scheme.index_of("Identification").unwrap();
    let elim = scheme.index_of("Elimination").unwrap();
    let unsuitable = scheme.index_of("Unsuitable").unwrap();
    assert_eq!(matching.count(id, unsuitable) + matching.count(unsuitable, id), 3);
    assert_eq!(matching.count(id, elim) + matching.count(elim, id), 16);
}

#[test]
fn dropping_unsuitable_pairs_shrinks_the_matching_total() {
    // Unsuitable row 9 + column 6 - overlap 2 = 13 pairs touch the label.
    let scheme = full_afte_scheme();
    let records = synthetic_records(&matching_table(), Material::Bullet, GroundTruth::Matching);
    let pairs = repeatability_pairs(&records).unwrap();
    let excluded: BTreeSet<String> = ["Unsuitable".to_string()].into();
    let tables = build_tables(&pairs, &scheme, GroupBy::PooledOverSubjects, &excluded).unwrap();
    assert_eq!(tables.values().next().unwrap().total(), 960 - 13);
}

#[test]
fn synthetic_records_reproduce_both_fixtures() {
    let scheme = full_afte_scheme();
    for (table, truth) in [
        (matching_table(), GroundTruth::Matching),
        (nonmatching_table(), GroundTruth::Nonmatching),
    ] {
        let records = synthetic_records(&table, Material::Bullet, truth);
        let pairs = repeatability_pairs(&records).unwrap();
        let tables =
            build_tables(&pairs, &scheme, GroupBy::PooledOverSubjects, &BTreeSet::new()).unwrap();
        assert_eq!(tables.values().next().unwrap(), &table);
    }
}
