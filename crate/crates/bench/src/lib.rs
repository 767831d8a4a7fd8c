//! Shared fixtures for the pipeline benchmarks.

use concord::{AgreementTable, CategoryScheme, ScatterPoint, ScatterSpec};

/// The bundled nonmatching bullet-repeatability table, inlined so benchmarks
/// stay free of file I/O.
pub fn nonmatching_bullets() -> AgreementTable {
    let scheme = CategoryScheme::new([
        "Identification",
        "Inconclusive-A",
        "Inconclusive-B",
        "Inconclusive-C",
        "Elimination",
        "Unsuitable",
    ])
    .unwrap();
    AgreementTable::from_counts(
        &[
            vec![2, 3, 6, 2, 6, 0],
            vec![0, 52, 37, 42, 27, 0],
            vec![5, 31, 341, 98, 45, 7],
            vec![1, 32, 109, 284, 53, 1],
            vec![1, 20, 35, 66, 514, 4],
            vec![0, 0, 13, 6, 4, 8],
        ],
        scheme,
    )
    .unwrap()
}

/// A scatter spec the size of a full per-examiner figure: 105 points.
pub fn examiner_scatter() -> ScatterSpec {
    let points = (0..105)
        .map(|i| {
            let t = i as f64 / 104.0;
            ScatterPoint {
                p_expected: 0.2 + 0.6 * t,
                p_observed: 0.3 + 0.65 * t,
                label: format!("E{i:03}"),
            }
        })
        .collect();
    ScatterSpec {
        title: "repeatability".to_string(),
        points,
        isolines: ScatterSpec::default_isolines(),
    }
}
