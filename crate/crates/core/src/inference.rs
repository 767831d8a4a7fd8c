//! Statistical tests and interpretive scales for collections of agreement
//! summaries: an exact one-sided sign test, kappa interpretation bands,
//! kappa isolines, and Tukey box-and-whisker statistics.

use std::f64::consts::LN_2;
use std::fmt;

use thiserror::Error;

use crate::agreement::Kappa;

#[derive(Debug, Error, PartialEq)]
pub enum InferenceError {
    #[error("sign test needs at least one nonzero difference")]
    NoInformation,
    #[error("input contains a non-finite value")]
    NotFinite,
    #[error("empty input")]
    EmptyInput,
    #[error("degenerate kappa has no interpretation band")]
    DegenerateKappa,
}

/// Result of the one-sided sign test.
///
/// The alternative is fixed: observed exceeds expected more than half the
/// time. Zero differences are dropped before testing (their count is kept so
/// callers can audit the tie handling).
#[derive(Debug, Clone, PartialEq)]
pub struct SignTestResult {
    pub n_positive: usize,
    pub n_negative: usize,
    pub n_zero: usize,
    pub p_value: f64,
}

impl SignTestResult {
    pub const ALTERNATIVE: &'static str = "observed exceeds expected";

    pub fn n_effective(&self) -> usize {
        self.n_positive + self.n_negative
    }
}

impl fmt::Display for SignTestResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "n_positive={} n_negative={} n_zero={} p_value={}",
            self.n_positive, self.n_negative, self.n_zero, self.p_value
        )
    }
}

/// Exact one-sided sign test of "median difference is zero" against
/// "positive differences are the majority".
///
/// The p-value is the exact upper binomial tail
/// `sum_{j >= n_positive} C(n_eff, j) / 2^n_eff`, evaluated through
/// logarithmic binomial coefficients — no normal approximation at any size.
pub fn sign_test(differences: &[f64]) -> Result<SignTestResult, InferenceError> {
    let mut n_positive = 0;
    let mut n_negative = 0;
    let mut n_zero = 0;
    for &d in differences {
        if !d.is_finite() {
            return Err(InferenceError::NotFinite);
        }
        if d > 0.0 {
            n_positive += 1;
        } else if d < 0.0 {
            n_negative += 1;
        } else {
            n_zero += 1;
        }
    }
    let n_effective = n_positive + n_negative;
    if n_effective == 0 {
        return Err(InferenceError::NoInformation);
    }
    Ok(SignTestResult {
        n_positive,
        n_negative,
        n_zero,
        p_value: binomial_upper_tail_half(n_effective, n_positive),
    })
}

/// P(X >= k) for X ~ Binomial(n, 1/2).
fn binomial_upper_tail_half(n: usize, k: usize) -> f64 {
    if k == 0 {
        return 1.0;
    }
    // ln_fact[m] = ln(m!)
    let mut ln_fact = vec![0.0f64; n + 1];
    for m in 1..=n {
        ln_fact[m] = ln_fact[m - 1] + (m as f64).ln();
    }
    let ln_half_n = -(n as f64) * LN_2;
    let mut terms: Vec<f64> = (k..=n)
        .map(|j| (ln_fact[n] - ln_fact[j] - ln_fact[n - j] + ln_half_n).exp())
        .collect();
    // Accumulate small terms first.
    terms.sort_by(|a, b| a.partial_cmp(b).expect("terms are finite"));
    terms.iter().sum()
}

/// Agreement-level bands for interpreting a kappa value.
///
/// Boundaries sit at 0.21, 0.40, 0.60, 0.80 and 0.90, each inclusive on the
/// lower edge of its band; everything below 0.21 (negatives included) reads
/// as no agreement beyond chance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum KappaBand {
    None,
    Minimal,
    Weak,
    Moderate,
    Strong,
    AlmostPerfect,
}

impl KappaBand {
    /// Band of a plain kappa value (callers must ensure `kappa <= 1`).
    pub fn classify(kappa: f64) -> KappaBand {
        if kappa > 0.90 {
            KappaBand::AlmostPerfect
        } else if kappa >= 0.80 {
            KappaBand::Strong
        } else if kappa >= 0.60 {
            KappaBand::Moderate
        } else if kappa >= 0.40 {
            KappaBand::Weak
        } else if kappa >= 0.21 {
            KappaBand::Minimal
        } else {
            KappaBand::None
        }
    }

    /// The kappa interval covered by this band, `(low, high)`.
    ///
    /// Every band includes its lower edge, except `AlmostPerfect` which
    /// starts strictly above 0.90 (so `Strong` is closed at both ends), and
    /// `None` extends below 0 to cover negative kappas.
    pub fn range(&self) -> (f64, f64) {
        match self {
            KappaBand::None => (f64::NEG_INFINITY, 0.21),
            KappaBand::Minimal => (0.21, 0.40),
            KappaBand::Weak => (0.40, 0.60),
            KappaBand::Moderate => (0.60, 0.80),
            KappaBand::Strong => (0.80, 0.90),
            KappaBand::AlmostPerfect => (0.90, 1.0),
        }
    }

    /// The band's interval in mathematical notation, boundary conventions
    /// included.
    pub fn interval_label(&self) -> &'static str {
        match self {
            KappaBand::None => "< 0.21",
            KappaBand::Minimal => "[0.21, 0.40)",
            KappaBand::Weak => "[0.40, 0.60)",
            KappaBand::Moderate => "[0.60, 0.80)",
            KappaBand::Strong => "[0.80, 0.90]",
            KappaBand::AlmostPerfect => "(0.90, 1.00]",
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            KappaBand::None => "None",
            KappaBand::Minimal => "Minimal",
            KappaBand::Weak => "Weak",
            KappaBand::Moderate => "Moderate",
            KappaBand::Strong => "Strong",
            KappaBand::AlmostPerfect => "Almost Perfect",
        }
    }
}

impl fmt::Display for KappaBand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Band of a computed kappa; degenerate kappas have none.
pub fn interpret_kappa(kappa: &Kappa) -> Result<KappaBand, InferenceError> {
    match kappa {
        Kappa::Value(v) => Ok(KappaBand::classify(*v)),
        Kappa::Degenerate => Err(InferenceError::DegenerateKappa),
    }
}

/// The observed agreement on the constant-kappa line at a given expected
/// agreement: `P_o = (1 - kappa) * P_e + kappa`.
///
/// In the `(P_e, P_o)` plane this line has intercept `kappa` and slope
/// `1 - kappa`; every point on it yields the same kappa.
pub fn kappa_isoline(kappa: f64, p_expected: f64) -> f64 {
    (1.0 - kappa) * p_expected + kappa
}

/// Five-number box-and-whisker summary with Tukey hinges.
#[derive(Debug, Clone, PartialEq)]
pub struct BoxStats {
    pub lower_whisker: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub upper_whisker: f64,
    /// Values beyond 1.5 IQR from the hinges, in ascending order.
    pub outliers: Vec<f64>,
}

/// Tukey box-plot statistics: hinges as quartiles, whiskers at the most
/// extreme data points within 1.5 IQR of the hinges, the rest as outliers.
pub fn box_stats(values: &[f64]) -> Result<BoxStats, InferenceError> {
    if values.is_empty() {
        return Err(InferenceError::EmptyInput);
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(InferenceError::NotFinite);
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("values are finite"));

    let n = sorted.len();
    let median = median_of(&sorted);
    // Tukey hinges: medians of the two halves, both including the middle
    // value when n is odd.
    let mid = n / 2;
    let (lower_half, upper_half) = if n.is_multiple_of(2) {
        (&sorted[..mid], &sorted[mid..])
    } else {
        (&sorted[..=mid], &sorted[mid..])
    };
    let q1 = median_of(lower_half);
    let q3 = median_of(upper_half);

    let iqr = q3 - q1;
    let low_fence = q1 - 1.5 * iqr;
    let high_fence = q3 + 1.5 * iqr;
    let inside: Vec<f64> = sorted
        .iter()
        .copied()
        .filter(|&v| v >= low_fence && v <= high_fence)
        .collect();
    let outliers: Vec<f64> = sorted
        .iter()
        .copied()
        .filter(|&v| v < low_fence || v > high_fence)
        .collect();
    // The hinges themselves are always inside the fences.
    let lower_whisker = inside[0];
    let upper_whisker = inside[inside.len() - 1];

    Ok(BoxStats {
        lower_whisker,
        q1,
        median,
        q3,
        upper_whisker,
        outliers,
    })
}

fn median_of(sorted: &[f64]) -> f64 {
    let n = sorted.len();
    if n % 2 == 1 {
        sorted[n / 2]
    } else {
        (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0
    }
}
