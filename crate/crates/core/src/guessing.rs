//! The shrewd-guessing rater model, in closed form and simulated.
//!
//! A rater classifies a sequence of items twice. A fraction `precise_rate`
//! of the positions are perceived exactly and reported identically in both
//! rounds; at the remaining positions (the same positions both rounds) the
//! rater guesses, drawing independently each round from the known category
//! distribution `p`. The closed-form agreement table of this process has
//! diagonal cells `precise_rate * p_i + guess_rate * p_i^2` and off-diagonal
//! cells `guess_rate * p_i * p_j`, both marginals equal to `p`, and — the
//! property that makes the model useful — a Cohen's kappa exactly equal to
//! `precise_rate`. Kappa reads off how much of the rater's consistency is
//! perception rather than calibrated guesswork.
//!
//! [`GuessingModel::simulate_run`] plays the process out with a seeded RNG
//! and returns the resulting count table; the kappa of a long run converges
//! to `precise_rate`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::agreement::{AgreementTable, Kappa, ProportionTable};
use crate::categories::CategoryScheme;

/// Identifier of the RNG stream used by the simulator, recorded in output
/// metadata so runs can be tied to the generator that produced them.
pub const GENERATOR_ID: &str = "chacha8";

const SUM_EPS: f64 = 1e-12;

#[derive(Debug, Error, PartialEq)]
pub enum GuessingError {
    #[error("precise-perception rate must lie in [0, 1], got {0}")]
    RateOutOfRange(f64),
    #[error("category probability {value} at index {index} is negative or not finite")]
    BadProbability { index: usize, value: f64 },
    #[error("category probabilities sum to {0}, expected 1")]
    ProbabilitiesNotNormalized(f64),
    #[error("a guessing model needs at least 2 categories, got {0}")]
    TooFewCategories(usize),
    #[error("scheme has {scheme} categories but the model has {model}")]
    SchemeSizeMismatch { scheme: usize, model: usize },
    #[error("simulation length must be at least 1")]
    EmptyRun,
}

/// A rater who perceives exactly with rate `precise_rate` and otherwise
/// guesses from the category distribution `p`.
#[derive(Debug, Clone, PartialEq)]
pub struct GuessingModel {
    precise_rate: f64,
    probs: Vec<f64>,
}

impl GuessingModel {
    /// Validates rates and probabilities. The guessing rate is always derived
    /// as `1 - precise_rate`, never stored.
    pub fn new(precise_rate: f64, probs: Vec<f64>) -> Result<Self, GuessingError> {
        if !precise_rate.is_finite() || !(0.0..=1.0).contains(&precise_rate) {
            return Err(GuessingError::RateOutOfRange(precise_rate));
        }
        if probs.len() < 2 {
            return Err(GuessingError::TooFewCategories(probs.len()));
        }
        for (index, &value) in probs.iter().enumerate() {
            if !value.is_finite() || value < 0.0 {
                return Err(GuessingError::BadProbability { index, value });
            }
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > SUM_EPS {
            return Err(GuessingError::ProbabilitiesNotNormalized(sum));
        }
        Ok(Self {
            precise_rate,
            probs,
        })
    }

    pub fn precise_rate(&self) -> f64 {
        self.precise_rate
    }

    /// `1 - precise_rate`.
    pub fn guess_rate(&self) -> f64 {
        1.0 - self.precise_rate
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn num_categories(&self) -> usize {
        self.probs.len()
    }

    /// The closed-form paired-classification table of the model.
    #[allow(clippy::needless_range_loop)]
    pub fn model_table(&self, scheme: &CategoryScheme) -> Result<ProportionTable, GuessingError> {
        self.check_scheme(scheme)?;
        let k = self.probs.len();
        let gamma = self.guess_rate();
        let mut matrix = vec![vec![0.0; k]; k];
        for i in 0..k {
            for j in 0..k {
                matrix[i][j] = if i == j {
                    self.precise_rate * self.probs[i] + gamma * self.probs[i] * self.probs[i]
                } else {
                    gamma * self.probs[i] * self.probs[j]
                };
            }
        }
        Ok(ProportionTable::from_proportions(&matrix, scheme.clone())
            .expect("model table cells are proportions summing to 1"))
    }

    /// The model's kappa, which equals `precise_rate` — unless `p` puts all
    /// its mass on one category, in which case kappa is degenerate.
    pub fn model_kappa(&self) -> Kappa {
        if self.probs.iter().any(|&p| p > 1.0 - SUM_EPS) {
            Kappa::Degenerate
        } else {
            Kappa::Value(self.precise_rate)
        }
    }

    /// Simulates one paired run of `n` positions and tallies the agreement
    /// table. Deterministic for a given `(model, n, seed)`.
    ///
    /// Each position draws a true category from `p` and is guessed with
    /// probability `guess_rate` (the same positions in both rounds):
    /// perceived positions report the truth twice, guessed positions draw
    /// independently from `p` in each round.
    pub fn simulate_run(
        &self,
        scheme: &CategoryScheme,
        n: u64,
        seed: u64,
    ) -> Result<AgreementTable, GuessingError> {
        self.check_scheme(scheme)?;
        if n == 0 {
            return Err(GuessingError::EmptyRun);
        }
        let k = self.probs.len();
        let cumulative: Vec<f64> = self
            .probs
            .iter()
            .scan(0.0, |acc, &p| {
                *acc += p;
                Some(*acc)
            })
            .collect();
        let draw = |u: f64| -> usize {
            cumulative
                .iter()
                .position(|&c| u < c)
                .unwrap_or(k - 1)
        };

        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let gamma = self.guess_rate();
        let mut counts = vec![vec![0i64; k]; k];
        for _ in 0..n {
            let truth = draw(rng.gen::<f64>());
            let (first, second) = if rng.gen::<f64>() < gamma {
                (draw(rng.gen::<f64>()), draw(rng.gen::<f64>()))
            } else {
                (truth, truth)
            };
            counts[first][second] += 1;
        }
        Ok(AgreementTable::from_counts(&counts, scheme.clone())
            .expect("n >= 1 guarantees a nonzero total"))
    }

    fn check_scheme(&self, scheme: &CategoryScheme) -> Result<(), GuessingError> {
        if scheme.len() != self.probs.len() {
            return Err(GuessingError::SchemeSizeMismatch {
                scheme: scheme.len(),
                model: self.probs.len(),
            });
        }
        Ok(())
    }
}

/// Runs one simulation per model and pairs each model's `precise_rate` with
/// the kappa of its simulated table.
///
/// Model `i` gets its own decorrelated stream seeded with `seed + i`, so a
/// sweep is reproducible as a whole and per entry.
pub fn sweep_kappa(models: &[GuessingModel], n: u64, seed: u64) -> Vec<(f64, Kappa)> {
    models
        .iter()
        .enumerate()
        .map(|(i, model)| {
            let scheme = CategoryScheme::numbered(model.num_categories())
                .expect("model has at least 2 categories");
            let table = model
                .simulate_run(&scheme, n, seed.wrapping_add(i as u64))
                .expect("sweep models are valid and n >= 1");
            (model.precise_rate(), table.cohen_kappa())
        })
        .collect()
}
