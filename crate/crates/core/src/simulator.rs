//! Seeded Monte Carlo play of the repeated game.
//!
//! Each round draws exactly two uniform variates from the generator, in this
//! order: one picks the rejected food by inverse CDF over ascending food
//! indices, the other decides the chooser's pick by comparing against the
//! conditional of the lower-indexed food of the remaining pair.
//!
//! The generator is [`ChaCha20Rng`] seeded with `seed_from_u64`; variates are
//! `rand` 0.8 `Standard` `f64`s, i.e. the top 53 bits of one `next_u64`
//! scaled by `2^-53`. A round therefore consumes four 32-bit words of the
//! ChaCha stream, which lets [`round_at`] jump straight to any round.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};

use crate::diet::DietProfile;
use crate::strategy::{ChooserStrategy, CutterStrategy, FoodIndex};

/// Identifier recorded next to every simulation result.
pub const GENERATOR: &str = "ChaCha20Rng (rand_chacha 0.3, seed_from_u64; rand 0.8 Standard f64)";

/// Absolute slack added to every binomial bound.
pub const CONVERGENCE_FLOOR: f64 = 1e-9;

/// Default number of standard errors allowed by [`check_convergence`].
pub const DEFAULT_Z: f64 = 4.0;

const WORDS_PER_ROUND: u128 = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RngSeed(pub u64);

impl RngSeed {
    pub fn generator(self) -> ChaCha20Rng {
        ChaCha20Rng::seed_from_u64(self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RoundRecord {
    pub round_index: u64,
    /// Thrown away by the cutter.
    pub rejected: FoodIndex,
    /// Eaten by the chooser.
    pub chosen: FoodIndex,
    /// Eaten by the cutter.
    pub leftover: FoodIndex,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimulationResult {
    pub n_rounds: u64,
    pub counts_lambda: [u64; 3],
    pub counts_omega: [u64; 3],
    pub counts_rejected: [u64; 3],
    pub empirical_lambda: [f64; 3],
    pub empirical_omega: [f64; 3],
    pub seed: RngSeed,
    pub generator: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub lambda_deviation: [f64; 3],
    pub omega_deviation: [f64; 3],
    pub lambda_bound: [f64; 3],
    pub omega_bound: [f64; 3],
    pub z: f64,
    pub pass: bool,
}

/// One iteration of the game: rejection, choice, leftover.
pub fn play_round<R: Rng + ?Sized>(
    cutter: &CutterStrategy,
    chooser: &ChooserStrategy,
    rng: &mut R,
    round_index: u64,
) -> RoundRecord {
    let u_reject: f64 = rng.gen();
    let u_choose: f64 = rng.gen();
    let rejected = sample_rejection(cutter, u_reject);
    let (lo, hi) = match rejected.index() {
        0 => (FoodIndex::ALL[1], FoodIndex::ALL[2]),
        1 => (FoodIndex::ALL[0], FoodIndex::ALL[2]),
        _ => (FoodIndex::ALL[0], FoodIndex::ALL[1]),
    };
    let chosen = if u_choose < chooser.prob(lo, rejected) {
        lo
    } else {
        hi
    };
    RoundRecord {
        round_index,
        rejected,
        chosen,
        leftover: rejected.third(chosen),
    }
}

fn sample_rejection(cutter: &CutterStrategy, u: f64) -> FoodIndex {
    let p = cutter.probabilities();
    let mut cumulative = 0.0;
    for (i, &pi) in p.iter().enumerate() {
        cumulative += pi;
        if u < cumulative {
            return FoodIndex::ALL[i];
        }
    }
    // Rounding left u above the last partial sum; take the last food that
    // can be rejected at all.
    let last = (0..3).rev().find(|&i| p[i] > 0.0).unwrap_or(2);
    FoodIndex::ALL[last]
}

/// The record of round `round_index` of the run seeded with `seed`, without
/// replaying the rounds before it.
pub fn round_at(
    cutter: &CutterStrategy,
    chooser: &ChooserStrategy,
    seed: RngSeed,
    round_index: u64,
) -> RoundRecord {
    let mut rng = seed.generator();
    rng.set_word_pos(round_index as u128 * WORDS_PER_ROUND);
    play_round(cutter, chooser, &mut rng, round_index)
}

#[derive(Default)]
struct Tally {
    lambda: [u64; 3],
    omega: [u64; 3],
    rejected: [u64; 3],
}

impl Tally {
    fn add(&mut self, record: &RoundRecord) {
        self.rejected[record.rejected.index()] += 1;
        self.omega[record.chosen.index()] += 1;
        self.lambda[record.leftover.index()] += 1;
    }

    fn finish(self, n_rounds: u64, seed: RngSeed) -> SimulationResult {
        let n = n_rounds as f64;
        SimulationResult {
            n_rounds,
            counts_lambda: self.lambda,
            counts_omega: self.omega,
            counts_rejected: self.rejected,
            empirical_lambda: self.lambda.map(|c| c as f64 / n),
            empirical_omega: self.omega.map(|c| c as f64 / n),
            seed,
            generator: GENERATOR.to_string(),
        }
    }
}

/// Plays `n_rounds` rounds on a generator seeded from `seed`.
///
/// # Panics
///
/// If `n_rounds` is zero.
pub fn simulate(
    cutter: &CutterStrategy,
    chooser: &ChooserStrategy,
    n_rounds: u64,
    seed: RngSeed,
) -> SimulationResult {
    simulate_inner(cutter, chooser, n_rounds, seed, |_| {})
}

/// [`simulate`], also returning every round.
pub fn simulate_logged(
    cutter: &CutterStrategy,
    chooser: &ChooserStrategy,
    n_rounds: u64,
    seed: RngSeed,
) -> (SimulationResult, Vec<RoundRecord>) {
    let mut log = Vec::with_capacity(n_rounds.min(1 << 24) as usize);
    let result = simulate_inner(cutter, chooser, n_rounds, seed, |r| log.push(*r));
    (result, log)
}

fn simulate_inner(
    cutter: &CutterStrategy,
    chooser: &ChooserStrategy,
    n_rounds: u64,
    seed: RngSeed,
    mut on_round: impl FnMut(&RoundRecord),
) -> SimulationResult {
    assert!(n_rounds >= 1, "a simulation needs at least one round");
    let mut rng = seed.generator();
    let mut tally = Tally::default();
    for i in 0..n_rounds {
        let record = play_round(cutter, chooser, &mut rng, i);
        tally.add(&record);
        on_round(&record);
    }
    tally.finish(n_rounds, seed)
}

/// Independent runs, one per seed, in the order of `seeds`.
pub fn simulate_batch(
    cutter: &CutterStrategy,
    chooser: &ChooserStrategy,
    n_rounds: u64,
    seeds: &[RngSeed],
) -> Vec<SimulationResult> {
    #[cfg(feature = "parallel")]
    {
        simulate_batch_parallel(cutter, chooser, n_rounds, seeds)
    }
    #[cfg(not(feature = "parallel"))]
    {
        simulate_batch_sequential(cutter, chooser, n_rounds, seeds)
    }
}

pub fn simulate_batch_sequential(
    cutter: &CutterStrategy,
    chooser: &ChooserStrategy,
    n_rounds: u64,
    seeds: &[RngSeed],
) -> Vec<SimulationResult> {
    seeds
        .iter()
        .map(|&seed| simulate(cutter, chooser, n_rounds, seed))
        .collect()
}

#[cfg(feature = "parallel")]
pub fn simulate_batch_parallel(
    cutter: &CutterStrategy,
    chooser: &ChooserStrategy,
    n_rounds: u64,
    seeds: &[RngSeed],
) -> Vec<SimulationResult> {
    use rayon::prelude::*;

    seeds
        .par_iter()
        .map(|&seed| simulate(cutter, chooser, n_rounds, seed))
        .collect()
}

/// Compares empirical against exact frequencies with a `z`-sigma binomial
/// bound per entry plus [`CONVERGENCE_FLOOR`].
pub fn check_convergence(result: &SimulationResult, exact: &DietProfile, z: f64) -> ConvergenceReport {
    let n = result.n_rounds as f64;
    let bound = |q: f64| z * (q * (1.0 - q) / n).max(0.0).sqrt();
    let deviation = |emp: [f64; 3], exact: [f64; 3]| {
        [0, 1, 2].map(|k| (emp[k] - exact[k]).abs())
    };
    let lambda_deviation = deviation(result.empirical_lambda, exact.lambda);
    let omega_deviation = deviation(result.empirical_omega, exact.omega);
    let lambda_bound = exact.lambda.map(bound);
    let omega_bound = exact.omega.map(bound);
    let pass = (0..3).all(|k| {
        lambda_deviation[k] <= lambda_bound[k] + CONVERGENCE_FLOOR
            && omega_deviation[k] <= omega_bound[k] + CONVERGENCE_FLOOR
    });
    ConvergenceReport {
        lambda_deviation,
        omega_deviation,
        lambda_bound,
        omega_bound,
        z,
        pass,
    }
}
