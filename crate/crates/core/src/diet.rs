//! Long-run diet shares of both players and their distance from fairness.

use serde::{Deserialize, Serialize};

use crate::strategy::{ChooserStrategy, CutterStrategy, FoodIndex};

/// Fairness tolerance used for analytically computed profiles.
pub const DEFAULT_FAIRNESS_TOLERANCE: f64 = 1e-9;

const THIRD: f64 = 1.0 / 3.0;

/// Stationary food frequencies: `lambda` for the cutter, `omega` for the chooser.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DietProfile {
    pub lambda: [f64; 3],
    pub omega: [f64; 3],
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FairnessReport {
    /// `lambda[k] - 1/3`
    pub lambda_residuals: [f64; 3],
    /// `omega[k] - 1/3`
    pub omega_residuals: [f64; 3],
    pub max_abs_residual: f64,
    pub tolerance: f64,
    pub is_fair: bool,
}

/// Exact diet shares for a pair of strategies.
///
/// When food `j` is rejected the chooser takes `k` from the remaining pair
/// with probability `c[k|j]` and the cutter eats the third food, so
///
/// ```text
/// omega[k]  = sum over j != k of c[k|j] * p[j]
/// lambda[k] = sum over j != k of c[third(k, j) | j] * p[j]
/// ```
pub fn diet_profile(cutter: &CutterStrategy, chooser: &ChooserStrategy) -> DietProfile {
    let mut lambda = [0.0; 3];
    let mut omega = [0.0; 3];
    for k in FoodIndex::ALL {
        let (a, b) = others(k);
        let (pa, pb) = (cutter.rejection(a), cutter.rejection(b));
        omega[k.index()] = chooser.prob(k, a) * pa + chooser.prob(k, b) * pb;
        lambda[k.index()] = chooser.prob(b, a) * pa + chooser.prob(a, b) * pb;
    }
    DietProfile { lambda, omega }
}

/// The two foods other than `k`, in ascending order.
fn others(k: FoodIndex) -> (FoodIndex, FoodIndex) {
    let f = FoodIndex::ALL;
    match k.index() {
        0 => (f[1], f[2]),
        1 => (f[0], f[2]),
        _ => (f[0], f[1]),
    }
}

pub fn fairness_residual(profile: &DietProfile, tolerance: f64) -> FairnessReport {
    let lambda_residuals = profile.lambda.map(|v| v - THIRD);
    let omega_residuals = profile.omega.map(|v| v - THIRD);
    let max_abs_residual = lambda_residuals
        .iter()
        .chain(&omega_residuals)
        .map(|r| r.abs())
        .fold(0.0, f64::max);
    FairnessReport {
        lambda_residuals,
        omega_residuals,
        max_abs_residual,
        tolerance,
        is_fair: max_abs_residual <= tolerance,
    }
}
