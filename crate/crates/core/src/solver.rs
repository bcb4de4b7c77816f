//! Joint fairness conditions for both players.
//!
//! In `t` coordinates, "every food makes up a third of the cutter's diet"
//! and "every food makes up a third of the chooser's diet" become two
//! linear systems. With `m = k+1`, `n = k+2` (mod 3), equation `k` reads
//!
//! ```text
//! cutter:  -t_m p_m + t_n p_n = 2/3 - (p_m + p_n)
//! chooser:  t_m p_m - t_n p_n = 2/3 - (p_m + p_n)
//! ```
//!
//! Adding the two equations for the same `k` eliminates the chooser and
//! leaves `p_m + p_n = 2/3`, i.e. `p_k = 1/3`. Subtracting leaves
//! `t_m p_m = t_n p_n`, which for the uniform cutter means `t_m = t_n`.
//! The only fair pairs are therefore the uniform cutter with a chooser on
//! the diagonal `t0 = t1 = t2`. [`grid_search`] checks this by brute force.

use serde::{Deserialize, Serialize};

use crate::diet::{diet_profile, fairness_residual};
use crate::error::{Error, Result};
use crate::strategy::{symmetric_chooser, ChooserStrategy, CutterStrategy, TParams};

/// Grids larger than this are refused.
pub const MAX_GRID_POINTS: u128 = 100_000_000;

/// Number of equispaced family members checked by [`solve_joint`].
pub const SELF_CHECK_SAMPLES: usize = 21;

const TWO_THIRDS: f64 = 2.0 / 3.0;

/// Left minus right side of both linear systems.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResidualVector {
    /// Equations derived from the cutter's diet, one per food.
    pub cutter_eqs: [f64; 3],
    /// Equations derived from the chooser's diet, one per food.
    pub chooser_eqs: [f64; 3],
}

impl ResidualVector {
    pub fn max_abs(&self) -> f64 {
        self.cutter_eqs
            .iter()
            .chain(&self.chooser_eqs)
            .map(|r| r.abs())
            .fold(0.0, f64::max)
    }

    pub fn cutter_sum(&self) -> f64 {
        self.cutter_eqs.iter().sum()
    }

    pub fn chooser_sum(&self) -> f64 {
        self.chooser_eqs.iter().sum()
    }
}

pub fn residual_system(cutter: &CutterStrategy, t: &TParams) -> ResidualVector {
    let p = cutter.probabilities();
    let mut cutter_eqs = [0.0; 3];
    let mut chooser_eqs = [0.0; 3];
    for k in 0..3 {
        let (m, n) = ((k + 1) % 3, (k + 2) % 3);
        let rhs = TWO_THIRDS - (p[m] + p[n]);
        let lhs = -t.get(m) * p[m] + t.get(n) * p[n];
        cutter_eqs[k] = lhs - rhs;
        chooser_eqs[k] = -lhs - rhs;
    }
    ResidualVector {
        cutter_eqs,
        chooser_eqs,
    }
}

/// The fair strategy pairs: the uniform cutter and `t ↦ symmetric_chooser(t)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolutionFamily {
    pub cutter: CutterStrategy,
    pub t_range: (f64, f64),
    /// Largest residual seen over the equispaced self-check samples.
    pub self_check_max_residual: f64,
}

impl SolutionFamily {
    pub fn member(&self, t: f64) -> Result<ChooserStrategy> {
        symmetric_chooser(t)
    }

    /// `count` equispaced parameters spanning `t_range`, endpoints included.
    pub fn sample_parameters(&self, count: usize) -> Vec<f64> {
        let (lo, hi) = self.t_range;
        match count {
            0 => Vec::new(),
            1 => vec![lo],
            _ => (0..count)
                .map(|i| {
                    let (a, b) = ((count - 1 - i) as f64, i as f64);
                    (a * lo + b * hi) / (count - 1) as f64
                })
                .collect(),
        }
    }
}

/// Solves both systems jointly.
///
/// The sum equations pin the cutter to uniform; the difference equations,
/// kept in the cleared form `t_m p_m - t_n p_n = 0` so that `t = 0` stays
/// admissible, then force equal `t` for every cyclic pair.
pub fn solve_joint() -> SolutionFamily {
    // The sum equations give p_m + p_n = 2/3 for all three pairs; with the
    // simplex constraint that is p_k = 1 - 2/3 = 1/3. Building the point
    // directly avoids the rounding of 1 - 2/3.
    let cutter = CutterStrategy::uniform();
    let mut family = SolutionFamily {
        cutter,
        t_range: (-1.0, 1.0),
        self_check_max_residual: 0.0,
    };
    family.self_check_max_residual = family
        .sample_parameters(SELF_CHECK_SAMPLES)
        .into_iter()
        .map(|t| residual_system(&cutter, &TParams::diagonal(t).expect("t in [-1, 1]")).max_abs())
        .fold(0.0, f64::max);
    family
}

/// Choosers solving the difference equations `t_m p_m = t_n p_n` for a
/// fixed cutter: `t_k = tau * weights[k]`, `tau` in `tau_range`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChooserFamily {
    pub weights: [f64; 3],
    pub tau_range: (f64, f64),
}

impl ChooserFamily {
    pub fn member(&self, tau: f64) -> Result<ChooserStrategy> {
        let (lo, hi) = self.tau_range;
        if !(lo..=hi).contains(&tau) {
            return Err(Error::OutOfRange {
                name: "tau",
                value: tau,
                min: lo,
                max: hi,
            });
        }
        let t = self.weights.map(|w| (tau * w).clamp(-1.0, 1.0));
        Ok(ChooserStrategy::from_t_params(TParams::new(t[0], t[1], t[2])?))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum FeasibilityResult {
    Feasible {
        family: ChooserFamily,
        /// Distance of the cutter from uniform, which is also the largest
        /// system residual left on every member of `family`.
        cutter_deviation: f64,
    },
    Infeasible {
        /// Smallest diet-fairness residual any chooser can reach against this
        /// cutter: `max_k |p_k - 1/3| / 2`. The uniform chooser attains it.
        certificate: f64,
        /// Food whose pairwise-sum equation is violated the most.
        witness_food: usize,
        /// `p_m + p_n` for the two foods other than `witness_food`.
        pair_sum: f64,
    },
}

impl FeasibilityResult {
    pub fn is_feasible(&self) -> bool {
        matches!(self, FeasibilityResult::Feasible { .. })
    }

    pub fn certificate(&self) -> Option<f64> {
        match self {
            FeasibilityResult::Infeasible { certificate, .. } => Some(*certificate),
            FeasibilityResult::Feasible { .. } => None,
        }
    }
}

/// Fairness for a fixed cutter. `tol` bounds the cutter's distance from
/// uniform, not any residual.
pub fn solve_chooser_given_cutter(cutter: &CutterStrategy, tol: f64) -> FeasibilityResult {
    let p = cutter.probabilities();
    // Adding matched equations: (lambda_k - 1/3) + (omega_k - 1/3) = 1/3 - p_k
    // whatever the chooser does, so one of the two is at least |p_k - 1/3| / 2.
    let mut witness_food = 0;
    let mut worst = -1.0;
    for (k, &pk) in p.iter().enumerate() {
        let gap = (pk - 1.0 / 3.0).abs();
        if gap > worst {
            worst = gap;
            witness_food = k;
        }
    }
    if worst <= tol {
        // t_k = tau / (3 p_k); the exactly uniform cutter gets unit weights,
        // i.e. the diagonal family. A food never rejected leaves t_k free and
        // is pinned to 0.
        let weights = p.map(|pk| if pk > 0.0 { 1.0 / (3.0 * pk) } else { 0.0 });
        let reach = weights
            .iter()
            .filter(|&&w| w > 0.0)
            .map(|&w| 1.0 / w)
            .fold(f64::INFINITY, f64::min)
            .min(1.0);
        return FeasibilityResult::Feasible {
            family: ChooserFamily {
                weights,
                tau_range: (-reach, reach),
            },
            cutter_deviation: worst,
        };
    }
    let (m, n) = ((witness_food + 1) % 3, (witness_food + 2) % 3);
    FeasibilityResult::Infeasible {
        certificate: worst / 2.0,
        witness_food,
        pair_sum: p[m] + p[n],
    }
}

/// Best fairness residual over a sample of choosers, for checking certificates.
pub fn best_fairness_residual<'a>(
    cutter: &CutterStrategy,
    choosers: impl IntoIterator<Item = &'a ChooserStrategy>,
) -> f64 {
    choosers
        .into_iter()
        .map(|ch| fairness_residual(&diet_profile(cutter, ch), 0.0).max_abs_residual)
        .fold(f64::INFINITY, f64::min)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSearchConfig {
    /// Barycentric spacing on the cutter simplex; must divide 1.
    pub simplex_step: f64,
    /// Spacing along each `t` axis; must divide 2.
    pub t_step: f64,
    pub residual_tol: f64,
}

impl GridSearchConfig {
    pub fn new(simplex_step: f64, t_step: f64, residual_tol: f64) -> Result<Self> {
        let config = GridSearchConfig {
            simplex_step,
            t_step,
            residual_tol,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        self.divisions()?;
        if self.residual_tol.is_nan() || self.residual_tol < 0.0 {
            return Err(Error::InvalidGrid(format!(
                "residual_tol must be nonnegative, got {}",
                self.residual_tol
            )));
        }
        Ok(())
    }

    /// `(n, m)`: the simplex has `n` barycentric steps, each `t` axis `m`
    /// steps across `[-1, 1]`.
    pub fn divisions(&self) -> Result<(u64, u64)> {
        let n = steps_across(self.simplex_step, 1.0, "simplex_step")?;
        let m = steps_across(self.t_step, 2.0, "t_step")?;
        let points = self.point_count_for(n, m);
        if points > MAX_GRID_POINTS {
            return Err(Error::GridTooLarge {
                points,
                limit: MAX_GRID_POINTS,
            });
        }
        Ok((n, m))
    }

    fn point_count_for(&self, n: u64, m: u64) -> u128 {
        let simplex = (n as u128 + 1) * (n as u128 + 2) / 2;
        simplex * (m as u128 + 1).pow(3)
    }
}

fn steps_across(step: f64, span: f64, name: &str) -> Result<u64> {
    if !(step > 0.0 && step <= 1.0) {
        return Err(Error::InvalidGrid(format!("{name} must lie in (0, 1], got {step}")));
    }
    let ratio = span / step;
    if ratio > 1e7 {
        return Err(Error::GridTooLarge {
            points: ratio as u128,
            limit: MAX_GRID_POINTS,
        });
    }
    let count = ratio.round();
    if (ratio - count).abs() > 1e-9 * ratio.max(1.0) {
        return Err(Error::InvalidGrid(format!(
            "{name} = {step} does not divide {span} into whole steps"
        )));
    }
    Ok(count as u64)
}

/// Integer coordinates of a grid point: a composition of `n` for the cutter
/// and three indices in `0..=m` for `t`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct GridCoords {
    pub simplex: [u64; 3],
    pub t: [u64; 3],
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridHit {
    pub cutter: CutterStrategy,
    pub t: TParams,
    pub max_abs_residual: f64,
    pub coords: GridCoords,
}

struct Grid {
    n: u64,
    m: u64,
    compositions: Vec<[u64; 3]>,
    t_values: Vec<f64>,
}

impl Grid {
    fn new(n: u64, m: u64) -> Self {
        let mut compositions = Vec::new();
        for a in 0..=n {
            for b in 0..=(n - a) {
                compositions.push([a, b, n - a - b]);
            }
        }
        // (2i - m) / m is one correctly rounded division, so mirrored and
        // repeated grid values agree bit for bit.
        let t_values = (0..=m)
            .map(|i| (2 * i as i64 - m as i64) as f64 / m as f64)
            .collect();
        Grid {
            n,
            m,
            compositions,
            t_values,
        }
    }

    fn len(&self) -> usize {
        self.compositions.len() * self.t_values.len().pow(3)
    }

    fn evaluate(&self, index: usize, tol: f64) -> Option<GridHit> {
        let side = (self.m + 1) as usize;
        let cube = side * side * side;
        let comp = self.compositions[index / cube];
        let rest = index % cube;
        let ti = [rest / (side * side), (rest / side) % side, rest % side];

        let p = comp.map(|c| c as f64 / self.n as f64);
        let cutter = CutterStrategy::new(p[0], p[1], p[2]).expect("grid point on the simplex");
        let t = TParams::new(
            self.t_values[ti[0]],
            self.t_values[ti[1]],
            self.t_values[ti[2]],
        )
        .expect("grid point in the cube");
        let residual = residual_system(&cutter, &t).max_abs();
        (residual <= tol).then(|| GridHit {
            cutter,
            t,
            max_abs_residual: residual,
            coords: GridCoords {
                simplex: comp,
                t: ti.map(|i| i as u64),
            },
        })
    }
}

fn sort_hits(hits: &mut [GridHit]) {
    hits.sort_by(|a, b| {
        a.max_abs_residual
            .total_cmp(&b.max_abs_residual)
            .then_with(|| a.coords.cmp(&b.coords))
    });
}

/// Exhaustive scan of the simplex grid times the `t` cube. Returns every
/// point whose system residual is within `residual_tol`, sorted by residual
/// and then by grid coordinates.
///
/// Runs on the rayon pool when the `parallel` feature is on; the result is
/// the same either way.
pub fn grid_search(config: &GridSearchConfig) -> Result<Vec<GridHit>> {
    #[cfg(feature = "parallel")]
    {
        grid_search_parallel(config)
    }
    #[cfg(not(feature = "parallel"))]
    {
        grid_search_sequential(config)
    }
}

pub fn grid_search_sequential(config: &GridSearchConfig) -> Result<Vec<GridHit>> {
    config.validate()?;
    let (n, m) = config.divisions()?;
    let grid = Grid::new(n, m);
    let mut hits: Vec<GridHit> = (0..grid.len())
        .filter_map(|i| grid.evaluate(i, config.residual_tol))
        .collect();
    sort_hits(&mut hits);
    Ok(hits)
}

#[cfg(feature = "parallel")]
pub fn grid_search_parallel(config: &GridSearchConfig) -> Result<Vec<GridHit>> {
    use rayon::prelude::*;

    config.validate()?;
    let (n, m) = config.divisions()?;
    let grid = Grid::new(n, m);
    let mut hits: Vec<GridHit> = (0..grid.len())
        .into_par_iter()
        .filter_map(|i| grid.evaluate(i, config.residual_tol))
        .collect();
    sort_hits(&mut hits);
    Ok(hits)
}

/// A grid hit together with its max-norm distance from the solution family.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Offender {
    pub hit: GridHit,
    pub family_distance: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct UniquenessReport {
    pub pass: bool,
    /// No grid point met the residual tolerance; the pass is vacuous.
    pub no_hits: bool,
    pub grid_points: u64,
    pub hits: usize,
    pub family_tol: f64,
    /// Hit farthest from the family (reported on pass too).
    pub worst: Option<Offender>,
    /// Hits outside `family_tol`, farthest first, at most ten.
    pub offenders: Vec<Offender>,
}

/// Max-norm distance of `(cutter, t)` from `{uniform} x {t0 = t1 = t2}`.
pub fn family_distance(cutter: &CutterStrategy, t: &TParams) -> f64 {
    cutter
        .distance_from_uniform()
        .max(t.distance_from_diagonal())
}

pub fn verify_uniqueness(config: &GridSearchConfig, family_tol: f64) -> Result<UniquenessReport> {
    let hits = grid_search(config)?;
    Ok(uniqueness_report(config, hits, family_tol))
}

/// Scores already computed hits against the family, e.g. those of
/// [`grid_search_sequential`].
pub fn uniqueness_report(
    config: &GridSearchConfig,
    hits: Vec<GridHit>,
    family_tol: f64,
) -> UniquenessReport {
    let (n, m) = config.divisions().expect("validated by grid_search");
    let mut scored: Vec<Offender> = hits
        .iter()
        .map(|&hit| Offender {
            hit,
            family_distance: family_distance(&hit.cutter, &hit.t),
        })
        .collect();
    // Stable sort keeps the residual order among equal distances.
    scored.sort_by(|a, b| b.family_distance.total_cmp(&a.family_distance));
    let worst = scored.first().copied();
    let offenders: Vec<Offender> = scored
        .iter()
        .filter(|o| o.family_distance > family_tol)
        .take(10)
        .copied()
        .collect();
    UniquenessReport {
        pass: offenders.is_empty(),
        no_hits: hits.is_empty(),
        grid_points: config.point_count_for(n, m) as u64,
        hits: hits.len(),
        family_tol,
        worst,
        offenders,
    }
}
