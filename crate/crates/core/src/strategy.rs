//! Strategy spaces of both players and the chooser's preference structure.
//!
//! The cutter (older cat) plays a point of the probability simplex over the
//! three foods: `p[i]` is how often food `i` is thrown away. The chooser
//! (younger cat) plays six conditional probabilities `c[k|j]`, the chance of
//! picking food `k` when food `j` is the one missing from the pair. Only three
//! of them are free; the chooser is stored in the affine `t` coordinates
//!
//! ```text
//! c[2|0] = (1 + t0) / 2    c[1|0] = (1 - t0) / 2
//! c[0|1] = (1 + t1) / 2    c[2|1] = (1 - t1) / 2
//! c[1|2] = (1 + t2) / 2    c[0|2] = (1 - t2) / 2
//! ```
//!
//! which makes conversions to and from [`TParams`] exact, and relabelling
//! the foods a matter of copying or negating coordinates.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance on the cutter's sum before renormalization.
pub const NORMALIZATION_TOLERANCE: f64 = 1e-12;

/// One of the three goods.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "usize", into = "usize")]
pub struct FoodIndex(u8);

impl FoodIndex {
    pub const ALL: [FoodIndex; 3] = [FoodIndex(0), FoodIndex(1), FoodIndex(2)];

    pub fn new(value: usize) -> Result<Self> {
        if value < 3 {
            Ok(FoodIndex(value as u8))
        } else {
            Err(Error::InvalidFood(value))
        }
    }

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }

    /// The food that is neither `self` nor `other`. Both must differ.
    #[inline]
    pub fn third(self, other: FoodIndex) -> FoodIndex {
        debug_assert_ne!(self, other);
        FoodIndex(3 - self.0 - other.0)
    }
}

impl TryFrom<usize> for FoodIndex {
    type Error = Error;

    fn try_from(value: usize) -> Result<Self> {
        FoodIndex::new(value)
    }
}

impl From<FoodIndex> for usize {
    fn from(food: FoodIndex) -> usize {
        food.index()
    }
}

impl fmt::Display for FoodIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Rejection frequencies of the cutter, a point of the 3-simplex.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 3]", into = "[f64; 3]")]
pub struct CutterStrategy {
    p: [f64; 3],
}

impl CutterStrategy {
    /// Validates `(p0, p1, p2)` and renormalizes it so that `p0 + p1 + p2`
    /// evaluates to exactly `1.0`.
    pub fn new(p0: f64, p1: f64, p2: f64) -> Result<Self> {
        let mut p = [p0, p1, p2];
        for (index, &value) in p.iter().enumerate() {
            if !value.is_finite() {
                return Err(Error::NonFinite { index, value });
            }
            if value < 0.0 {
                return Err(Error::NegativeProbability { index, value });
            }
        }
        let sum = p[0] + p[1] + p[2];
        if (sum - 1.0).abs() > NORMALIZATION_TOLERANCE {
            return Err(Error::NotNormalized { sum });
        }
        if sum != 1.0 {
            for v in &mut p {
                *v /= sum;
            }
            // Division leaves a few ulps of slack. Close it through the last
            // term of the sum, where `s + (1 - s)` is exactly one whenever
            // `s <= 1`, and fall back to the largest entry otherwise.
            p[2] = (1.0 - (p[0] + p[1])).max(0.0);
            for _ in 0..8 {
                let sum = p[0] + p[1] + p[2];
                if sum == 1.0 {
                    break;
                }
                let largest = (0..3).max_by(|&a, &b| p[a].total_cmp(&p[b])).unwrap();
                p[largest] = (p[largest] + (1.0 - sum)).clamp(0.0, 1.0);
            }
        }
        Ok(CutterStrategy { p })
    }

    /// The cutter that rejects every food with probability 1/3.
    pub fn uniform() -> Self {
        let third = 1.0 / 3.0;
        CutterStrategy {
            p: [third, third, third],
        }
    }

    #[inline]
    pub fn probabilities(&self) -> [f64; 3] {
        self.p
    }

    #[inline]
    pub fn rejection(&self, food: FoodIndex) -> f64 {
        self.p[food.index()]
    }

    /// Largest distance `|p_k - 1/3|` from the uniform cutter.
    pub fn distance_from_uniform(&self) -> f64 {
        self.p
            .iter()
            .map(|&v| (v - 1.0 / 3.0).abs())
            .fold(0.0, f64::max)
    }
}

/// Shorthand for [`CutterStrategy::new`].
pub fn make_cutter(p0: f64, p1: f64, p2: f64) -> Result<CutterStrategy> {
    CutterStrategy::new(p0, p1, p2)
}

impl TryFrom<[f64; 3]> for CutterStrategy {
    type Error = Error;

    fn try_from(p: [f64; 3]) -> Result<Self> {
        CutterStrategy::new(p[0], p[1], p[2])
    }
}

impl From<CutterStrategy> for [f64; 3] {
    fn from(cutter: CutterStrategy) -> [f64; 3] {
        cutter.p
    }
}

/// The chooser's affine coordinates, each in `[-1, 1]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 3]", into = "[f64; 3]")]
pub struct TParams {
    t: [f64; 3],
}

impl TParams {
    pub fn new(t0: f64, t1: f64, t2: f64) -> Result<Self> {
        const NAMES: [&str; 3] = ["t0", "t1", "t2"];
        let t = [t0, t1, t2];
        for (name, &value) in NAMES.iter().zip(&t) {
            if !(-1.0..=1.0).contains(&value) {
                return Err(Error::OutOfRange {
                    name,
                    value,
                    min: -1.0,
                    max: 1.0,
                });
            }
        }
        Ok(TParams { t })
    }

    /// The diagonal point `(t, t, t)`.
    pub fn diagonal(t: f64) -> Result<Self> {
        TParams::new(t, t, t)
    }

    #[inline]
    pub fn values(&self) -> [f64; 3] {
        self.t
    }

    #[inline]
    pub fn get(&self, i: usize) -> f64 {
        self.t[i]
    }

    /// Max-norm distance to the diagonal `t0 = t1 = t2`.
    pub fn distance_from_diagonal(&self) -> f64 {
        let hi = self.t.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let lo = self.t.iter().copied().fold(f64::INFINITY, f64::min);
        (hi - lo) / 2.0
    }
}

impl TryFrom<[f64; 3]> for TParams {
    type Error = Error;

    fn try_from(t: [f64; 3]) -> Result<Self> {
        TParams::new(t[0], t[1], t[2])
    }
}

impl From<TParams> for [f64; 3] {
    fn from(t: TParams) -> [f64; 3] {
        t.t
    }
}

/// Conditional choice probabilities of the chooser.
///
/// For absent food `j` the pair on offer is `{j+1, j+2}` (mod 3). The
/// "primary" choice is food `j+2`, with probability `(1 + t_j) / 2`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(from = "TParams", into = "TParams")]
pub struct ChooserStrategy {
    t: TParams,
}

impl ChooserStrategy {
    /// Builds a chooser from `c[1|0]`, `c[0|1]` and `c[1|2]`.
    ///
    /// Inputs below 1/4 may be shifted by up to one ulp of 1, since they are
    /// carried through the `t` coordinates.
    pub fn new(c10: f64, c01: f64, c12: f64) -> Result<Self> {
        const NAMES: [&str; 3] = ["c[1|0]", "c[0|1]", "c[1|2]"];
        for (name, &value) in NAMES.iter().zip(&[c10, c01, c12]) {
            if !(0.0..=1.0).contains(&value) {
                return Err(Error::OutOfRange {
                    name,
                    value,
                    min: 0.0,
                    max: 1.0,
                });
            }
        }
        // c[1|0] is the complement in the absent-0 pair, the other two are primary.
        let t = TParams::new(1.0 - 2.0 * c10, 2.0 * c01 - 1.0, 2.0 * c12 - 1.0)?;
        Ok(ChooserStrategy { t })
    }

    /// The chooser picking each food of every pair with probability 1/2.
    pub fn uniform() -> Self {
        ChooserStrategy {
            t: TParams { t: [0.0; 3] },
        }
    }

    #[inline]
    pub fn from_t_params(t: TParams) -> Self {
        ChooserStrategy { t }
    }

    #[inline]
    pub fn t_params(&self) -> TParams {
        self.t
    }

    /// `c[chosen | absent]`. Returns 0 when `chosen == absent`.
    pub fn prob(&self, chosen: FoodIndex, absent: FoodIndex) -> f64 {
        let (k, j) = (chosen.index(), absent.index());
        if k == j {
            return 0.0;
        }
        let t = self.t.t[j];
        if k == (j + 2) % 3 {
            (1.0 + t) / 2.0
        } else {
            (1.0 - t) / 2.0
        }
    }

    /// Full table `table[k][j] = c[k|j]`, zero on the diagonal.
    pub fn conditional_table(&self) -> [[f64; 3]; 3] {
        let mut table = [[0.0; 3]; 3];
        for k in FoodIndex::ALL {
            for j in FoodIndex::ALL {
                table[k.index()][j.index()] = self.prob(k, j);
            }
        }
        table
    }
}

impl From<TParams> for ChooserStrategy {
    fn from(t: TParams) -> Self {
        ChooserStrategy::from_t_params(t)
    }
}

impl From<ChooserStrategy> for TParams {
    fn from(chooser: ChooserStrategy) -> Self {
        chooser.t
    }
}

/// Shorthand for [`ChooserStrategy::new`].
pub fn make_chooser(c10: f64, c01: f64, c12: f64) -> Result<ChooserStrategy> {
    ChooserStrategy::new(c10, c01, c12)
}

pub fn to_t_params(chooser: &ChooserStrategy) -> TParams {
    chooser.t_params()
}

pub fn from_t_params(t: TParams) -> ChooserStrategy {
    ChooserStrategy::from_t_params(t)
}

/// Member of the one-parameter chooser family `t0 = t1 = t2 = t`.
pub fn symmetric_chooser(t: f64) -> Result<ChooserStrategy> {
    if !(-1.0..=1.0).contains(&t) {
        return Err(Error::OutOfRange {
            name: "t",
            value: t,
            min: -1.0,
            max: 1.0,
        });
    }
    Ok(ChooserStrategy::from_t_params(TParams::diagonal(t)?))
}

/// Verdict on an unordered pair `(a, b)` with `a < b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Verdict {
    FirstPreferred,
    SecondPreferred,
    Tie,
}

/// Pairs in the order the verdicts of a [`PreferenceRelation`] are stored.
pub const PAIRS: [(FoodIndex, FoodIndex); 3] = [
    (FoodIndex(0), FoodIndex(1)),
    (FoodIndex(1), FoodIndex(2)),
    (FoodIndex(0), FoodIndex(2)),
];

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PreferenceRelation {
    /// One verdict per entry of [`PAIRS`].
    pub verdicts: [Verdict; 3],
    pub eps: f64,
}

impl PreferenceRelation {
    /// Whether `a` is strictly preferred to `b`.
    pub fn prefers(&self, a: FoodIndex, b: FoodIndex) -> bool {
        if a == b {
            return false;
        }
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        let slot = PAIRS.iter().position(|&pair| pair == (lo, hi)).unwrap();
        match self.verdicts[slot] {
            Verdict::FirstPreferred => a == lo,
            Verdict::SecondPreferred => a == hi,
            Verdict::Tie => false,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PreferenceClass {
    /// A strict total order, most preferred food first.
    TransitiveStrict { order: [FoodIndex; 3] },
    /// The cycle `1 ≻ 0`, `2 ≻ 1`, `0 ≻ 2` (every `t_j > 0`).
    IntransitiveCycleCondition1,
    /// The cycle `0 ≻ 1`, `1 ≻ 2`, `2 ≻ 0` (every `t_j < 0`).
    IntransitiveCycleCondition2,
    /// Every pair tied.
    IntransitiveIndifference,
    /// Some but not all pairs tied.
    PartiallyTied,
}

impl PreferenceClass {
    pub fn is_intransitive(&self) -> bool {
        matches!(
            self,
            PreferenceClass::IntransitiveCycleCondition1
                | PreferenceClass::IntransitiveCycleCondition2
                | PreferenceClass::IntransitiveIndifference
        )
    }

    /// Stable short name, used in CSV output.
    pub fn label(&self) -> &'static str {
        match self {
            PreferenceClass::TransitiveStrict { .. } => "TransitiveStrict",
            PreferenceClass::IntransitiveCycleCondition1 => "IntransitiveCycleCondition1",
            PreferenceClass::IntransitiveCycleCondition2 => "IntransitiveCycleCondition2",
            PreferenceClass::IntransitiveIndifference => "IntransitiveIndifference",
            PreferenceClass::PartiallyTied => "PartiallyTied",
        }
    }
}

impl fmt::Display for PreferenceClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PreferenceClass::TransitiveStrict { order } => {
                write!(f, "TransitiveStrict({}>{}>{})", order[0], order[1], order[2])
            }
            other => f.write_str(other.label()),
        }
    }
}

/// Pairwise preferences of `chooser` and their class.
///
/// A pair is tied when its two conditionals differ by at most `eps`; with
/// `eps > 0` this can produce [`PreferenceClass::PartiallyTied`].
pub fn classify_preferences(
    chooser: &ChooserStrategy,
    eps: f64,
) -> Result<(PreferenceRelation, PreferenceClass)> {
    if !(0.0..1.0).contains(&eps) {
        return Err(Error::OutOfRange {
            name: "eps",
            value: eps,
            min: 0.0,
            max: 1.0,
        });
    }
    let mut verdicts = [Verdict::Tie; 3];
    for (slot, &(a, b)) in PAIRS.iter().enumerate() {
        let absent = a.third(b);
        let pa = chooser.prob(a, absent);
        let pb = chooser.prob(b, absent);
        verdicts[slot] = if (pa - pb).abs() <= eps {
            Verdict::Tie
        } else if pa > pb {
            Verdict::FirstPreferred
        } else {
            Verdict::SecondPreferred
        };
    }
    let relation = PreferenceRelation { verdicts, eps };
    Ok((relation, class_of(&relation)))
}

fn class_of(relation: &PreferenceRelation) -> PreferenceClass {
    let ties = relation
        .verdicts
        .iter()
        .filter(|&&v| v == Verdict::Tie)
        .count();
    match ties {
        3 => return PreferenceClass::IntransitiveIndifference,
        1 | 2 => return PreferenceClass::PartiallyTied,
        _ => {}
    }
    let f = FoodIndex::ALL;
    let forward = (0..3).all(|i| relation.prefers(f[(i + 1) % 3], f[i]));
    if forward {
        return PreferenceClass::IntransitiveCycleCondition1;
    }
    let backward = (0..3).all(|i| relation.prefers(f[i], f[(i + 1) % 3]));
    if backward {
        return PreferenceClass::IntransitiveCycleCondition2;
    }
    // Acyclic tournament: win counts are exactly 2, 1, 0.
    let mut order = f;
    order.sort_by_key(|&a| {
        let wins = f.iter().filter(|&&b| relation.prefers(a, b)).count();
        std::cmp::Reverse(wins)
    });
    PreferenceClass::TransitiveStrict { order }
}

/// A bijection on the three foods, `perm[i]` being the new label of food `i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "[usize; 3]", into = "[usize; 3]")]
pub struct Permutation([usize; 3]);

impl Permutation {
    pub const IDENTITY: Permutation = Permutation([0, 1, 2]);

    pub fn new(perm: [usize; 3]) -> Result<Self> {
        let mut seen = [false; 3];
        for &i in &perm {
            if i >= 3 || seen[i] {
                return Err(Error::InvalidPermutation(perm));
            }
            seen[i] = true;
        }
        Ok(Permutation(perm))
    }

    /// All six permutations, identity first.
    pub fn all() -> [Permutation; 6] {
        [
            Permutation([0, 1, 2]),
            Permutation([1, 2, 0]),
            Permutation([2, 0, 1]),
            Permutation([1, 0, 2]),
            Permutation([0, 2, 1]),
            Permutation([2, 1, 0]),
        ]
    }

    #[inline]
    pub fn apply(&self, food: FoodIndex) -> FoodIndex {
        FoodIndex(self.0[food.index()] as u8)
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = [0; 3];
        for (i, &j) in self.0.iter().enumerate() {
            inv[j] = i;
        }
        Permutation(inv)
    }

    pub fn is_even(&self) -> bool {
        // Three elements: even iff a rotation.
        (self.0[1] + 3 - self.0[0]) % 3 == 1 && (self.0[2] + 3 - self.0[1]) % 3 == 1
    }
}

impl TryFrom<[usize; 3]> for Permutation {
    type Error = Error;

    fn try_from(perm: [usize; 3]) -> Result<Self> {
        Permutation::new(perm)
    }
}

impl From<Permutation> for [usize; 3] {
    fn from(perm: Permutation) -> [usize; 3] {
        perm.0
    }
}

/// Relabels the foods of both strategies: `p'[perm(i)] = p[i]` and
/// `c'[perm(k) | perm(j)] = c[k | j]`. Exact, since every new `t`
/// coordinate is an old one or its negation.
pub fn permute_foods(
    cutter: &CutterStrategy,
    chooser: &ChooserStrategy,
    perm: Permutation,
) -> (CutterStrategy, ChooserStrategy) {
    let mut p = [0.0; 3];
    let mut t = [0.0; 3];
    for j in FoodIndex::ALL {
        let new_j = perm.apply(j);
        p[new_j.index()] = cutter.rejection(j);
        // Old primary choice for absent j is j+2; see where it lands.
        let old_primary = FoodIndex(((j.index() + 2) % 3) as u8);
        let new_primary = FoodIndex(((new_j.index() + 2) % 3) as u8);
        let tj = chooser.t.t[j.index()];
        t[new_j.index()] = if perm.apply(old_primary) == new_primary {
            tj
        } else {
            -tj
        };
    }
    (
        CutterStrategy { p },
        ChooserStrategy {
            t: TParams { t },
        },
    )
}

/// Like [`permute_foods`], taking the permutation as a raw array.
pub fn permute_foods_raw(
    cutter: &CutterStrategy,
    chooser: &ChooserStrategy,
    perm: [usize; 3],
) -> Result<(CutterStrategy, ChooserStrategy)> {
    Ok(permute_foods(cutter, chooser, Permutation::new(perm)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn food(i: usize) -> FoodIndex {
        FoodIndex::new(i).unwrap()
    }

    #[test]
    fn cutter_constructor() {
        let u = make_cutter(1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0).unwrap();
        assert_eq!(u, CutterStrategy::uniform());
        let v = make_cutter(1.0, 0.0, 0.0).unwrap();
        assert_eq!(v.probabilities(), [1.0, 0.0, 0.0]);
        assert!(matches!(
            make_cutter(0.5, 0.5, 0.5),
            Err(Error::NotNormalized { .. })
        ));
        assert!(matches!(
            make_cutter(-0.1, 0.6, 0.5),
            Err(Error::NegativeProbability { index: 0, .. })
        ));
        assert!(matches!(
            make_cutter(f64::NAN, 0.5, 0.5),
            Err(Error::NonFinite { .. })
        ));
    }

    #[test]
    fn cutter_renormalizes_small_noise() {
        let c = make_cutter(0.5 + 4e-13, 0.25, 0.25).unwrap();
        let p = c.probabilities();
        assert_eq!(p[0] + p[1] + p[2], 1.0);
        assert!((p[0] - 0.5).abs() < 1e-12);
        assert!(make_cutter(0.5 + 2e-12, 0.25, 0.25).is_err());
    }

    #[test]
    fn chooser_constructor() {
        let u = make_chooser(0.5, 0.5, 0.5).unwrap();
        for k in FoodIndex::ALL {
            for j in FoodIndex::ALL {
                if k != j {
                    assert_eq!(u.prob(k, j), 0.5);
                }
            }
        }
        let c = make_chooser(0.25, 0.75, 0.75).unwrap();
        assert_eq!(c.prob(food(2), food(0)), 0.75);
        assert_eq!(c.prob(food(2), food(1)), 0.25);
        assert_eq!(c.prob(food(0), food(2)), 0.25);
        assert_eq!(c.prob(food(1), food(0)), 0.25);
        assert!(matches!(
            make_chooser(1.2, 0.5, 0.5),
            Err(Error::OutOfRange { .. })
        ));
    }

    #[test]
    fn t_param_examples() {
        assert_eq!(to_t_params(&ChooserStrategy::uniform()).values(), [0.0; 3]);
        // c[2|0] = c[0|1] = c[1|2] = 1
        let det = make_chooser(0.0, 1.0, 1.0).unwrap();
        assert_eq!(to_t_params(&det).values(), [1.0; 3]);
        let c = make_chooser(0.25, 0.75, 0.75).unwrap();
        assert_eq!(to_t_params(&c).values(), [0.5; 3]);

        let c = from_t_params(TParams::new(-0.5, 0.2, 0.9).unwrap());
        assert_eq!(c.prob(food(2), food(0)), 0.25);
        assert!((c.prob(food(0), food(1)) - 0.6).abs() < 1e-15);
        assert!((c.prob(food(1), food(2)) - 0.95).abs() < 1e-15);
        assert!(TParams::new(1.5, 0.0, 0.0).is_err());
    }

    #[test]
    fn symmetric_family_members() {
        assert_eq!(symmetric_chooser(0.0).unwrap(), ChooserStrategy::uniform());
        let one = symmetric_chooser(1.0).unwrap();
        assert_eq!(one.prob(food(2), food(0)), 1.0);
        assert_eq!(one.prob(food(0), food(1)), 1.0);
        assert_eq!(one.prob(food(1), food(2)), 1.0);
        let half = symmetric_chooser(0.5).unwrap();
        let mut values: Vec<f64> = half
            .conditional_table()
            .iter()
            .flatten()
            .copied()
            .filter(|&v| v != 0.0)
            .collect();
        values.sort_by(f64::total_cmp);
        assert_eq!(values, vec![0.25, 0.25, 0.25, 0.75, 0.75, 0.75]);
        assert!(symmetric_chooser(-1.01).is_err());
    }

    #[test]
    fn classify_examples() {
        let (rel, class) = classify_preferences(&symmetric_chooser(0.5).unwrap(), 0.0).unwrap();
        assert_eq!(class, PreferenceClass::IntransitiveCycleCondition1);
        assert!(rel.prefers(food(1), food(0)));
        assert!(rel.prefers(food(0), food(2)));
        assert!(rel.prefers(food(2), food(1)));

        let (_, class) = classify_preferences(&symmetric_chooser(-0.5).unwrap(), 0.0).unwrap();
        assert_eq!(class, PreferenceClass::IntransitiveCycleCondition2);

        // c[1|2] = 0.9, c[2|0] = 0.9, c[2|1] = 0.9
        let ch = make_chooser(0.1, 0.1, 0.9).unwrap();
        let (_, class) = classify_preferences(&ch, 0.0).unwrap();
        assert_eq!(
            class,
            PreferenceClass::TransitiveStrict {
                order: [food(2), food(1), food(0)]
            }
        );

        let (_, class) = classify_preferences(&ChooserStrategy::uniform(), 0.0).unwrap();
        assert_eq!(class, PreferenceClass::IntransitiveIndifference);
    }

    #[test]
    fn classify_partial_ties() {
        let ch = from_t_params(TParams::new(0.0, 0.5, 0.5).unwrap());
        let (_, class) = classify_preferences(&ch, 0.0).unwrap();
        assert_eq!(class, PreferenceClass::PartiallyTied);
        // A tolerance wider than every gap ties everything.
        let ch = from_t_params(TParams::new(0.01, -0.02, 0.03).unwrap());
        let (_, class) = classify_preferences(&ch, 0.05).unwrap();
        assert_eq!(class, PreferenceClass::IntransitiveIndifference);
        assert!(classify_preferences(&ch, 1.0).is_err());
        assert!(classify_preferences(&ch, -0.1).is_err());
    }

    #[test]
    fn permutation_examples() {
        let cutter = make_cutter(1.0, 0.0, 0.0).unwrap();
        let chooser = make_chooser(0.3, 0.6, 0.2).unwrap();
        let (c2, ch2) = permute_foods(&cutter, &chooser, Permutation::IDENTITY);
        assert_eq!((c2, ch2), (cutter, chooser));

        let (c2, _) = permute_foods_raw(&cutter, &chooser, [1, 0, 2]).unwrap();
        assert_eq!(c2.probabilities(), [0.0, 1.0, 0.0]);

        let sym = symmetric_chooser(0.37).unwrap();
        let (_, sym2) = permute_foods_raw(&cutter, &sym, [1, 2, 0]).unwrap();
        assert_eq!(sym2, sym);

        assert!(matches!(
            permute_foods_raw(&cutter, &chooser, [0, 0, 2]),
            Err(Error::InvalidPermutation(_))
        ));
        assert!(Permutation::new([0, 1, 3]).is_err());
    }

    #[test]
    fn permuted_conditionals_follow_relabelling() {
        let cutter = CutterStrategy::uniform();
        let chooser = make_chooser(0.3, 0.6, 0.2).unwrap();
        for perm in Permutation::all() {
            let (_, moved) = permute_foods(&cutter, &chooser, perm);
            for k in FoodIndex::ALL {
                for j in FoodIndex::ALL {
                    assert_eq!(
                        moved.prob(perm.apply(k), perm.apply(j)),
                        chooser.prob(k, j),
                        "{perm:?} k={k} j={j}"
                    );
                }
            }
        }
    }

    #[test]
    fn parity() {
        let even: Vec<bool> = Permutation::all().iter().map(|p| p.is_even()).collect();
        assert_eq!(even, vec![true, true, true, false, false, false]);
        for p in Permutation::all() {
            let inv = p.inverse();
            for f in FoodIndex::ALL {
                assert_eq!(inv.apply(p.apply(f)), f);
            }
        }
    }

    #[test]
    fn serde_rejects_invalid_values() {
        assert!(serde_json::from_str::<CutterStrategy>("[0.5,0.5,0.5]").is_err());
        assert!(serde_json::from_str::<ChooserStrategy>("[2.0,0.0,0.0]").is_err());
        assert!(serde_json::from_str::<FoodIndex>("3").is_err());
        let c: ChooserStrategy = serde_json::from_str("[0.5,0.5,0.5]").unwrap();
        assert_eq!(c, symmetric_chooser(0.5).unwrap());
    }
}
