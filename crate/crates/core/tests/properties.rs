use proptest::prelude::*;

use cut_choose::diet::{diet_profile, fairness_residual};
use cut_choose::solver::{residual_system, solve_chooser_given_cutter};
use cut_choose::simulator::{round_at, simulate, simulate_batch_sequential, simulate_logged, RngSeed};
use cut_choose::strategy::{
    classify_preferences, from_t_params, permute_foods, symmetric_chooser, to_t_params,
    ChooserStrategy, CutterStrategy, FoodIndex, Permutation, PreferenceClass, TParams,
};

fn cutter() -> impl Strategy<Value = CutterStrategy> {
    (0.0..1.0f64, 0.0..1.0f64, 0.0..1.0f64)
        .prop_filter("nonzero mass", |(a, b, c)| a + b + c > 1e-6)
        .prop_map(|(a, b, c)| {
            let s = a + b + c;
            CutterStrategy::new(a / s, b / s, c / s).unwrap()
        })
}

fn chooser() -> impl Strategy<Value = ChooserStrategy> {
    (0.0..=1.0f64, 0.0..=1.0f64, 0.0..=1.0f64)
        .prop_map(|(a, b, c)| ChooserStrategy::new(a, b, c).unwrap())
}

fn t_params() -> impl Strategy<Value = TParams> {
    (-1.0..=1.0f64, -1.0..=1.0f64, -1.0..=1.0f64).prop_map(|(a, b, c)| TParams::new(a, b, c).unwrap())
}

fn permutation() -> impl Strategy<Value = Permutation> {
    (0..6usize).prop_map(|i| Permutation::all()[i])
}

fn relabel(class: PreferenceClass, perm: Permutation) -> PreferenceClass {
    match class {
        PreferenceClass::TransitiveStrict { order } => PreferenceClass::TransitiveStrict {
            order: order.map(|f| perm.apply(f)),
        },
        PreferenceClass::IntransitiveCycleCondition1 if !perm.is_even() => {
            PreferenceClass::IntransitiveCycleCondition2
        }
        PreferenceClass::IntransitiveCycleCondition2 if !perm.is_even() => {
            PreferenceClass::IntransitiveCycleCondition1
        }
        other => other,
    }
}

proptest! {
    #[test]
    fn pairwise_normalization_is_exact(t in t_params()) {
        let ch = from_t_params(t);
        for j in FoodIndex::ALL {
            let (a, b) = (FoodIndex::ALL[(j.index() + 1) % 3], FoodIndex::ALL[(j.index() + 2) % 3]);
            prop_assert_eq!(ch.prob(a, j) + ch.prob(b, j), 1.0);
        }
    }

    #[test]
    fn t_round_trip_is_exact(ch in chooser(), t in t_params()) {
        prop_assert_eq!(from_t_params(to_t_params(&ch)), ch);
        prop_assert_eq!(to_t_params(&from_t_params(t)), t);
    }

    #[test]
    fn cutter_sums_to_exactly_one(a in 0.0..1.0f64, frac in 0.0..1.0f64, noise in -9e-13..9e-13f64) {
        let b = (1.0 - a) * frac;
        let c = (1.0 - a - b).max(0.0);
        if let Ok(cutter) = CutterStrategy::new(a, b, c + noise.max(-c)) {
            let p = cutter.probabilities();
            prop_assert_eq!(p[0] + p[1] + p[2], 1.0);
            prop_assert!(p.iter().all(|&v| (0.0..=1.0).contains(&v)));
        }
    }

    #[test]
    fn diet_conservation(cutter in cutter(), ch in chooser()) {
        let d = diet_profile(&cutter, &ch);
        let p = cutter.probabilities();
        prop_assert!((d.lambda.iter().sum::<f64>() - 1.0).abs() <= 1e-12);
        prop_assert!((d.omega.iter().sum::<f64>() - 1.0).abs() <= 1e-12);
        for ((&l, &o), &pj) in d.lambda.iter().zip(&d.omega).zip(&p) {
            prop_assert!((l + o - (1.0 - pj)).abs() <= 1e-12);
            prop_assert!((0.0..=1.0 + 1e-15).contains(&l));
            prop_assert!((0.0..=1.0 + 1e-15).contains(&o));
        }
    }

    #[test]
    fn diet_is_linear_in_the_cutter(a in cutter(), b in cutter(), ch in chooser(), w in 0.0..=1.0f64) {
        let (pa, pb) = (a.probabilities(), b.probabilities());
        let mix: Vec<f64> = (0..3).map(|i| w * pa[i] + (1.0 - w) * pb[i]).collect();
        let Ok(m) = CutterStrategy::new(mix[0], mix[1], mix[2]) else { return Ok(()) };
        let (da, db, dm) = (diet_profile(&a, &ch), diet_profile(&b, &ch), diet_profile(&m, &ch));
        for k in 0..3 {
            prop_assert!((dm.lambda[k] - (w * da.lambda[k] + (1.0 - w) * db.lambda[k])).abs() < 1e-12);
            prop_assert!((dm.omega[k] - (w * da.omega[k] + (1.0 - w) * db.omega[k])).abs() < 1e-12);
        }
    }

    #[test]
    fn diet_is_linear_in_each_conditional(cutter in cutter(), t in t_params(), axis in 0..3usize,
                                          lo in -1.0..=1.0f64, hi in -1.0..=1.0f64, w in 0.0..=1.0f64) {
        let with = |v: f64| {
            let mut vals = t.values();
            vals[axis] = v;
            diet_profile(&cutter, &from_t_params(TParams::new(vals[0], vals[1], vals[2]).unwrap()))
        };
        let mid = (w * lo + (1.0 - w) * hi).clamp(-1.0, 1.0);
        let (dl, dh, dm) = (with(lo), with(hi), with(mid));
        for k in 0..3 {
            prop_assert!((dm.lambda[k] - (w * dl.lambda[k] + (1.0 - w) * dh.lambda[k])).abs() < 1e-12);
            prop_assert!((dm.omega[k] - (w * dl.omega[k] + (1.0 - w) * dh.omega[k])).abs() < 1e-12);
        }
    }

    #[test]
    fn residual_system_is_twice_the_fairness_residual(cutter in cutter(), t in t_params()) {
        let r = residual_system(&cutter, &t);
        let f = fairness_residual(&diet_profile(&cutter, &from_t_params(t)), 0.0);
        for k in 0..3 {
            prop_assert!((r.cutter_eqs[k] - 2.0 * f.lambda_residuals[k]).abs() < 1e-12);
            prop_assert!((r.chooser_eqs[k] - 2.0 * f.omega_residuals[k]).abs() < 1e-12);
        }
        prop_assert!(r.cutter_sum().abs() < 1e-12);
        prop_assert!(r.chooser_sum().abs() < 1e-12);
    }

    #[test]
    fn diet_equivariance(cutter in cutter(), ch in chooser(), perm in permutation()) {
        let base = diet_profile(&cutter, &ch);
        let (c2, ch2) = permute_foods(&cutter, &ch, perm);
        let moved = diet_profile(&c2, &ch2);
        for k in FoodIndex::ALL {
            prop_assert_eq!(moved.lambda[perm.apply(k).index()], base.lambda[k.index()]);
            prop_assert_eq!(moved.omega[perm.apply(k).index()], base.omega[k.index()]);
        }
    }

    #[test]
    fn classification_follows_relabelling(cutter in cutter(), ch in chooser(), perm in permutation()) {
        let (_, class) = classify_preferences(&ch, 0.0).unwrap();
        let (_, ch2) = permute_foods(&cutter, &ch, perm);
        let (_, moved) = classify_preferences(&ch2, 0.0).unwrap();
        prop_assert_eq!(moved, relabel(class, perm));
    }

    #[test]
    fn symmetric_family_classes(t in -1.0..=1.0f64) {
        let (_, class) = classify_preferences(&symmetric_chooser(t).unwrap(), 0.0).unwrap();
        let expected = if t > 0.0 {
            PreferenceClass::IntransitiveCycleCondition1
        } else if t < 0.0 {
            PreferenceClass::IntransitiveCycleCondition2
        } else {
            PreferenceClass::IntransitiveIndifference
        };
        prop_assert_eq!(class, expected);
    }

    #[test]
    fn symmetric_family_is_fair_and_rotation_invariant(t in -1.0..=1.0f64) {
        let ch = symmetric_chooser(t).unwrap();
        let u = CutterStrategy::uniform();
        prop_assert!(residual_system(&u, &ch.t_params()).max_abs() <= 1e-12);
        let (_, rotated) = permute_foods(&u, &ch, Permutation::new([1, 2, 0]).unwrap());
        prop_assert_eq!(rotated, ch);
    }

    #[test]
    fn certificate_bounds_every_chooser(cutter in cutter(), ch in chooser()) {
        if let Some(cert) = solve_chooser_given_cutter(&cutter, 0.0).certificate() {
            let best = fairness_residual(&diet_profile(&cutter, &ch), 0.0).max_abs_residual;
            prop_assert!(cert > 0.0);
            prop_assert!(best >= cert - 1e-15);
        }
    }

    #[test]
    fn ties_need_a_wide_enough_tolerance(t in t_params(), eps in 0.0..0.99f64) {
        let ch = from_t_params(t);
        let (rel, class) = classify_preferences(&ch, eps).unwrap();
        // Gap between the two conditionals of pair j is |t_j|.
        let tied = t.values().iter().filter(|v| v.abs() <= eps).count();
        let tie_verdicts = rel.verdicts.iter().filter(|v| **v == cut_choose::Verdict::Tie).count();
        prop_assert_eq!(tied, tie_verdicts);
        match tied {
            0 => prop_assert!(class != PreferenceClass::PartiallyTied && class != PreferenceClass::IntransitiveIndifference),
            3 => prop_assert_eq!(class, PreferenceClass::IntransitiveIndifference),
            _ => prop_assert_eq!(class, PreferenceClass::PartiallyTied),
        }
    }

    #[test]
    fn simulation_is_reproducible_and_consistent(cutter in cutter(), ch in chooser(),
                                                 seed in any::<u64>(), n in 1..400u64) {
        let seed = RngSeed(seed);
        let a = simulate(&cutter, &ch, n, seed);
        let (b, log) = simulate_logged(&cutter, &ch, n, seed);
        prop_assert_eq!(&a, &b);
        for k in 0..3 {
            // Every round removes each food exactly once.
            prop_assert_eq!(a.counts_rejected[k] + a.counts_lambda[k] + a.counts_omega[k], n);
        }
        for r in &log {
            prop_assert_eq!(r.leftover, r.rejected.third(r.chosen));
        }
        let i = n / 2;
        prop_assert_eq!(round_at(&cutter, &ch, seed, i), log[i as usize]);
    }

    #[test]
    fn batch_matches_single_runs(cutter in cutter(), ch in chooser(), seeds in prop::collection::vec(any::<u64>(), 1..5)) {
        let seeds: Vec<RngSeed> = seeds.into_iter().map(RngSeed).collect();
        let batch = simulate_batch_sequential(&cutter, &ch, 50, &seeds);
        for (run, &seed) in batch.iter().zip(&seeds) {
            prop_assert_eq!(run, &simulate(&cutter, &ch, 50, seed));
        }
        #[cfg(feature = "parallel")]
        prop_assert_eq!(cut_choose::simulator::simulate_batch_parallel(&cutter, &ch, 50, &seeds), batch);
    }

    #[test]
    fn strategies_survive_json(cutter in cutter(), ch in chooser()) {
        let c: CutterStrategy = serde_json::from_str(&serde_json::to_string(&cutter).unwrap()).unwrap();
        let h: ChooserStrategy = serde_json::from_str(&serde_json::to_string(&ch).unwrap()).unwrap();
        prop_assert_eq!(c, cutter);
        prop_assert_eq!(h, ch);
    }
}
