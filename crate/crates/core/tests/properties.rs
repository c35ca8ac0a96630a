mod common;

use std::collections::HashSet;

use abshift::entropy::{bowen_lower_moran, bowen_upper};
use abshift::generic::{
    auto_schedule, build_gamma_on, count_prefixes, expand_schedule, generic_prefix, moran_levels, MoranTree,
    ScheduleOptions, Selector,
};
use abshift::measures::{parry_measure, periodic_measure, weak_star_distance, Component, MixtureMeasure};
use abshift::{CylinderMeasure, Diagram, MarkovMeasure, Params, Word};
use num_rational::BigRational;
use proptest::prelude::*;

use common::{oracle_language, q};

/// Rational `(α, β)` with `0 ≤ α < 1` and `2 < β ≤ 7/2`.
fn rational_params() -> impl Strategy<Value = (i64, i64, i64, i64)> {
    (0i64..12, 13i64..24).prop_flat_map(|(a, aq)| (Just(a), Just(aq), 41i64..71, Just(20i64)))
}

fn point(p: &Params, num: i64, den: i64) -> abshift::Real {
    p.parse_point(&format!("{}/{}", num, den)).unwrap()
}

fn words(k: u8, n: usize) -> Vec<Vec<u8>> {
    (0..n).fold(vec![Vec::new()], |acc, _| {
        acc.into_iter()
            .flat_map(|w| {
                (1..=k).map(move |a| {
                    let mut u = w.clone();
                    u.push(a);
                    u
                })
            })
            .collect()
    })
}

/// Random stochastic matrix on the base vertices supported on the arrows
/// `[1]→[3]` and `[2],[3] → everything`.
fn base_chain() -> impl Strategy<Value = Vec<Vec<f64>>> {
    prop::collection::vec(0.01f64..1.0, 6).prop_map(|r| {
        let norm = |a: f64, b: f64, c: f64| {
            let s = a + b + c;
            vec![a / s, b / s, c / s]
        };
        vec![vec![0.0, 0.0, 1.0], norm(r[0], r[1], r[2]), norm(r[3], r[4], r[5])]
    })
}

fn pool(d: &Diagram) -> Vec<Component> {
    let mut v: Vec<Component> = ["2", "3", "23", "13", "1323"]
        .iter()
        .map(|c| periodic_measure(&c.parse().unwrap(), d).unwrap().into())
        .collect();
    v.push(parry_measure(&[0, 1, 2], d).unwrap().into());
    v.push(parry_measure(&[1, 2], d).unwrap().into());
    v
}

fn mixture(pool: &[Component], picks: &[(usize, f64)]) -> MixtureMeasure {
    let total: f64 = picks.iter().map(|p| p.1).sum();
    let mut parts: Vec<(f64, Component)> = picks.iter().map(|&(i, w)| (w / total, pool[i % pool.len()].clone())).collect();
    let rest: f64 = parts[1..].iter().map(|p| p.0).sum();
    parts[0].0 = 1.0 - rest;
    MixtureMeasure::new(parts).unwrap()
}

fn picks() -> impl Strategy<Value = Vec<(usize, f64)>> {
    prop::collection::vec((0usize..7, 0.05f64..1.0), 1..4)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn map_agrees_with_its_branch((ap, aq, bp, bq) in rational_params(), num in 1i64..997) {
        let p = Params::rational(ap, aq, bp, bq).unwrap();
        let x = point(&p, num, 997);
        if let Ok(j) = p.branch_index(&x) {
            prop_assert_eq!(p.apply_map(&x), p.branch_affine(j, &x));
        }
    }

    #[test]
    fn partition_tiles_the_unit_interval((ap, aq, bp, bq) in rational_params()) {
        let p = Params::rational(ap, aq, bp, bq).unwrap();
        let parts = p.partition();
        prop_assert_eq!(parts.len(), p.k());
        prop_assert_eq!(parts[0].lo.clone(), p.int(0));
        prop_assert_eq!(parts[parts.len() - 1].hi.clone(), p.int(1));
        for w in parts.windows(2) {
            prop_assert_eq!(w[0].hi.clone(), w[1].lo.clone());
        }
    }

    #[test]
    fn itineraries_concatenate((ap, aq, bp, bq) in rational_params(), num in 1i64..1009, a in 1usize..6, b in 1usize..6) {
        let p = Params::rational(ap, aq, bp, bq).unwrap();
        let x = point(&p, num, 1009);
        if let Ok(whole) = p.itinerary(&x, a + b) {
            let head = p.itinerary(&x, a).unwrap();
            let mut y = x.clone();
            for _ in 0..a {
                y = p.apply_map(&y);
            }
            let tail = p.itinerary(&y, b).unwrap();
            prop_assert_eq!(whole, head.concat(&tail));
        }
    }

    #[test]
    fn language_matches_cylinder_oracle((ap, aq, bp, bq) in rational_params()) {
        let p = Params::rational(ap, aq, bp, bq).unwrap();
        let d = Diagram::build(&p, 6).unwrap();
        let (alpha, beta): (BigRational, BigRational) = (q(ap, aq), q(bp, bq));
        for n in 1..=6 {
            let lang: Vec<Word> = d.language(n).unwrap().into_iter().collect();
            prop_assert_eq!(lang, oracle_language(&alpha, &beta, p.k(), n));
        }
    }

    #[test]
    fn diagram_invariants((ap, aq, bp, bq) in rational_params()) {
        let p = Params::rational(ap, aq, bp, bq).unwrap();
        let d = Diagram::build(&p, 8).unwrap();
        prop_assert!(d.has_self_loop_two());
        for v in d.vertices() {
            prop_assert!(p.interval_within(&v.interval, p.interval(v.label)));
            prop_assert!(d.arrows(v.id).len() <= p.k());
            let labels: HashSet<u8> = d.arrows(v.id).iter().map(|&u| d.label(u)).collect();
            prop_assert_eq!(labels.len(), d.arrows(v.id).len());
        }
        let counts: Vec<u128> = (0..=8).map(|n| d.language_count(n).unwrap()).collect();
        for m in 1..=4 {
            for n in 1..=4 {
                prop_assert!(counts[m + n] <= counts[m] * counts[n]);
            }
        }
    }

    #[test]
    fn markov_measures_are_shift_invariant(p in base_chain()) {
        let d = common::diagram(6);
        let m = MarkovMeasure::new(vec![0, 1, 2], p, &d).unwrap();
        for n in 0..=4 {
            for w in words(3, n) {
                let mass = m.mass(&w);
                let right: f64 = (1..=3u8).map(|a| m.mass(&[w.as_slice(), &[a]].concat())).sum();
                let left: f64 = (1..=3u8).map(|a| m.mass(&[&[a], w.as_slice()].concat())).sum();
                prop_assert!((right - mass).abs() < 1e-12);
                prop_assert!((left - mass).abs() < 1e-12);
            }
        }
        let total: f64 = d.language(6).unwrap().iter().map(|w| m.mass(w.symbols())).sum();
        prop_assert!((total - 1.0).abs() < 1e-9);
    }

    #[test]
    fn parry_maximizes_entropy(p in base_chain()) {
        let d = common::diagram(6);
        let m = MarkovMeasure::new(vec![0, 1, 2], p, &d).unwrap();
        prop_assert!(m.entropy_rate() <= (1.0 + 2f64.sqrt()).ln() + 1e-12);
    }

    #[test]
    fn mixtures_are_consistent(a in picks()) {
        let d = common::diagram(8);
        let m = mixture(&pool(&d), &a);
        for n in 0..=4 {
            for w in words(3, n) {
                let right: f64 = (1..=3u8).map(|s| m.mass(&[w.as_slice(), &[s]].concat())).sum();
                let left: f64 = (1..=3u8).map(|s| m.mass(&[&[s], w.as_slice()].concat())).sum();
                prop_assert!((right - m.mass(&w)).abs() < 1e-12);
                prop_assert!((left - m.mass(&w)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn weak_star_metric_axioms(a in picks(), b in picks(), c in picks(), depth in 1usize..6) {
        let d = common::diagram(8);
        let pool = pool(&d);
        let (x, y, z) = (mixture(&pool, &a), mixture(&pool, &b), mixture(&pool, &c));
        let dxy = weak_star_distance(&x, &y, depth);
        prop_assert_eq!(weak_star_distance(&x, &x, depth), 0.0);
        prop_assert!((dxy - weak_star_distance(&y, &x, depth)).abs() < 1e-15);
        prop_assert!(weak_star_distance(&x, &z, depth) <= dxy + weak_star_distance(&y, &z, depth) + 1e-12);
        prop_assert!(dxy <= 1.0 - 0.5f64.powi(depth as i32) + 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn schedules_hold_their_invariants(eps in 0.2f64..0.4, which in 0usize..3, seed in 0u64..1000) {
        let d = common::diagram(12);
        let mu = match which {
            0 => MixtureMeasure::single(parry_measure(&[1, 2], &d).unwrap()),
            1 => MixtureMeasure::single(periodic_measure(&"2".parse().unwrap(), &d).unwrap()),
            _ => mixture(&pool(&d), &[(6, 1.0), (0, 1.0)]),
        };
        let s = auto_schedule(&mu, eps, 2, 2, &d, &ScheduleOptions::default()).unwrap();
        for c in s.check() {
            prop_assert!(c.holds, "{} at {}: {}", c.name, c.index, c.detail);
        }
        let levels = expand_schedule(&s);
        let k = levels.len().min(12);
        let prefix = generic_prefix(&s, Selector::Random(seed), k, &d).unwrap();
        prop_assert!(prefix.is_admissible(&d));
        prop_assert_eq!(prefix.word.len(), levels[k - 1].end);

        let lower = bowen_lower_moran(&moran_levels(&s, k).unwrap(), k, 2).unwrap();
        let upper = bowen_upper(&MoranTree::new(&s, k).unwrap(), 2, 0.01).unwrap();
        prop_assert!(upper >= lower - 1e-12);
    }
}

/// `Γ` on the base vertices against a direct scan of `{1,2,3}^l`: the base
/// subgraph carries exactly the words avoiding `11` and `12`.
#[test]
fn gamma_matches_brute_force() {
    let d = common::diagram(8);
    let mu = parry_measure(&[0, 1, 2], &d).unwrap();
    let (l, depth) = (8, 2);
    for eps in [0.05, 0.1, 0.2] {
        let g = build_gamma_on(&mu, &[0, 1, 2], l, eps, depth, &d, 1 << 20).unwrap();
        let mut expected: Vec<Vec<u8>> = Vec::new();
        for w in words(3, l) {
            if w.windows(2).any(|p| p[0] == 1 && p[1] != 3) {
                continue;
            }
            let mut dist = 0.0;
            for m in 1..=depth {
                let windows = (l - m + 1) as f64;
                for u in words(3, m) {
                    let c = w.windows(m).filter(|x| *x == u.as_slice()).count() as f64;
                    dist += 0.5f64.powi(m as i32 + 1) * (mu.mass(&u) - c / windows).abs();
                }
            }
            if dist <= eps {
                expected.push(w);
            }
        }
        let mut got: Vec<Vec<u8>> = g.entries().iter().map(|e| e.word.symbols().to_vec()).collect();
        got.sort();
        assert_eq!(got, expected, "eps {}", eps);
        assert!((g.log_count() - (expected.len() as f64).ln()).abs() < 1e-12);
    }
}

/// The prefix count is the product of the level cardinalities, and random
/// prefixes never exceed it.
#[test]
fn prefix_count_is_product_of_gammas() {
    let d = common::diagram(12);
    let mu = MixtureMeasure::single(parry_measure(&[1, 2], &d).unwrap());
    let s = auto_schedule(&mu, 0.3, 1, 2, &d, &ScheduleOptions::default()).unwrap();
    let levels = expand_schedule(&s);
    for k in 1..=levels.len().min(4) {
        let c = count_prefixes(&s, k).unwrap();
        let direct: f64 = levels[..k].iter().map(|l| s.gamma(l).entries().len() as f64).product();
        assert!((c.count - direct).abs() <= 1e-6 * direct, "k = {}", k);
        assert_eq!(c.end, levels[k - 1].end);
    }
    let single = s.gamma(&levels[0]).entries().len();
    let seen: HashSet<Word> = (0..400)
        .map(|seed| {
            let p = generic_prefix(&s, Selector::Random(seed), 1, &d).unwrap();
            Word(p.word.symbols()[..levels[0].len].to_vec())
        })
        .collect();
    assert!(seen.len() <= single);
    assert!(seen.iter().all(|w| s.gamma(&levels[0]).entries().iter().any(|e| &e.word == w)));
}
