mod common;

use std::collections::BTreeSet;
use std::sync::Arc;

use cagekit::gf::{prime_power, FieldElement, FiniteField};
use cagekit::graph::{SimpleGraph, VertexLabel};
use cagekit::incidence::build_bq;
use cagekit::io::{from_graph6, to_graph6};
use cagekit::surgery::{
    amalgam, apply_reduction, check_amalgam_hypotheses, predict_degrees, AmalgamPlan, OverlayGraph, OverlayRole,
    ReductionMode, ReductionSpec,
};
use cagekit::verify::girth;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn small_orders() -> Vec<u32> {
    (2..=64).filter(|&q| prime_power(q).is_some()).collect()
}

fn arb_graph(max_n: usize) -> impl Strategy<Value = SimpleGraph> {
    (1..=max_n).prop_flat_map(|n| {
        let pairs = n * (n - 1) / 2;
        proptest::collection::vec(any::<bool>(), pairs).prop_map(move |bits| {
            let mut edges = Vec::new();
            let mut k = 0;
            for j in 1..n {
                for i in 0..j {
                    if bits[k] {
                        edges.push((i, j));
                    }
                    k += 1;
                }
            }
            SimpleGraph::from_edges(n, edges).unwrap()
        })
    })
}

proptest! {
    #[test]
    fn field_axioms_on_samples(qi in 0usize..100, a in 0u32..64, b in 0u32..64, c in 0u32..64) {
        let orders = small_orders();
        let q = orders[qi % orders.len()];
        let f = FiniteField::with_order(q).unwrap();
        let (a, b, c) = (f.element(a % q).unwrap(), f.element(b % q).unwrap(), f.element(c % q).unwrap());
        prop_assert_eq!(f.add(a, f.add(b, c)), f.add(f.add(a, b), c));
        prop_assert_eq!(f.mul(a, f.mul(b, c)), f.mul(f.mul(a, b), c));
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.add(a, f.neg(a)), f.zero());
        prop_assert_eq!(f.sub(f.add(a, b), b), a);
        if !a.is_zero() {
            prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), f.one());
            prop_assert_eq!(f.pow_alpha(f.log_alpha(a).unwrap() as i64), a);
        }
    }

    #[test]
    fn handshake(g in arb_graph(30)) {
        let total: usize = (0..g.order()).map(|v| g.degree(v)).sum();
        prop_assert_eq!(total, 2 * g.size());
    }

    #[test]
    fn graph6_round_trip(g in arb_graph(70)) {
        let g6 = to_graph6(&g);
        let back = from_graph6(&g6).unwrap();
        prop_assert_eq!(&back, &g);
        prop_assert_eq!(to_graph6(&back), g6);
    }

    #[test]
    fn deleting_vertices_drops_degrees(q in prop::sample::select(vec![3u32, 4, 5]), picks in proptest::collection::vec(0usize..50, 0..8)) {
        let g = build_bq(Arc::new(FiniteField::with_order(q).unwrap()));
        let labels = g.labels();
        let remove: BTreeSet<VertexLabel> = picks.iter().map(|&i| labels[i % labels.len()]).collect();
        let h = g.delete_vertices(&remove).unwrap();
        prop_assert_eq!(h.order(), g.order() - remove.len());
        for v in h.labels() {
            let lost = g.neighbors(v).unwrap().iter().filter(|w| remove.contains(w)).count();
            prop_assert_eq!(h.degree(v).unwrap(), g.degree(v).unwrap() - lost);
        }
    }
}

/// Greedy random overlay of girth at least 5 on `labels`.
fn random_overlay(rng: &mut ChaCha8Rng, role: OverlayRole, labels: &BTreeSet<FieldElement>) -> OverlayGraph {
    let pool: Vec<FieldElement> = labels.iter().copied().collect();
    let mut pairs: Vec<(FieldElement, FieldElement)> = Vec::new();
    for (i, &u) in pool.iter().enumerate() {
        for &v in &pool[i + 1..] {
            pairs.push((u, v));
        }
    }
    pairs.shuffle(rng);
    let target = rng.gen_range(0..=pool.len());
    let mut edges = Vec::new();
    let mut current = OverlayGraph::empty(role, labels.clone());
    for p in pairs {
        if edges.len() >= target {
            break;
        }
        edges.push(p);
        match OverlayGraph::new(role, labels.clone(), edges.iter().copied()) {
            Ok(o) => current = o,
            Err(_) => {
                edges.pop();
            }
        }
    }
    current
}

fn random_subset(rng: &mut ChaCha8Rng, from: &BTreeSet<FieldElement>, max: usize) -> BTreeSet<FieldElement> {
    let pool: Vec<FieldElement> = from.iter().copied().collect();
    let k = rng.gen_range(0..=max.min(pool.len()));
    pool.choose_multiple(rng, k).copied().collect()
}

struct Trial {
    spec: ReductionSpec,
    plan: AmalgamPlan,
    field: Arc<FiniteField>,
}

fn random_trial(seed: u64) -> Trial {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let q = *[5u32, 7, 8, 9].choose(&mut rng).unwrap();
    let field = Arc::new(FiniteField::with_order(q).unwrap());
    let all: BTreeSet<FieldElement> = field.elements().collect();
    let s = random_subset(&mut rng, &all, 2);
    let t = random_subset(&mut rng, &s, 2);
    let transversal = rng.gen_bool(0.3);
    let (spec, mode) = if transversal {
        (
            ReductionSpec::transversal(s.clone(), t.clone()),
            ReductionMode::Transversal,
        )
    } else {
        let u1 = rng.gen_range(0..=1);
        let u0 = rng.gen_range(0..=u1);
        (
            ReductionSpec::standard(s.clone(), t.clone(), u0, u1),
            ReductionMode::Standard,
        )
    };
    let minus = |x: &BTreeSet<FieldElement>| all.difference(x).copied().collect::<BTreeSet<_>>();
    let h1 = random_overlay(&mut rng, OverlayRole::H1, &minus(&s));
    let h2 = random_overlay(&mut rng, OverlayRole::H2, &minus(&t));
    let g1 = random_overlay(&mut rng, OverlayRole::G1, &all);
    let g2 = (!transversal).then(|| random_overlay(&mut rng, OverlayRole::G2, &all));
    let plan = AmalgamPlan { mode, h1, h2, g1, g2 };
    Trial { spec, plan, field }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    /// Whenever the hypotheses hold, the amalgam has girth at least 5.
    /// Degree prediction and order hold for every plan.
    #[test]
    fn amalgam_hypotheses_are_sufficient(seed in any::<u64>()) {
        let Trial { spec, plan, field } = random_trial(seed);
        let reduced = apply_reduction(&build_bq(Arc::clone(&field)), &spec).unwrap();
        prop_assert_eq!(reduced.order(), spec.reduced_order(field.order()));
        let g = amalgam(&reduced, &plan).unwrap();
        let predicted = predict_degrees(&reduced, &plan, &spec);
        prop_assert_eq!(predicted.len(), g.order());
        for (v, d) in &predicted {
            prop_assert_eq!(g.degree(v).unwrap(), *d, "vertex {}", v);
        }
        let report = check_amalgam_hypotheses(&plan, &field).unwrap();
        if report.passed() {
            let found = girth(g.graph()).length();
            prop_assert!(found.is_none_or(|len| len >= 5), "girth {:?} with {:?}", found, report);
        }
    }
}

#[test]
fn random_plans_exercise_both_outcomes() {
    let mut passed = 0;
    for seed in 0..200 {
        let Trial { plan, field, spec } = random_trial(seed);
        if check_amalgam_hypotheses(&plan, &field).unwrap().passed() {
            passed += 1;
            let reduced = apply_reduction(&build_bq(Arc::clone(&field)), &spec).unwrap();
            let g = amalgam(&reduced, &plan).unwrap();
            assert!(girth(g.graph()).length().is_none_or(|len| len >= 5), "seed {seed}");
        }
    }
    println!("{passed}/200 plans satisfy the hypotheses");
    assert!((20..=180).contains(&passed), "{passed}/200");
}
