//! Subspace lattice against explicit vector sets.

mod common;

use common::*;
use phan_core::linalg::{
    enumerate_subspaces, gaussian_binomial, is_opposite, is_transversal, Flag, Subspace,
};
use phan_core::verify::{random_flag, random_subspace, random_vector};
use phan_core::{Fe, Field};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn fields() -> Vec<Field> {
    vec![
        Field::new(2, 1, 1).unwrap(),
        Field::new(3, 1, 1).unwrap(),
        Field::new(2, 2, 1).unwrap(),
        Field::new(5, 1, 1).unwrap(),
    ]
}

#[test]
fn enumeration_counts_match_gaussian_binomials() {
    for f in fields() {
        for n in 1..=4 {
            for k in 0..=n {
                let subs = enumerate_subspaces(&f, n, k);
                let expected = gaussian_binomial(f.order() as u128, n as u32, k as u32);
                assert_eq!(subs.len() as u128, expected, "q={} n={n} k={k}", f.order());
                assert!(subs.windows(2).all(|w| w[0] < w[1]), "sorted and distinct");
                assert!(subs.iter().all(|s| s.dim() == k));
            }
        }
    }
}

#[test]
fn enumeration_agrees_with_closure_of_points() {
    for (f, n) in [
        (Field::new(2, 1, 1).unwrap(), 4),
        (Field::new(3, 1, 1).unwrap(), 3),
        (Field::new(2, 2, 1).unwrap(), 3),
    ] {
        let brute = all_proper_subspaces(&f, n);
        let mut listed: Vec<Subspace> =
            (1..n).flat_map(|k| enumerate_subspaces(&f, n, k)).collect();
        listed.sort();
        assert_eq!(brute, listed, "q={} n={n}", f.order());
    }
}

fn opposite_by_sets(f: &Field, a: &Subspace, c: &Subspace, n: usize) -> bool {
    let (ea, ec) = (elements(f, a), elements(f, c));
    ea.intersection(&ec).count() == 1 && ea.len() * ec.len() == f.order().pow(n as u32)
}

/// Incident with every member: contained in it or containing it.
fn incident_by_sets(f: &Field, flag: &Flag, c: &Subspace) -> bool {
    let ec = elements(f, c);
    flag.members().iter().all(|v| {
        let ev = elements(f, v);
        ec.is_subset(&ev) || ev.is_subset(&ec)
    })
}

#[test]
fn transversal_iff_opposite_to_some_incident_subspace() {
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    let cases = [
        (Field::new(2, 1, 1).unwrap(), 3, 3),
        (Field::new(3, 1, 1).unwrap(), 3, 3),
        (Field::new(2, 2, 2).unwrap(), 3, 2),
        (Field::new(2, 1, 1).unwrap(), 4, 3),
        (Field::new(3, 1, 1).unwrap(), 4, 1),
    ];
    for (f, n, flags) in cases {
        let all: Vec<Subspace> = (1..n).flat_map(|k| enumerate_subspaces(&f, n, k)).collect();
        for _ in 0..flags {
            for t in 1..n {
                let flag = random_flag(&f, n, t, &mut rng).unwrap();
                let incident: Vec<&Subspace> = all
                    .iter()
                    .filter(|c| incident_by_sets(&f, &flag, c))
                    .collect();
                for a in &all {
                    let oracle = incident.iter().any(|c| opposite_by_sets(&f, a, c, n));
                    assert_eq!(
                        is_transversal(&f, a, &flag).unwrap(),
                        oracle,
                        "q={} n={n} a={a:?}",
                        f.order()
                    );
                }
            }
        }
    }
}

#[test]
fn opposite_matches_sets() {
    let f = Field::new(3, 1, 1).unwrap();
    let all: Vec<Subspace> = (1..3).flat_map(|k| enumerate_subspaces(&f, 3, k)).collect();
    for a in &all {
        for c in &all {
            assert_eq!(
                is_opposite(&f, a, c).unwrap(),
                opposite_by_sets(&f, a, c, 3)
            );
        }
    }
}

fn arb_case() -> impl Strategy<Value = (usize, usize, u64)> {
    (0usize..4, 2usize..=5, any::<u64>())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn modular_law_and_meet_by_sets((fi, n, seed) in arb_case()) {
        let f = &fields()[fi];
        let n = if f.order() > 3 { n.min(4) } else { n };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let full = Subspace::full(n);
        let da = seed as usize % (n + 1);
        let db = (seed >> 8) as usize % (n + 1);
        let a = random_subspace(f, &full, da, &mut rng).unwrap();
        let b = random_subspace(f, &full, db, &mut rng).unwrap();
        let sum = a.sum(f, &b).unwrap();
        let meet = a.intersect(f, &b).unwrap();
        prop_assert_eq!(a.dim() + b.dim(), sum.dim() + meet.dim());
        let ea = elements(f, &a);
        let eb = elements(f, &b);
        let em: VecSet = ea.intersection(&eb).cloned().collect();
        prop_assert_eq!(em, elements(f, &meet));
        prop_assert!(a.is_subspace_of(f, &sum) && meet.is_subspace_of(f, &b));
    }

    #[test]
    fn span_of_any_basis_is_canonical((fi, n, seed) in arb_case()) {
        let f = &fields()[fi];
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let full = Subspace::full(n);
        let a = random_subspace(f, &full, seed as usize % (n + 1), &mut rng).unwrap();
        // random spanning multiset: the basis mixed by random combinations
        let mut vs: Vec<Vec<Fe>> = Vec::new();
        for _ in 0..a.dim() + 2 {
            let c = random_vector(f, a.dim(), &mut rng);
            vs.push(a.vector_from_coordinates(f, &c));
        }
        vs.extend(a.basis().iter().rev().cloned());
        let b = Subspace::span(f, n, &vs).unwrap();
        prop_assert_eq!(&a, &b);
        for v in &vs {
            prop_assert!(a.contains_vector(f, v));
        }
    }
}
