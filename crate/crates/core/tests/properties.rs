//! Property tests for norms, the hull test, the orthogonality relation and
//! the input format.

use std::collections::BTreeMap;

use bjortho::geometry::{contains_origin, HullQuery};
use bjortho::input::{InputDocument, Value};
use bjortho::oracle::{oracle_orthogonal, rng_from_seed, OracleVerdict};
use bjortho::{conjugate_exponent, criterion_for, lp, norm, Atom, Field, FunctionVec, MeasureSpace, Scalar, SpaceKind, Tolerances};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngSeed};

fn config(cases: u32) -> Config {
    Config { cases, rng_seed: RngSeed::Fixed(0xB0_0710), failure_persistence: None, ..Config::default() }
}

fn scalar(field: Field) -> BoxedStrategy<Scalar> {
    match field {
        Field::Real => (-5.0..5.0f64).prop_map(|x| Scalar::new(x, 0.0)).boxed(),
        Field::Complex => (-5.0..5.0f64, -5.0..5.0f64).prop_map(|(a, b)| Scalar::new(a, b)).boxed(),
    }
}

fn field() -> impl Strategy<Value = Field> {
    prop_oneof![Just(Field::Real), Just(Field::Complex)]
}

fn kind() -> impl Strategy<Value = SpaceKind> {
    prop_oneof![
        Just(SpaceKind::Sup),
        Just(SpaceKind::L1),
        prop::sample::select(vec![1.2, 1.5, 2.0, 3.0, 4.0, 7.0]).prop_map(|p| SpaceKind::Lp { p }),
    ]
}

/// A space with `k` functions on it.
fn setup(k: usize) -> impl Strategy<Value = (MeasureSpace, Vec<FunctionVec>)> {
    (field(), 1..=6usize).prop_flat_map(move |(field, n)| {
        let weights = prop::collection::vec(0.1..10.0f64, n);
        let funcs = prop::collection::vec(prop::collection::vec(scalar(field), n), k);
        (weights, funcs).prop_map(move |(w, fs)| {
            let space = MeasureSpace::from_weights(&w, field).unwrap();
            (space, fs.into_iter().map(|v| FunctionVec::new(v).unwrap()).collect())
        })
    })
}

fn unimodular() -> impl Strategy<Value = Scalar> {
    (0.0..std::f64::consts::TAU).prop_map(|t| Scalar::from_polar(1.0, t))
}

fn multiplier(field: Field) -> BoxedStrategy<Scalar> {
    let modulus = (0.1f64.ln()..10f64.ln()).prop_map(f64::exp);
    match field {
        Field::Real => (modulus, any::<bool>()).prop_map(|(m, s)| Scalar::new(if s { m } else { -m }, 0.0)).boxed(),
        Field::Complex => (modulus, unimodular()).prop_map(|(m, u)| u * m).boxed(),
    }
}

proptest! {
    #![proptest_config(config(256))]

    #[test]
    fn norm_is_absolutely_homogeneous((space, fs) in setup(1), k in kind(), a in multiplier(Field::Complex)) {
        let f = &fs[0];
        let a = if space.field() == Field::Real { Scalar::new(a.norm(), 0.0) } else { a };
        let lhs = norm(&space, k, &f.scale(a)).unwrap();
        let rhs = a.norm() * norm(&space, k, f).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs.max(f64::MIN_POSITIVE));
    }

    #[test]
    fn triangle_inequality((space, fs) in setup(2), k in kind()) {
        let sum = norm(&space, k, &fs[0].add(&fs[1])).unwrap();
        let parts = norm(&space, k, &fs[0]).unwrap() + norm(&space, k, &fs[1]).unwrap();
        prop_assert!(sum <= parts * (1.0 + 1e-12));
    }

    #[test]
    fn norm_is_permutation_invariant((space, fs) in setup(1), k in kind(), seed in any::<u64>()) {
        let mut perm: Vec<usize> = (0..space.len()).collect();
        use rand::seq::SliceRandom;
        perm.shuffle(&mut rng_from_seed(seed));
        let permuted = norm(&space.permuted(&perm).unwrap(), k, &fs[0].permuted(&perm)).unwrap();
        let expected = norm(&space, k, &fs[0]).unwrap();
        // Summation order changes, so allow rounding.
        prop_assert!((permuted - expected).abs() <= 1e-14 * expected.max(f64::MIN_POSITIVE));
    }

    #[test]
    fn large_p_approaches_sup(n in 1..=6usize, vals in prop::collection::vec(-5.0..5.0f64, 6)) {
        let space = MeasureSpace::uniform(n, Field::Real).unwrap();
        let f = FunctionVec::real(&vals[..n]).unwrap();
        let sup = norm(&space, SpaceKind::Sup, &f).unwrap();
        let l40 = norm(&space, SpaceKind::Lp { p: 40.0 }, &f).unwrap();
        prop_assert!((l40 - sup).abs() <= 0.05 * sup);
    }

    #[test]
    fn hull_rotation_and_scaling(
        pts in prop::collection::vec(scalar(Field::Complex), 1..=8),
        u in unimodular(),
        c in (1e-3f64.ln()..1e3f64.ln()).prop_map(f64::exp),
    ) {
        let base = contains_origin(&HullQuery::new(pts.clone(), 1e-12).unwrap()).unwrap();
        let rotated: Vec<Scalar> = pts.iter().map(|z| z * u).collect();
        let scaled: Vec<Scalar> = pts.iter().map(|z| z * c).collect();
        prop_assert_eq!(contains_origin(&HullQuery::new(rotated, 1e-12).unwrap()).unwrap(), base);
        prop_assert_eq!(contains_origin(&HullQuery::new(scaled, 1e-12).unwrap()).unwrap(), base);
    }

    #[test]
    fn hull_is_monotone(
        pts in prop::collection::vec(scalar(Field::Complex), 1..=6),
        extra in prop::collection::vec(scalar(Field::Complex), 1..=3),
    ) {
        if contains_origin(&HullQuery::new(pts.clone(), 0.0).unwrap()).unwrap() {
            let more: Vec<Scalar> = pts.into_iter().chain(extra).collect();
            prop_assert!(contains_origin(&HullQuery::new(more, 0.0).unwrap()).unwrap());
        }
    }

    #[test]
    fn relation_is_homogeneous((space, fs) in setup(2), k in kind(), a in multiplier(Field::Complex), b in multiplier(Field::Complex)) {
        let real = space.field() == Field::Real;
        let (a, b) = if real { (Scalar::new(a.re.signum() * a.norm(), 0.0), Scalar::new(b.re.signum() * b.norm(), 0.0)) } else { (a, b) };
        let c = criterion_for(k).unwrap();
        let tol = Tolerances::default();
        let base = c.orthogonal(&space, &fs[0], &fs[1], &tol).unwrap().orthogonal;
        prop_assert_eq!(c.orthogonal(&space, &fs[0].scale(a), &fs[1].scale(b), &tol).unwrap().orthogonal, base);
    }

    #[test]
    fn lp_support_functional_is_the_unique_maximiser(
        (space, fs) in setup(1),
        p in prop::sample::select(vec![1.2, 1.5, 3.0, 4.0, 7.0]),
        atom in any::<prop::sample::Index>(),
        u in unimodular(),
    ) {
        let f = &fs[0];
        prop_assume!(!f.is_zero());
        let h = lp::support_functional(&space, f, p).unwrap();
        let q = conjugate_exponent(p).unwrap();
        let i = atom.index(space.len());
        let delta = if space.field() == Field::Real { Scalar::new(u.re.signum() * 1e-3, 0.0) } else { u * 1e-3 };
        let w = space.weight(i);
        let action_gap = (w * delta * f.get(i)).norm();
        let mass_gain = w * ((h.get(i) + delta).norm().powf(q) - h.get(i).norm().powf(q));
        prop_assert!(action_gap > 0.0 || mass_gain > 0.0);
    }
}

proptest! {
    #![proptest_config(config(64))]

    #[test]
    fn orthogonal_directions_pass_both_checks((space, fs) in setup(1), k in kind(), seed in any::<u64>()) {
        let f = &fs[0];
        prop_assume!(!f.is_zero() && space.len() > 1);
        let c = criterion_for(k).unwrap();
        let tol = Tolerances::default();
        let g = c.orthogonal_direction(&space, f, &mut rng_from_seed(seed), &tol).unwrap().g;
        prop_assert!(c.orthogonal(&space, f, &g, &tol).unwrap().orthogonal);
        prop_assert_eq!(oracle_orthogonal(&space, k, f, &g, &tol).unwrap().verdict, OracleVerdict::Orthogonal);
    }

    #[test]
    fn documents_round_trip((space, fs) in setup(3)) {
        let atoms: Vec<Atom> = space.atoms().to_vec();
        let functions: BTreeMap<String, Vec<Value>> = fs
            .iter()
            .enumerate()
            .map(|(k, f)| (format!("f{k}"), f.iter().map(|&z| Value(z)).collect()))
            .collect();
        let doc = InputDocument { field: space.field(), atoms, functions };
        prop_assert_eq!(InputDocument::from_json(&doc.to_json()).unwrap(), doc);
    }
}
