mod common;

use ansc::automata::{compile_unminimized, factorial_closure, parse_regex, Dfa, OrderedAlphabet};
use ansc::counting::CountCache;
use ansc::growth::{
    analyze, component_root, exact_scc_class, index, polynomial_index, predict_cr, scc_decompose, CrPrediction,
    GrowthClass, SccClass,
};
use common::{corpus, finite_corpus};
use num_traits::ToPrimitive;
use proptest::prelude::*;

fn counts(d: &Dfa, upto: usize) -> Vec<f64> {
    let cache = CountCache::from_dfa(d).unwrap();
    (0..=upto).map(|n| cache.count(n).to_f64().unwrap()).collect()
}

fn reachable(d: &Dfa, from: usize) -> Vec<bool> {
    let mut seen = vec![false; d.state_count()];
    let mut stack = vec![from];
    seen[from] = true;
    while let Some(p) = stack.pop() {
        for (_, q) in d.successors(p) {
            if !seen[q] {
                seen[q] = true;
                stack.push(q);
            }
        }
    }
    seen
}

fn check_decomposition(d: &Dfa) {
    let scc = scc_decompose(d);
    let reach: Vec<Vec<bool>> = (0..d.state_count()).map(|q| reachable(d, q)).collect();
    for p in 0..d.state_count() {
        for q in 0..d.state_count() {
            let mutual = reach[p][q] && reach[q][p];
            assert_eq!(scc.component_of[p] == scc.component_of[q], mutual, "states {p} {q}");
        }
    }
    for (c, members) in scc.components.iter().enumerate() {
        assert!(members.iter().all(|&q| scc.component_of[q] == c));
        for &t in &scc.edges[c] {
            assert!(t < c, "condensation edge {c} -> {t} breaks reverse topological order");
        }
    }
    for p in 0..d.state_count() {
        for (_, q) in d.successors(p) {
            let (a, b) = (scc.component_of[p], scc.component_of[q]);
            if a != b {
                assert!(scc.edges[a].contains(&b));
            }
        }
    }
}

#[test]
fn decompositions_are_maximal_and_acyclic() {
    for l in corpus().into_iter().chain(finite_corpus()) {
        check_decomposition(&l.dfa());
        check_decomposition(&factorial_closure(&l.dfa()));
    }
}

#[test]
fn trichotomy_agrees_with_counts() {
    for l in corpus().into_iter().chain(finite_corpus()) {
        let d = l.dfa();
        let info = analyze(&d).unwrap();
        let c = counts(&d, 14);
        match info.class {
            GrowthClass::Finite => {
                assert!(!d.is_infinite(), "{}", l.name);
                let q = d.state_count();
                assert!(c[q.min(14)..].iter().all(|&x| x == 0.0), "{}", l.name);
                assert_eq!(info.index, 0.0);
            }
            GrowthClass::Polynomial => {
                assert_eq!(info.index, 1.0, "{}", l.name);
                let pd = info.polynomial_index.unwrap() as i32;
                let fit: Vec<f64> = (7..=14)
                    .filter(|&n| c[n] > 0.0)
                    .map(|n| c[n] / (n as f64 + 1.0).powi(pd))
                    .collect();
                let (lo, hi) = fit.iter().fold((f64::MAX, 0.0f64), |(a, b), &x| (a.min(x), b.max(x)));
                assert!(hi / lo < 4.0, "{}: n^{pd} fit spread {lo}..{hi}", l.name);
            }
            GrowthClass::Exponential => {
                assert!(info.index > 1.0);
                let pd = info.polynomial_index.unwrap() as f64;
                let ratio = c[14] / c[13];
                let slack = ((14.0 + 1.0) / 14.0f64).powf(pd) * 1.05;
                assert!(
                    ratio >= info.index * 0.95 && ratio <= info.index * slack,
                    "{}: C(14)/C(13) = {ratio} vs index {}",
                    l.name,
                    info.index
                );
            }
        }
    }
}

#[test]
fn index_bounds() {
    for l in corpus() {
        let (ind, _) = index(&l.dfa()).unwrap();
        assert!(ind >= 1.0 && ind <= l.alphabet.len() as f64 + 1e-9, "{}: {ind}", l.name);
    }
}

#[test]
fn theta_bounds_hold_on_small_lengths() {
    for l in corpus() {
        let d = l.dfa();
        let info = analyze(&d).unwrap();
        let pd = info.polynomial_index.unwrap() as i32;
        let c = counts(&d, 14);
        let norm: Vec<f64> = (1..=14)
            .map(|n| c[n] / ((n as f64).powi(pd) * info.index.powi(n as i32)))
            .collect();
        let early = norm[..7].iter().cloned().fold(0.0, f64::max);
        let late = norm[7..].iter().cloned().fold(0.0, f64::max);
        // Upper form: the late normalized counts stay under a constant
        // fitted on the early ones. Lower form: some late length keeps a
        // constant fraction.
        assert!(late <= 8.0 * early, "{}: {early} -> {late}", l.name);
        assert!(late >= early / 8.0, "{}: {early} -> {late}", l.name);
    }
}

#[test]
fn polynomial_index_survives_minimization() {
    for l in corpus() {
        let ast = parse_regex(l.pattern, &l.alphabet).unwrap();
        let raw = compile_unminimized(&ast, &l.alphabet);
        let min = l.dfa();
        assert_eq!(polynomial_index(&raw).unwrap(), polynomial_index(&min).unwrap(), "{}", l.name);
        let (a, ca) = index(&raw).unwrap();
        let (b, cb) = index(&min).unwrap();
        assert_eq!(ca, cb);
        assert!((a - b).abs() < 1e-9, "{}", l.name);
    }
}

#[test]
fn factorial_closure_keeps_growth() {
    for l in corpus() {
        let d = l.dfa();
        let f = factorial_closure(&d);
        let (a, ca) = index(&d).unwrap();
        let (b, cb) = index(&f).unwrap();
        assert_eq!(ca, cb, "{}", l.name);
        assert!((a - b).abs() < 1e-6, "{}: {a} vs {b}", l.name);
    }
}

#[test]
fn predictions_for_named_pairs() {
    let fib = analyze(&common::fib().dfa()).unwrap();
    let bin = analyze(&common::binary().dfa()).unwrap();
    let ab = analyze(&corpus()[1].dfa()).unwrap();
    let even = analyze(&corpus()[0].dfa()).unwrap();
    match predict_cr(&fib, &bin).unwrap() {
        CrPrediction::Ratio(r) => assert!((r - ((1.0 + 5f64.sqrt()) / 2.0).log2()).abs() < 1e-9, "{r}"),
        other => panic!("{other:?}"),
    }
    assert_eq!(predict_cr(&fib, &fib).unwrap(), CrPrediction::Ratio(1.0));
    assert_eq!(predict_cr(&bin, &ab).unwrap(), CrPrediction::Infinite);
    assert_eq!(predict_cr(&even, &ab).unwrap(), CrPrediction::Zero);
    assert_eq!(predict_cr(&ab, &even).unwrap(), CrPrediction::Infinite);
    assert_eq!(predict_cr(&ab, &ab).unwrap(), CrPrediction::IndeterminateFinite);
}

/// Largest real root of `det(xI - A)` for a matrix of size at most three,
/// found by bracketing from above and bisecting.
fn char_poly_root(a: &[Vec<f64>]) -> f64 {
    let n = a.len();
    let (tr, sum2, det) = match n {
        1 => (a[0][0], 0.0, a[0][0]),
        2 => (a[0][0] + a[1][1], a[0][0] * a[1][1] - a[0][1] * a[1][0], 0.0),
        _ => {
            let m = |i: usize, j: usize, k: usize, l: usize| a[i][k] * a[j][l] - a[i][l] * a[j][k];
            let minors = m(0, 1, 0, 1) + m(0, 2, 0, 2) + m(1, 2, 1, 2);
            let det = a[0][0] * m(1, 2, 1, 2) - a[0][1] * m(1, 2, 0, 2) + a[0][2] * m(1, 2, 0, 1);
            (a[0][0] + a[1][1] + a[2][2], minors, det)
        }
    };
    let p = |x: f64| match n {
        1 => x - tr,
        2 => x * x - tr * x + sum2,
        _ => x * x * x - tr * x * x + sum2 * x - det,
    };
    let mut hi = a.iter().map(|r| r.iter().sum::<f64>()).fold(0.0, f64::max) + 1.0;
    let step = 1e-3;
    let mut lo = hi - step;
    while p(lo) > 0.0 && lo > -1.0 {
        hi = lo;
        lo -= step;
    }
    for _ in 0..200 {
        let mid = (lo + hi) / 2.0;
        if p(mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    (lo + hi) / 2.0
}

fn check_roots(d: &Dfa) -> Result<(), TestCaseError> {
    let scc = scc_decompose(d);
    for members in &scc.components {
        let class = exact_scc_class(members, d);
        let a: Vec<Vec<f64>> = members
            .iter()
            .map(|&p| members.iter().map(|&q| d.multiplicity(p, q) as f64).collect())
            .collect();
        let (root, _) = component_root(members, d);
        match class {
            SccClass::Trivial => prop_assert_eq!(a[0][0], 0.0),
            SccClass::Cycle => prop_assert!((root - 1.0).abs() < 1e-9),
            SccClass::Expanding => {
                prop_assert!(root > 1.0 + 1e-6);
                if members.len() <= 3 {
                    let oracle = char_poly_root(&a);
                    prop_assert!((root - oracle).abs() < 1e-6, "{} vs {}", root, oracle);
                }
            }
        }
    }
    Ok(())
}

#[test]
fn component_roots_match_characteristic_polynomial() {
    for l in corpus() {
        check_roots(&l.dfa()).unwrap();
    }
}

fn arb_dfa() -> impl Strategy<Value = Dfa> {
    (1usize..=4, 2usize..=3).prop_flat_map(|(states, k)| {
        (
            Just(states),
            Just(k),
            prop::collection::vec(prop::option::weighted(0.8, 0..states), states * k),
        )
            .prop_map(|(states, k, targets)| {
                let alphabet = OrderedAlphabet::new(&b"abc"[..k]).unwrap();
                let transitions: Vec<_> = targets
                    .iter()
                    .enumerate()
                    .filter_map(|(cell, t)| t.map(|t| (cell / k, b"abc"[cell % k], t)))
                    .collect();
                let accepting: Vec<usize> = (0..states).collect();
                Dfa::new(alphabet, states, 0, &accepting, &transitions).unwrap().trim()
            })
    })
}

proptest! {
    #[test]
    fn random_component_roots(d in arb_dfa()) {
        check_roots(&d)?;
    }
}
