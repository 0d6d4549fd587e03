//! Invariants checked on random shifts against independent oracles.

use proptest::prelude::*;
use symchaos_core::classify::{classify, Tri};
use symchaos_core::construct::{build_stages, verify_certificate, ConstructOptions};
use symchaos_core::corpus::{gen_corpus, CorpusClass, CorpusOptions};
use symchaos_core::criterion::{criterion_check, prox_density_check};
use symchaos_core::decide::{
    filter_law_check, hitting_set, is_transitive, is_weakly_mixing, period, verify_period,
};
use symchaos_core::ellis::{check_system, enveloping, orbits_merge, FiniteDynSys};
use symchaos_core::graph::strong_connectivity;
use symchaos_core::shift::{build_from_forbidden, dist, parse_sft, to_json, Alphabet};
use symchaos_core::witness::{li_yorke_check, make_scrambled_pair};
use symchaos_core::{Cylinder, Dist, PointRep, SftPresentation, Word};

fn random_shift(seed: u64, alphabet_max: usize, vertex_max: usize, class: CorpusClass) -> SftPresentation {
    let count = if class == CorpusClass::Any { 2 } else { 1 };
    let mut c = gen_corpus(&CorpusOptions {
        seed,
        count,
        alphabet_max,
        vertex_max,
        class,
    })
    .unwrap();
    c.pop().unwrap().sft
}

fn any_shift() -> impl Strategy<Value = SftPresentation> {
    (any::<u64>(), 1usize..=3, 1usize..=5).prop_map(|(s, a, v)| random_shift(s, a, v, CorpusClass::Any))
}

fn transitive_shift() -> impl Strategy<Value = SftPresentation> {
    (any::<u64>(), 1usize..=3, 1usize..=5).prop_map(|(s, a, v)| random_shift(s, a, v, CorpusClass::Transitive))
}

fn chaotic_shift() -> impl Strategy<Value = SftPresentation> {
    (any::<u64>(), 2usize..=3, 1usize..=4).prop_map(|(s, a, v)| random_shift(s, a, v, CorpusClass::ChaoticFixed))
}

fn words_of_len(k: usize, len: usize) -> Vec<Word> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|w: Word| {
                (0..k as u16).map(move |s| {
                    let mut w = w.clone();
                    w.push(s);
                    w
                })
            })
            .collect();
    }
    out
}

fn avoids(w: &[u16], forbidden: &[Word]) -> bool {
    forbidden.iter().all(|f| !w.windows(f.len()).any(|s| s == f.as_slice()))
}

fn bool_step(x: &SftPresentation, r: &[bool]) -> Vec<bool> {
    let mut out = vec![false; r.len()];
    for e in x.edges() {
        if r[e.source] {
            out[e.target] = true;
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn language_is_factorial_and_extendable(x in any_shift(), len in 1usize..=6) {
        let lang = x.language(len);
        let longer = x.language(len + 1);
        prop_assert!(lang.iter().all(|w| x.is_legal(w)));
        for w in &lang {
            prop_assert!(longer.iter().any(|v| v.starts_with(w)));
            prop_assert!(x.language(len - 1).iter().any(|v| v[..] == w[1..]));
        }
        for v in &longer {
            prop_assert!(lang.binary_search(&v[..len].to_vec()).is_ok());
        }
    }

    /// A word is in the language iff it avoids the forbidden words and
    /// extends far enough to the right while still avoiding them.
    #[test]
    fn forbidden_filter_agrees(
        forbidden in prop::collection::vec(prop::collection::vec(0u16..2, 1..=3), 0..4),
        len in 1usize..=7,
    ) {
        let alphabet = Alphabet::new(["0", "1"]).unwrap();
        let Ok(x) = build_from_forbidden(alphabet, &forbidden) else {
            let any_long = words_of_len(2, 10).iter().any(|w| avoids(w, &forbidden));
            prop_assert!(!any_long);
            return Ok(());
        };
        const EXTEND: usize = 6;
        let long: Vec<Word> = words_of_len(2, len + EXTEND).into_iter().filter(|w| avoids(w, &forbidden)).collect();
        let mut oracle: Vec<Word> = long.iter().map(|w| w[..len].to_vec()).collect();
        oracle.sort();
        oracle.dedup();
        prop_assert_eq!(x.language(len), oracle);
    }

    #[test]
    fn json_round_trip(x in any_shift()) {
        prop_assert_eq!(parse_sft(&to_json(&x)).unwrap(), x);
    }

    #[test]
    fn ultrametric(
        a in prop::collection::vec(0u16..2, 0..6), ap in prop::collection::vec(0u16..2, 1..4),
        b in prop::collection::vec(0u16..2, 0..6), bp in prop::collection::vec(0u16..2, 1..4),
        c in prop::collection::vec(0u16..2, 0..6), cp in prop::collection::vec(0u16..2, 1..4),
    ) {
        let x = PointRep::new(a, ap).unwrap();
        let y = PointRep::new(b, bp).unwrap();
        let z = PointRep::new(c, cp).unwrap();
        prop_assert_eq!(dist(&x, &y), dist(&y, &x));
        prop_assert_eq!(dist(&x, &x), Dist::ZERO);
        prop_assert_eq!(dist(&x, &y).is_zero(), x == y);
        prop_assert!(dist(&x, &z) <= dist(&x, &y).max(dist(&y, &z)));
    }

    #[test]
    fn hitting_set_matches_enumeration(x in any_shift(), ui in any::<prop::sample::Index>(), vi in any::<prop::sample::Index>()) {
        let words: Vec<Word> = (1..=2).flat_map(|l| x.language(l)).collect();
        let u = ui.get(&words).clone();
        let v = vi.get(&words).clone();
        let h = hitting_set(&x, &Cylinder::new(&x, u.clone()).unwrap(), &Cylinder::new(&x, v.clone()).unwrap(), 8);
        for n in 1..=8 {
            let len = u.len().max(n + v.len());
            let brute = x.language(len).iter().any(|w| w.starts_with(&u) && w[n..n + v.len()] == v[..]);
            prop_assert_eq!(h.contains(n), brute, "n = {}", n);
        }
    }

    #[test]
    fn filter_law_holds(x in any_shift(), i1 in any::<prop::sample::Index>(), i2 in any::<prop::sample::Index>(), n in 0usize..6) {
        let words: Vec<Word> = (1..=3).flat_map(|l| x.language(l)).collect();
        let u1 = Cylinder::new(&x, i1.get(&words).clone()).unwrap();
        let u2 = Cylinder::new(&x, i2.get(&words).clone()).unwrap();
        if let Ok(v) = filter_law_check(&x, &u1, &u2, n, 64) {
            prop_assert!(v.holds, "counterexample {:?}", v.counterexample);
        }
    }

    #[test]
    fn period_divides_closed_walks(x in transitive_shift()) {
        let cert = period(&x).unwrap();
        prop_assert!(verify_period(&x, &cert));
        let n = x.num_vertices();
        for v in 0..n {
            let mut r = vec![false; n];
            r[v] = true;
            for k in 1..=2 * n + 2 {
                r = bool_step(&x, &r);
                if r[v] {
                    prop_assert_eq!(k % cert.period, 0, "closed walk of length {} at {}", k, v);
                }
            }
        }
    }

    #[test]
    fn weak_mixing_iff_aperiodic_transitive(x in any_shift()) {
        let transitive = is_transitive(&x).verdict;
        let aperiodic = transitive && period(&x).unwrap().period == 1;
        prop_assert_eq!(is_weakly_mixing(&x).verdict, aperiodic);
    }

    #[test]
    fn self_product_matches_weak_mixing(x in any_shift()) {
        let p = x.product(&x).unwrap();
        prop_assert_eq!(strong_connectivity(&p.adjacency()).is_ok(), is_weakly_mixing(&x).verdict);
    }

    /// Swapping coordinates is an isomorphism of X × Y onto Y × X.
    #[test]
    fn product_commutes(x in any_shift(), y in any_shift()) {
        let xy = x.product(&y).unwrap();
        let yx = y.product(&x).unwrap();
        prop_assert_eq!(xy.num_vertices(), yx.num_vertices());
        prop_assert_eq!(xy.edges().len(), yx.edges().len());
        prop_assert_eq!(strong_connectivity(&xy.adjacency()).is_ok(), strong_connectivity(&yx.adjacency()).is_ok());
        let swap = |name: &str| {
            let (a, b) = name.trim_start_matches('(').trim_end_matches(')').split_once(',').unwrap();
            format!("({b},{a})")
        };
        let mut swapped: Vec<Vec<String>> = xy
            .language(3)
            .iter()
            .map(|w| w.iter().map(|&s| swap(xy.alphabet().name(s))).collect())
            .collect();
        swapped.sort();
        let mut direct: Vec<Vec<String>> = yx
            .language(3)
            .iter()
            .map(|w| w.iter().map(|&s| yx.alphabet().name(s).to_string()).collect())
            .collect();
        direct.sort();
        prop_assert_eq!(swapped, direct);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn prox_density_full_when_criterion_holds(x in transitive_shift(), seed in any::<u64>()) {
        prop_assume!(x.is_infinite());
        let report = criterion_check(&x, 6).unwrap();
        prop_assume!(report.satisfied);
        let d = prox_density_check(&x, 3, 3, 512, 6, seed).unwrap();
        prop_assert_eq!(d.witnessed, d.total);
    }

    #[test]
    fn chaos_verdict_yields_witnesses(x in chaotic_shift()) {
        let report = classify(&x, 6).unwrap();
        prop_assert_eq!(report.flags.densely_uniformly_chaotic, Tri::Yes);
        let opts = ConstructOptions { proximal: true, ..ConstructOptions::default() };
        let cert = build_stages(&x, 3, &opts).unwrap();
        let checks = verify_certificate(&x, &cert).unwrap();
        prop_assert!(checks.iter().all(|c| c.all_pass()), "{:?}", checks);
        let w = make_scrambled_pair(&x, 8, Dist::pow(1), 4096, 0).unwrap();
        prop_assert!(x.point_is_legal(&w.x) && x.point_is_legal(&w.y));
        prop_assert!(li_yorke_check(&w, 8, Dist::pow(1)));
    }

    #[test]
    fn construction_invariants(x in transitive_shift(), levels in 1usize..=3, proximal in any::<bool>()) {
        prop_assume!(x.is_infinite());
        let opts = ConstructOptions { proximal, ..ConstructOptions::default() };
        let cert = build_stages(&x, levels, &opts).unwrap();
        prop_assert_eq!(cert.stages.len(), levels);
        for (i, s) in cert.stages.iter().enumerate() {
            prop_assert_eq!(s.n, i + 1);
            prop_assert!(s.k_n >= s.n);
            let parents = if i == 0 { 1 } else { cert.stages[i - 1].a_n() };
            prop_assert!(s.a_n() >= 2 * parents && s.a_n() <= 2 * parents + s.n);
        }
        prop_assert_eq!(cert.leaf_points.len(), cert.stages.last().unwrap().a_n());
        let checks = verify_certificate(&x, &cert).unwrap();
        prop_assert!(checks.iter().all(|c| c.all_pass()), "{:?}", checks);
    }

    #[test]
    fn ellis_laws(map in (1usize..=7).prop_flat_map(|n| prop::collection::vec(0..n, n)), with_identity in any::<bool>()) {
        let sys = FiniteDynSys::new(map).unwrap();
        let r = check_system(&sys, with_identity);
        prop_assert!(r.violations.is_empty(), "{:?}", r.violations);
        let env = enveloping(&sys, with_identity);
        prop_assert!(!env.idempotents().is_empty());
        for a in 0..sys.len() {
            for b in 0..sys.len() {
                let by_monoid = env.elements.iter().any(|f| f[a] == f[b]);
                prop_assert_eq!(by_monoid, orbits_merge(&sys, a, b));
            }
        }
    }
}
