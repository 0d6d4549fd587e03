//! Chaos via products: search for a subsystem `Y` with `X × Y` transitive,
//! and the finite shadow of the density of proximal tuples.

use std::collections::{HashSet, VecDeque};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::decide::{fixed_points, periodic_points};
use crate::error::{Error, Result};
use crate::graph::{self, StrongConnectivity};
use crate::shift::{dist, overlay, Dist, PointRep, SftDocument, SftPresentation, Symbol, Word};
use crate::vset::VertexSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum SubsystemKind {
    FixedPoint,
    PeriodicOrbit { period: usize },
    SccSubshift,
    Whole,
}

/// A closed invariant subset of `X`, given by its own trimmed presentation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "SubsystemDoc", into = "SubsystemDoc")]
pub struct Subsystem {
    pub kind: SubsystemKind,
    pub presentation: SftPresentation,
}

#[derive(Serialize, Deserialize)]
struct SubsystemDoc {
    kind: SubsystemKind,
    sft: SftDocument,
}

impl TryFrom<SubsystemDoc> for Subsystem {
    type Error = Error;
    fn try_from(d: SubsystemDoc) -> Result<Self> {
        Ok(Subsystem {
            kind: d.kind,
            presentation: d.sft.build()?,
        })
    }
}

impl From<Subsystem> for SubsystemDoc {
    fn from(s: Subsystem) -> Self {
        SubsystemDoc {
            kind: s.kind,
            sft: SftDocument::from_presentation(&s.presentation),
        }
    }
}

/// Bounds the cycle length and the number of SCC pieces explored.
pub const DEFAULT_BUDGET: usize = 6;

/// Whether every point of `y` is a point of `x`, matching symbols by name.
pub fn is_subshift_of(y: &SftPresentation, x: &SftPresentation) -> bool {
    let map: Vec<Option<Symbol>> = y
        .alphabet()
        .names()
        .iter()
        .map(|n| x.alphabet().symbol(n))
        .collect();
    let mut seen: HashSet<(usize, VertexSet)> = HashSet::new();
    let mut queue: VecDeque<(usize, VertexSet)> = (0..y.num_vertices()).map(|v| (v, x.all())).collect();
    while let Some((v, set)) = queue.pop_front() {
        if !seen.insert((v, set.clone())) {
            continue;
        }
        for &(s, w) in y.out_edges(v) {
            let Some(t) = map[s as usize] else { return false };
            let next = x.step(&set, t);
            if next.is_empty() {
                return false;
            }
            queue.push_back((w, next));
        }
    }
    true
}

fn same_shift(a: &SftPresentation, b: &SftPresentation) -> bool {
    is_subshift_of(a, b) && is_subshift_of(b, a)
}

fn orbit(x: &SftPresentation, p: &PointRep) -> SftPresentation {
    SftPresentation::cycle(x.alphabet().clone(), p.period()).expect("nonempty period")
}

/// Candidate subsystems in the order fixed points, periodic orbits by
/// length, SCC sub-shifts of one-vertex deletions, whole shift. Candidates
/// equal as shifts to an earlier one (or to `X`) are dropped.
pub fn enumerate_subsystems(x: &SftPresentation, budget: usize) -> Vec<Subsystem> {
    let mut out: Vec<Subsystem> = Vec::new();
    let push = |out: &mut Vec<Subsystem>, s: Subsystem| {
        if s.kind != SubsystemKind::Whole && same_shift(&s.presentation, x) {
            return;
        }
        if out.iter().any(|o| same_shift(&o.presentation, &s.presentation)) {
            return;
        }
        out.push(s);
    };
    for p in fixed_points(x) {
        push(
            &mut out,
            Subsystem {
                kind: SubsystemKind::FixedPoint,
                presentation: orbit(x, &p),
            },
        );
    }
    for d in 2..=budget {
        for p in periodic_points(x, d) {
            push(
                &mut out,
                Subsystem {
                    kind: SubsystemKind::PeriodicOrbit { period: d },
                    presentation: orbit(x, &p),
                },
            );
        }
    }
    let mut scc_found = 0;
    'outer: for v in 0..x.num_vertices() {
        let keep: Vec<usize> = (0..x.num_vertices()).filter(|&u| u != v).collect();
        let Ok(sub) = x.induced(&keep) else { continue };
        let adj = sub.adjacency();
        let (count, comp) = graph::scc(&adj);
        for c in 0..count {
            let members: Vec<usize> = (0..sub.num_vertices()).filter(|&u| comp[u] == c).collect();
            let Ok(piece) = sub.induced(&members) else { continue };
            if piece.num_vertices() != members.len() {
                continue;
            }
            let kind = if piece.edges().len() == piece.num_vertices() {
                let mut word = Vec::new();
                let mut cur = 0;
                for _ in 0..piece.num_vertices() {
                    let (s, next) = piece.out_edges(cur)[0];
                    word.push(s);
                    cur = next;
                }
                let p = PointRep::periodic(word).expect("nonempty");
                if p.period().len() > budget {
                    continue;
                }
                SubsystemKind::PeriodicOrbit {
                    period: p.period().len(),
                }
            } else {
                SubsystemKind::SccSubshift
            };
            let before = out.len();
            push(
                &mut out,
                Subsystem {
                    kind,
                    presentation: piece,
                },
            );
            if out.len() > before && kind == SubsystemKind::SccSubshift {
                scc_found += 1;
                if scc_found >= budget {
                    break 'outer;
                }
            }
        }
    }
    push(
        &mut out,
        Subsystem {
            kind: SubsystemKind::Whole,
            presentation: x.clone(),
        },
    );
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CriterionReport {
    pub satisfied: bool,
    pub witness_y: Option<Subsystem>,
    pub product_certificate: Option<StrongConnectivity>,
    pub budget: usize,
    pub candidates_tried: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

pub fn criterion_check(x: &SftPresentation, budget: usize) -> Result<CriterionReport> {
    graph::strong_connectivity(&x.adjacency()).map_err(|_| Error::NotTransitive)?;
    if !x.is_infinite() {
        return Err(Error::FiniteShift);
    }
    let candidates = enumerate_subsystems(x, budget);
    for (i, y) in candidates.iter().enumerate() {
        let Ok(p) = x.product(&y.presentation) else { continue };
        if let Ok(cert) = graph::strong_connectivity(&p.adjacency()) {
            return Ok(CriterionReport {
                satisfied: true,
                witness_y: Some(y.clone()),
                product_certificate: Some(cert),
                budget,
                candidates_tried: i + 1,
                notes: Vec::new(),
            });
        }
    }
    Ok(CriterionReport {
        satisfied: false,
        witness_y: None,
        product_certificate: None,
        budget,
        candidates_tried: candidates.len(),
        notes: vec!["no suitable subsystem found within budget; this is not a proof that none exists".into()],
    })
}

/// Re-checks a satisfied report: `Y ⊆ X` and the product certificate.
pub fn verify_criterion(x: &SftPresentation, report: &CriterionReport) -> bool {
    if !report.satisfied {
        return report.witness_y.is_none();
    }
    let (Some(y), Some(cert)) = (&report.witness_y, &report.product_certificate) else {
        return false;
    };
    is_subshift_of(&y.presentation, x)
        && x.product(&y.presentation)
            .map(|p| cert.verify(&p.adjacency()))
            .unwrap_or(false)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum ProxOutcome {
    Witnessed {
        m: usize,
        target: String,
        points: Vec<PointRep>,
        image_diam: Dist,
    },
    /// `exhausted` means the joint reachable state repeated, so no `m` at
    /// all works; otherwise the horizon ran out.
    Failed { exhausted: bool },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProxSample {
    pub index: usize,
    pub tuple: Vec<String>,
    #[serde(flatten)]
    pub outcome: ProxOutcome,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProxDensityReport {
    pub n: usize,
    pub eps_exponent: u32,
    pub horizon: usize,
    pub seed: u64,
    pub witnessed: usize,
    pub total: usize,
    pub density: f64,
    pub samples: Vec<ProxSample>,
}

/// Searches `m <= horizon` and a target word `τ` of length `e + 1` with
/// `σ^m [u_i] ∩ [τ] ≠ ∅` for every `i`, then returns canonical points.
pub fn prox_witness(x: &SftPresentation, tuple: &[Word], e: u32, horizon: usize) -> ProxOutcome {
    let targets = x.language(e as usize + 1);
    let target_starts: Vec<VertexSet> = targets.iter().map(|t| x.starts(t)).collect();
    let longest = tuple.iter().map(Vec::len).max().unwrap_or(0);
    let witness = |m: usize, t: &Word| -> Option<Vec<PointRep>> {
        tuple
            .iter()
            .map(|u| {
                let w = x.lex_least_matching(&overlay(u, t, m)?)?;
                x.completion(&w)
            })
            .collect()
    };
    let done = |m: usize, t: &Word, points: Vec<PointRep>| {
        let images: Vec<PointRep> = points.iter().map(|p| p.shift(m)).collect();
        let image_diam = images
            .iter()
            .flat_map(|a| images.iter().map(move |b| dist(a, b)))
            .max()
            .unwrap_or(Dist::ZERO);
        ProxOutcome::Witnessed {
            m,
            target: x.render(t),
            points,
            image_diam,
        }
    };

    for m in 0..longest.min(horizon + 1) {
        for t in &targets {
            if let Some(points) = witness(m, t) {
                return done(m, t, points);
            }
        }
    }
    let mut sets: Vec<VertexSet> = tuple.iter().map(|u| x.reach(u)).collect();
    for (set, u) in sets.iter_mut().zip(tuple) {
        for _ in u.len()..longest {
            *set = x.step_any(set);
        }
    }
    let mut seen: HashSet<Vec<VertexSet>> = HashSet::new();
    for m in longest..=horizon {
        if !seen.insert(sets.clone()) {
            return ProxOutcome::Failed { exhausted: true };
        }
        if let Some(i) = target_starts
            .iter()
            .position(|st| sets.iter().all(|s| s.intersects(st)))
        {
            let points = witness(m, &targets[i]).expect("reachable target yields points");
            return done(m, &targets[i], points);
        }
        sets = sets.iter().map(|s| x.step_any(s)).collect();
    }
    ProxOutcome::Failed { exhausted: false }
}

/// Whether a witnessed outcome is genuine for the given tuple.
pub fn verify_prox(tuple: &[Word], e: u32, outcome: &ProxOutcome, x: &SftPresentation) -> bool {
    let ProxOutcome::Witnessed { m, points, .. } = outcome else {
        return false;
    };
    points.len() == tuple.len()
        && points.iter().zip(tuple).all(|(p, u)| {
            x.point_is_legal(p) && p.prefix(u.len()) == *u
        })
        && points
            .iter()
            .flat_map(|a| points.iter().map(move |b| dist(&a.shift(*m), &b.shift(*m))))
            .all(|d| d.lt_pow(e))
}

fn random_word(x: &SftPresentation, rng: &mut ChaCha8Rng) -> Word {
    let len = rng.gen_range(1..=3);
    let words = x.language(len);
    words[rng.gen_range(0..words.len())].clone()
}

pub fn prox_density_check(
    x: &SftPresentation,
    n: usize,
    e: u32,
    horizon: usize,
    samples: usize,
    seed: u64,
) -> Result<ProxDensityReport> {
    if n < 2 {
        return Err(Error::InvalidArgument("tuple size must be at least 2".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let tuples: Vec<Vec<Word>> = (0..samples)
        .map(|_| (0..n).map(|_| random_word(x, &mut rng)).collect())
        .collect();
    let mut out = Vec::with_capacity(samples);
    let mut witnessed = 0;
    for (index, tuple) in tuples.iter().enumerate() {
        let outcome = prox_witness(x, tuple, e, horizon);
        if verify_prox(tuple, e, &outcome, x) {
            witnessed += 1;
        }
        out.push(ProxSample {
            index,
            tuple: tuple.iter().map(|w| x.render(w)).collect(),
            outcome,
        });
    }
    Ok(ProxDensityReport {
        n,
        eps_exponent: e,
        horizon,
        seed,
        witnessed,
        total: samples,
        density: if samples == 0 { 1.0 } else { witnessed as f64 / samples as f64 },
        samples: out,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shift::{build_from_forbidden, Alphabet, Origin};

    fn shift(forbidden: &[&str]) -> SftPresentation {
        let a = Alphabet::new(["0", "1"]).unwrap();
        let f: Vec<Word> = forbidden.iter().map(|w| a.tokenize(w).unwrap()).collect();
        build_from_forbidden(a, &f).unwrap()
    }

    fn two_cycle() -> SftPresentation {
        let a = Alphabet::new(["a", "b"]).unwrap();
        SftPresentation::from_named_edges(a, &["p", "q"], &[("p", "a", "q"), ("q", "b", "p")], Origin::EdgeShift)
            .unwrap()
    }

    fn three_cycle() -> SftPresentation {
        let a = Alphabet::new(["a", "b", "c"]).unwrap();
        SftPresentation::from_named_edges(
            a,
            &["A", "B", "C"],
            &[("A", "a", "B"), ("B", "b", "C"), ("C", "c", "A")],
            Origin::EdgeShift,
        )
        .unwrap()
    }

    fn kinds(s: &[Subsystem]) -> Vec<SubsystemKind> {
        s.iter().map(|s| s.kind).collect()
    }

    #[test]
    fn product_with_fixed_point_is_a_relabeling() {
        let g = shift(&["11"]);
        let y = &enumerate_subsystems(&g, 3)[0];
        assert_eq!(y.kind, SubsystemKind::FixedPoint);
        let p = g.product(&y.presentation).unwrap();
        assert_eq!(p.num_vertices(), 2);
        assert_eq!(p.edges().len(), 3);
        assert_eq!(p.alphabet().names(), &["(0,0)", "(1,0)"]);
    }

    #[test]
    fn two_cycle_squared_splits() {
        let x = two_cycle();
        let p = x.product(&x).unwrap();
        assert_eq!(graph::scc(&p.adjacency()).0, 2);
    }

    #[test]
    fn enumeration_examples() {
        let g = enumerate_subsystems(&shift(&["11"]), 3);
        let k = kinds(&g);
        assert_eq!(k[0], SubsystemKind::FixedPoint);
        assert!(k.contains(&SubsystemKind::PeriodicOrbit { period: 2 }));
        assert_eq!(*k.last().unwrap(), SubsystemKind::Whole);

        let f = enumerate_subsystems(&shift(&[]), 2);
        assert_eq!(
            kinds(&f),
            [
                SubsystemKind::FixedPoint,
                SubsystemKind::FixedPoint,
                SubsystemKind::PeriodicOrbit { period: 2 },
                SubsystemKind::Whole
            ]
        );

        assert_eq!(kinds(&enumerate_subsystems(&three_cycle(), 3)), [SubsystemKind::Whole]);
    }

    #[test]
    fn subshift_inclusion() {
        let g = shift(&["11"]);
        let full = shift(&[]);
        assert!(is_subshift_of(&g, &full));
        assert!(!is_subshift_of(&full, &g));
        assert!(!is_subshift_of(&two_cycle(), &g));
    }

    #[test]
    fn criterion_examples() {
        for x in [shift(&["11"]), shift(&[])] {
            let r = criterion_check(&x, 6).unwrap();
            assert!(r.satisfied);
            assert_eq!(r.witness_y.as_ref().unwrap().kind, SubsystemKind::FixedPoint);
            assert!(verify_criterion(&x, &r));
        }
        assert_eq!(criterion_check(&two_cycle(), 6).unwrap_err(), Error::FiniteShift);
        let split = build_from_forbidden(Alphabet::new(["a", "b"]).unwrap(), &[vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(criterion_check(&split, 6).unwrap_err(), Error::NotTransitive);
    }

    #[test]
    fn report_round_trips_through_json() {
        let x = shift(&["11"]);
        let r = criterion_check(&x, 4).unwrap();
        let back: CriterionReport = serde_json::from_str(&serde_json::to_string(&r).unwrap()).unwrap();
        assert_eq!(back, r);
        assert!(verify_criterion(&x, &back));
    }

    #[test]
    fn prox_full_shift_zero_one() {
        let x = shift(&[]);
        let out = prox_witness(&x, &[vec![0], vec![1]], 4, 64);
        match &out {
            ProxOutcome::Witnessed { m, target, points, .. } => {
                assert_eq!(*m, 1);
                assert_eq!(target, "00000");
                assert_eq!(points[0], PointRep::periodic(vec![0]).unwrap());
                assert_eq!(points[1], PointRep::new(vec![1], vec![0]).unwrap());
            }
            other => panic!("{other:?}"),
        }
        assert!(verify_prox(&[vec![0], vec![1]], 4, &out, &x));
    }

    #[test]
    fn prox_identical_tuple_at_zero() {
        let x = shift(&["11"]);
        let u = vec![0, 1, 0, 0, 1, 0];
        let out = prox_witness(&x, &[u.clone(), u.clone(), u.clone()], 4, 8);
        let ProxOutcome::Witnessed { m, image_diam, .. } = out else { panic!() };
        assert_eq!(m, 0);
        assert!(image_diam.is_zero());
    }

    #[test]
    fn prox_two_cycle_fails_for_good() {
        let x = two_cycle();
        let out = prox_witness(&x, &[vec![0, 1], vec![1, 0]], 0, 1 << 10);
        assert_eq!(out, ProxOutcome::Failed { exhausted: true });
    }

    #[test]
    fn density_is_full_on_golden_mean() {
        let x = shift(&["11"]);
        for n in [2, 3] {
            let r = prox_density_check(&x, n, 6, 1 << 14, 50, 7).unwrap();
            assert_eq!(r.witnessed, 50, "{r:?}");
        }
    }
}
