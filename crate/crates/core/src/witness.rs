//! Explicit Li-Yorke pairs built from interleaved blocks, and Kronecker
//! times for finite point configurations.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::criterion::{criterion_check, SubsystemKind};
use crate::decide::fixed_points;
use crate::error::{Error, Result};
use crate::graph;
use crate::shift::{dist, Dist, PointRep, SftPresentation, Symbol, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Timed {
    pub time: usize,
    pub dist: Dist,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairWitness {
    pub x: PointRep,
    pub y: PointRep,
    /// `d(σ^m x, σ^m y)`.
    pub prox_times: Vec<Timed>,
    pub apart_times: Vec<Timed>,
    /// `max(d(σ^k x, x), d(σ^k y, y))`.
    pub recur_times: Vec<Timed>,
    pub horizon: usize,
}

fn pair_dist(x: &PointRep, y: &PointRep, m: usize) -> Dist {
    dist(&x.shift(m), &y.shift(m))
}

fn recur_dist(x: &PointRep, y: &PointRep, k: usize) -> Dist {
    dist(&x.shift(k), x).max(dist(&y.shift(k), y))
}

/// Vertex carrying a closed walk labeled `w`.
fn anchor(x: &SftPresentation, w: &[Symbol]) -> Option<usize> {
    (0..x.num_vertices()).find(|&q| {
        x.reach_from(&crate::vset::VertexSet::singleton(x.num_vertices(), q), w)
            .contains(q)
    })
}

/// The least power `w^j` carried by a closed walk, with its vertex. Some
/// `j <= |V|` always works when `w^∞` is a point of `x`.
fn anchored_power(x: &SftPresentation, w: &[Symbol]) -> Option<(Word, usize)> {
    (1..=x.num_vertices()).find_map(|j| {
        let z = w.repeat(j);
        anchor(x, &z).map(|q| (z, q))
    })
}

/// The cycle word `z` the blocks rest on, and its anchor vertex.
fn resting_cycle(x: &SftPresentation) -> Result<(Word, usize)> {
    if let Some(p) = fixed_points(x).first() {
        return Ok(anchored_power(x, p.period()).expect("periodic point closes a walk"));
    }
    let report = criterion_check(x, 6)?;
    let Some(y) = report.witness_y.filter(|_| report.satisfied) else {
        return Err(Error::HypothesisUnmet(
            "no fixed point and no subsystem Y with X × Y transitive within budget".into(),
        ));
    };
    let z = match y.kind {
        SubsystemKind::FixedPoint | SubsystemKind::PeriodicOrbit { .. } => {
            let p = &y.presentation;
            let mut w = Vec::new();
            let mut cur = 0;
            for _ in 0..p.num_vertices() {
                let (s, next) = p.out_edges(cur)[0];
                w.push(s);
                cur = next;
            }
            w.iter()
                .map(|&s| x.alphabet().symbol(p.alphabet().name(s)).expect("subsystem alphabet"))
                .collect()
        }
        _ => {
            let (s, next) = x.out_edges(0)[0];
            let mut w = vec![s];
            w.extend(x.shortest_edge_path(next, 0).expect("strongly connected").iter().map(|e| e.symbol));
            w
        }
    };
    Ok(anchored_power(x, &z).expect("periodic point closes a walk"))
}

/// Two closed walks at `q` of equal length with different labels, shortest
/// first, found by search over pairs of vertices.
fn split_walks(x: &SftPresentation, q: usize) -> Option<(Word, Word)> {
    let n = x.num_vertices();
    let idx = |u: usize, v: usize, d: bool| (u * n + v) * 2 + d as usize;
    let mut parent: Vec<Option<(usize, Symbol, Symbol)>> = vec![None; n * n * 2];
    let mut seen = vec![false; n * n * 2];
    let start = idx(q, q, false);
    let goal = idx(q, q, true);
    seen[start] = true;
    let mut queue = VecDeque::from([(q, q, false)]);
    while let Some((u, v, d)) = queue.pop_front() {
        if (u, v, d) == (q, q, true) {
            break;
        }
        for &(s, u2) in x.out_edges(u) {
            for &(t, v2) in x.out_edges(v) {
                let d2 = d || s != t;
                let i = idx(u2, v2, d2);
                if !seen[i] {
                    seen[i] = true;
                    parent[i] = Some((idx(u, v, d), s, t));
                    queue.push_back((u2, v2, d2));
                }
            }
        }
    }
    if !seen[goal] {
        return None;
    }
    let (mut a, mut b) = (Vec::new(), Vec::new());
    let mut cur = goal;
    while cur != start {
        let (prev, s, t) = parent[cur].expect("search tree");
        a.push(s);
        b.push(t);
        cur = prev;
    }
    a.reverse();
    b.reverse();
    Some(if a <= b { (a, b) } else { (b, a) })
}

/// A proximal, non-asymptotic pair up to `horizon`:
/// `x = a z^{r_1} a z^{r_2} a z^{r_3} ...` and `y = b z^{r_1} a z^{r_2} b z^{r_3} ...`
/// with doubling `r_i`, where `a`, `b` are distinct closed walks of equal
/// length and `z` a cycle at the same vertex. `index` varies `r_1`.
pub fn make_scrambled_pair(
    x: &SftPresentation,
    e_prox: u32,
    delta: Dist,
    horizon: usize,
    index: usize,
) -> Result<PairWitness> {
    graph::strong_connectivity(&x.adjacency())
        .map_err(|_| Error::HypothesisUnmet("X is not transitive".into()))?;
    if !x.is_infinite() {
        return Err(Error::HypothesisUnmet("X is finite".into()));
    }
    let (z, q) = resting_cycle(x)?;
    let (a, b) = split_walks(x, q).ok_or_else(|| Error::HypothesisUnmet("no two distinct loops at the anchor".into()))?;
    let split = a.iter().zip(&b).take_while(|(s, t)| s == t).count();
    let c = z.len();
    let need = (e_prox as usize + 1).saturating_sub(a.len());
    let r1 = need.div_ceil(c).max(1) + index;

    let (mut xs, mut ys) = (Vec::new(), Vec::new());
    let mut starts = Vec::new();
    let mut r = r1;
    let mut i = 1;
    while xs.len() <= horizon {
        starts.push(xs.len());
        xs.extend_from_slice(&a);
        ys.extend_from_slice(if i % 2 == 1 { &b } else { &a });
        for _ in 0..r {
            xs.extend_from_slice(&z);
            ys.extend_from_slice(&z);
        }
        r *= 2;
        i += 1;
    }
    let px = PointRep::new(xs, z.clone()).expect("nonempty cycle");
    let py = PointRep::new(ys, z).expect("nonempty cycle");

    let mut prox_times = Vec::new();
    let mut apart_times = Vec::new();
    let mut recur_times = Vec::new();
    for (j, &s) in starts.iter().enumerate() {
        let block = j + 1;
        if block % 2 == 1 {
            let m = s + split;
            if m <= horizon {
                apart_times.push(Timed {
                    time: m,
                    dist: pair_dist(&px, &py, m),
                });
            }
            if block >= 3 && s <= horizon {
                recur_times.push(Timed {
                    time: s,
                    dist: recur_dist(&px, &py, s),
                });
            }
        } else if s <= horizon {
            prox_times.push(Timed {
                time: s,
                dist: pair_dist(&px, &py, s),
            });
        }
    }
    let last_apart = apart_times.last().map_or(0, |t| t.time);
    prox_times.retain(|t| t.time < last_apart);
    apart_times.retain(|t| t.dist >= delta);
    if prox_times.is_empty() || apart_times.is_empty() {
        return Err(Error::InvalidArgument(format!(
            "horizon {horizon} too small for the requested proximality 2^-{e_prox}"
        )));
    }
    Ok(PairWitness {
        x: px,
        y: py,
        prox_times,
        apart_times,
        recur_times,
        horizon,
    })
}

pub fn make_scrambled_pairs(
    x: &SftPresentation,
    count: usize,
    e_prox: u32,
    delta: Dist,
    horizon: usize,
) -> Result<Vec<PairWitness>> {
    (0..count)
        .map(|i| make_scrambled_pair(x, e_prox, delta, horizon, i))
        .collect()
}

/// Every stored distance equals the recomputed one, and all times are
/// within the horizon.
pub fn verify_pair_witness(w: &PairWitness) -> bool {
    let within = |ts: &[Timed]| ts.iter().all(|t| t.time <= w.horizon);
    within(&w.prox_times)
        && within(&w.apart_times)
        && within(&w.recur_times)
        && w.prox_times.iter().all(|t| pair_dist(&w.x, &w.y, t.time) == t.dist)
        && w.apart_times.iter().all(|t| pair_dist(&w.x, &w.y, t.time) == t.dist)
        && w.recur_times.iter().all(|t| recur_dist(&w.x, &w.y, t.time) == t.dist)
}

/// Finite Li-Yorke shadow: distinct points, a time closer than `2^-e_prox`,
/// a time at least `delta` apart, and an apart time after every prox time.
pub fn li_yorke_check(w: &PairWitness, e_prox: u32, delta: Dist) -> bool {
    let last_prox = w.prox_times.iter().map(|t| t.time).max();
    let last_apart = w.apart_times.iter().filter(|t| t.dist >= delta).map(|t| t.time).max();
    w.x != w.y
        && verify_pair_witness(w)
        && w.prox_times.iter().any(|t| t.dist.lt_pow(e_prox))
        && matches!((last_prox, last_apart), (Some(p), Some(a)) if a > p)
}

/// Proximal at scale `2^-e`, simultaneously recurrent at that scale, and
/// apart by at least `2^-e` after the first prox time.
pub fn strong_liyorke_check(w: &PairWitness, e: u32) -> bool {
    if w.x == w.y || !verify_pair_witness(w) {
        return false;
    }
    let Some(first) = w.prox_times.iter().filter(|t| t.dist.lt_pow(e)).map(|t| t.time).min() else {
        return false;
    };
    w.recur_times.iter().any(|t| t.dist.lt_pow(e))
        && w.apart_times.iter().any(|t| t.time > first && t.dist.ge_pow(e))
}

/// Least `k` in `1..=horizon` with `d(σ^k x, h(x)) < 2^-e` for all `x ∈ K`.
pub fn kronecker_times(
    x: &SftPresentation,
    k: &[PointRep],
    h: &[PointRep],
    e: u32,
    horizon: usize,
) -> Result<Option<usize>> {
    if k.len() != h.len() {
        return Err(Error::InvalidArgument("K and h(K) differ in size".into()));
    }
    for (i, p) in k.iter().enumerate() {
        if k[..i].contains(p) {
            return Err(Error::InvalidArgument("points of K must be distinct".into()));
        }
        if !x.point_is_legal(p) {
            return Err(Error::InvalidArgument("point of K is not in X".into()));
        }
    }
    Ok((1..=horizon).find(|&t| k.iter().zip(h).all(|(p, q)| dist(&p.shift(t), q).lt_pow(e))))
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

    #[test]
    fn fixed_point_without_a_loop() {
        let a = Alphabet::new(["a", "b"]).unwrap();
        let x = SftPresentation::from_named_edges(
            a,
            &["p", "q"],
            &[("p", "a", "q"), ("q", "a", "p"), ("p", "b", "p")],
            Origin::EdgeShift,
        )
        .unwrap();
        let w = make_scrambled_pair(&x, 8, Dist::pow(1), 4096, 0).unwrap();
        assert!(x.point_is_legal(&w.x) && x.point_is_legal(&w.y));
        assert!(li_yorke_check(&w, 8, Dist::pow(1)));
    }

    #[test]
    fn full_shift_pair() {
        let x = shift(&[]);
        let w = make_scrambled_pair(&x, 8, Dist::pow(0), 4096, 0).unwrap();
        assert!(x.point_is_legal(&w.x) && x.point_is_legal(&w.y));
        assert!(verify_pair_witness(&w));
        assert!(li_yorke_check(&w, 8, Dist::pow(0)));
        assert!(w.apart_times.iter().all(|t| t.dist == Dist::pow(0)));
        assert!(strong_liyorke_check(&w, 4));
    }

    #[test]
    fn golden_mean_pair() {
        let x = shift(&["11"]);
        let w = make_scrambled_pair(&x, 6, Dist::pow(1), 4096, 3).unwrap();
        assert!(x.point_is_legal(&w.x) && x.point_is_legal(&w.y));
        assert!(li_yorke_check(&w, 6, Dist::pow(1)));
    }

    #[test]
    fn finite_shift_has_no_pairs() {
        assert!(matches!(
            make_scrambled_pair(&two_cycle(), 4, Dist::pow(0), 256, 0),
            Err(Error::HypothesisUnmet(_))
        ));
    }

    #[test]
    fn degenerate_pairs_fail_checks() {
        let x = shift(&[]);
        let mut w = make_scrambled_pair(&x, 4, Dist::pow(0), 1024, 0).unwrap();
        let same = PairWitness {
            y: w.x.clone(),
            ..w.clone()
        };
        assert!(!strong_liyorke_check(&same, 4));
        // an asymptotic pair: differ only at index 10
        let a = PointRep::new(vec![0; 10].into_iter().chain([1]).collect(), vec![0]).unwrap();
        let b = PointRep::periodic(vec![0]).unwrap();
        let asym = PairWitness {
            x: a.clone(),
            y: b.clone(),
            prox_times: vec![Timed {
                time: 11,
                dist: pair_dist(&a, &b, 11),
            }],
            apart_times: vec![],
            recur_times: vec![],
            horizon: 64,
        };
        assert!(!strong_liyorke_check(&asym, 4));
        w.prox_times[0].dist = Dist::pow(60);
        assert!(!verify_pair_witness(&w));
    }

    #[test]
    fn kronecker_examples() {
        let x = shift(&[]);
        let zero = PointRep::periodic(vec![0]).unwrap();
        assert_eq!(kronecker_times(&x, &[zero.clone()], &[zero.clone()], 5, 10).unwrap(), Some(1));

        let h1 = PointRep::periodic(vec![1]).unwrap();
        let x1 = PointRep::new(vec![0, 0, 0, 1, 1, 1, 1], vec![0]).unwrap();
        let x2 = PointRep::new(vec![1, 1, 1, 0, 0, 0, 0], vec![0]).unwrap();
        let k = kronecker_times(&x, &[x1.clone(), x2.clone()], &[h1.clone(), zero.clone()], 3, 20)
            .unwrap()
            .unwrap();
        assert_eq!(k, 3);
        assert!(dist(&x1.shift(k), &h1).lt_pow(3) && dist(&x2.shift(k), &zero).lt_pow(3));

        let c = two_cycle();
        let ab = PointRep::periodic(vec![0, 1]).unwrap();
        let ba = PointRep::periodic(vec![1, 0]).unwrap();
        assert_eq!(kronecker_times(&c, &[ab], &[ba], 1, 8).unwrap(), Some(1));
    }
}
