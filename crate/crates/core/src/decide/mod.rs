//! Graph-theoretic decisions for the dynamical hypotheses: transitivity,
//! period, total transitivity, weak mixing, periodic points, hitting times.

mod hitting;

pub use hitting::{filter_law_check, hit_mask, hitting_set, FilterLawVerdict, HittingSet, Tail};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{self, gcd, StrongConnectivity};
use crate::shift::{least_rotation, primitive_root_len, PointRep, SftPresentation, Word};

/// A `d`-coloring of the vertices that every edge advances by one, together
/// with two closed walks whose lengths have gcd `d`. Together these prove
/// the cycle-length gcd is exactly `d`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeriodCertificate {
    pub period: usize,
    pub classes: Vec<usize>,
    pub cycles: [Vec<usize>; 2],
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeriodicWitness {
    pub word: Word,
    pub point: PointRep,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    StronglyConnected {
        connectivity: StrongConnectivity,
    },
    Unreachable {
        from: String,
        to: String,
    },
    Period {
        connectivity: StrongConnectivity,
        period: PeriodCertificate,
    },
    ProductStronglyConnected {
        product_vertices: usize,
        connectivity: StrongConnectivity,
    },
    ProductUnreachable {
        from: String,
        to: String,
    },
    DensePeriodicPoints {
        connectivity: StrongConnectivity,
        probe_len: usize,
        points: Vec<PeriodicWitness>,
    },
    Finite,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecisionReport {
    pub property: String,
    pub verdict: bool,
    pub certificate: Certificate,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

fn connectivity(x: &SftPresentation) -> std::result::Result<StrongConnectivity, Certificate> {
    graph::strong_connectivity(&x.adjacency()).map_err(|(u, v)| Certificate::Unreachable {
        from: x.vertex_name(u).to_string(),
        to: x.vertex_name(v).to_string(),
    })
}

pub fn is_transitive(x: &SftPresentation) -> DecisionReport {
    let (verdict, certificate) = match connectivity(x) {
        Ok(c) => (true, Certificate::StronglyConnected { connectivity: c }),
        Err(c) => (false, c),
    };
    DecisionReport {
        property: "transitive".into(),
        verdict,
        certificate,
        notes: Vec::new(),
    }
}

fn concat_walk(base: &mut Vec<usize>, walk: &[usize]) {
    if base.is_empty() {
        base.extend_from_slice(walk);
    } else {
        base.extend_from_slice(&walk[1..]);
    }
}

/// The gcd of all cycle lengths, with certificate.
pub fn period(x: &SftPresentation) -> Result<PeriodCertificate> {
    connectivity(x).map_err(|_| Error::NotTransitive)?;
    let adj = x.adjacency();
    let rev = graph::reverse(&adj);
    let root = 0;
    let (level, parent) = graph::bfs(&adj, root);
    let (back, back_parent) = graph::bfs(&rev, root);
    let level: Vec<usize> = level.into_iter().map(|l| l.expect("strongly connected")).collect();

    let mut d = 0;
    for (u, succ) in adj.iter().enumerate() {
        for &v in succ {
            d = gcd(d, (level[u] + 1).abs_diff(level[v]));
        }
    }

    // closed walk root -> u -> v -> root for each edge, shortest legs
    let walk_through = |u: usize, v: usize| {
        let mut down = vec![u];
        let mut cur = u;
        while cur != root {
            cur = parent[cur].expect("bfs tree");
            down.push(cur);
        }
        down.reverse();
        let mut up = vec![v];
        let mut cur = v;
        while cur != root {
            cur = back_parent[cur].expect("reverse bfs tree");
            up.push(cur);
        }
        debug_assert_eq!(up.len() - 1, back[v].unwrap());
        down.extend(up);
        down
    };

    let mut walks = Vec::new();
    for (u, succ) in adj.iter().enumerate() {
        for &v in succ {
            walks.push(walk_through(u, v));
        }
    }
    walks.sort_by_key(Vec::len);
    let first = walks[0].clone();
    let a = first.len() - 1;
    let mut second: Vec<usize> = Vec::new();
    let mut g = a;
    for w in &walks[1..] {
        let c = w.len() - 1;
        let target = gcd(g, c);
        if target == g {
            continue;
        }
        let b = second.len().saturating_sub(1);
        let t = (0..=a)
            .find(|&t| gcd(a, b + t * c) == target)
            .expect("some multiple reaches the joint gcd");
        for _ in 0..t {
            concat_walk(&mut second, w);
        }
        g = target;
    }
    if second.is_empty() {
        second = first.clone();
    }
    debug_assert_eq!(gcd(a, second.len() - 1), d);
    Ok(PeriodCertificate {
        period: d,
        classes: level.iter().map(|l| l % d).collect(),
        cycles: [first, second],
    })
}

/// Independent check of a period certificate against the graph.
pub fn verify_period(x: &SftPresentation, cert: &PeriodCertificate) -> bool {
    let n = x.num_vertices();
    let d = cert.period;
    if d == 0 || cert.classes.len() != n {
        return false;
    }
    if !x
        .edges()
        .iter()
        .all(|e| cert.classes[e.target] == (cert.classes[e.source] + 1) % d)
    {
        return false;
    }
    let is_closed_walk = |w: &[usize]| {
        w.len() >= 2
            && w.first() == w.last()
            && w.iter().all(|&v| v < n)
            && w.windows(2)
                .all(|p| x.out_edges(p[0]).iter().any(|&(_, t)| t == p[1]))
    };
    cert.cycles.iter().all(|w| is_closed_walk(w))
        && gcd(cert.cycles[0].len() - 1, cert.cycles[1].len() - 1) == d
}

pub fn is_totally_transitive(x: &SftPresentation) -> DecisionReport {
    let note = "for shifts of finite type, total transitivity, topological mixing and weak mixing coincide".to_string();
    let c = match connectivity(x) {
        Ok(c) => c,
        Err(cert) => {
            return DecisionReport {
                property: "totally_transitive".into(),
                verdict: false,
                certificate: cert,
                notes: vec![note, "not transitive".into()],
            }
        }
    };
    let p = period(x).expect("strongly connected");
    DecisionReport {
        property: "totally_transitive".into(),
        verdict: p.period == 1,
        notes: vec![note, format!("period {}", p.period)],
        certificate: Certificate::Period {
            connectivity: c,
            period: p,
        },
    }
}

/// Decided on the product graph `X ⊗ X` directly; the folklore equivalence
/// with "transitive and aperiodic" is recorded as a cross-check note.
pub fn is_weakly_mixing(x: &SftPresentation) -> DecisionReport {
    let folklore = connectivity(x).is_ok() && period(x).map(|p| p.period == 1).unwrap_or(false);
    let (verdict, certificate) = match x.product(x) {
        Ok(p) => match graph::strong_connectivity(&p.adjacency()) {
            Ok(c) => (
                true,
                Certificate::ProductStronglyConnected {
                    product_vertices: p.num_vertices(),
                    connectivity: c,
                },
            ),
            Err((u, v)) => (
                false,
                Certificate::ProductUnreachable {
                    from: p.vertex_name(u).to_string(),
                    to: p.vertex_name(v).to_string(),
                },
            ),
        },
        Err(_) => (
            false,
            Certificate::ProductUnreachable {
                from: String::new(),
                to: String::new(),
            },
        ),
    };
    let agree = if verdict == folklore { "agrees" } else { "DISAGREES" };
    DecisionReport {
        property: "weakly_mixing".into(),
        verdict,
        certificate,
        notes: vec![format!(
            "cross-check: transitive and period 1 = {folklore}, {agree} with product-graph verdict"
        )],
    }
}

/// One point per periodic orbit of least period exactly `d`, represented by
/// the lexicographically least rotation of its period word.
pub fn periodic_points(x: &SftPresentation, d: usize) -> Vec<PointRep> {
    if d == 0 {
        return Vec::new();
    }
    x.language(d)
        .into_iter()
        .filter(|w| primitive_root_len(w) == d && least_rotation(w) == *w)
        .filter_map(|w| PointRep::periodic(w))
        .filter(|p| x.point_is_legal(p))
        .collect()
}

pub fn fixed_points(x: &SftPresentation) -> Vec<PointRep> {
    periodic_points(x, 1)
}

/// A purely periodic point whose period starts with `word`, closing the
/// path carrying `word` along a shortest return path.
pub fn periodic_point_through(x: &SftPresentation, word: &[crate::shift::Symbol]) -> Option<PointRep> {
    let path = x.path_labeled(word)?;
    let (start, end) = (path[0], *path.last().unwrap());
    let closing = x.shortest_edge_path(end, start)?;
    let mut period = word.to_vec();
    period.extend(closing.iter().map(|e| e.symbol));
    if period.is_empty() {
        // empty word at a vertex: close any cycle through it
        let e = x.out_edges(start)[0];
        let back = x.shortest_edge_path(e.1, start)?;
        period.push(e.0);
        period.extend(back.iter().map(|e| e.symbol));
    }
    PointRep::periodic(period)
}

pub const DEFAULT_PROBE_LEN: usize = 3;

/// Devaney: transitive, infinite, dense periodic points.
pub fn dense_periodic_points(x: &SftPresentation, probe_len: usize) -> DecisionReport {
    let property = "devaney".to_string();
    let c = match connectivity(x) {
        Ok(c) => c,
        Err(cert) => {
            return DecisionReport {
                property,
                verdict: false,
                certificate: cert,
                notes: vec!["not transitive".into()],
            }
        }
    };
    if !x.is_infinite() {
        return DecisionReport {
            property,
            verdict: false,
            certificate: Certificate::Finite,
            notes: vec!["periodic points are dense but X is finite: not Devaney chaotic (finite X)".into()],
        };
    }
    let points = (1..=probe_len)
        .flat_map(|l| x.language(l))
        .map(|w| {
            let point = periodic_point_through(x, &w).expect("strongly connected");
            PeriodicWitness { word: w, point }
        })
        .collect();
    DecisionReport {
        property,
        verdict: true,
        certificate: Certificate::DensePeriodicPoints {
            connectivity: c,
            probe_len,
            points,
        },
        notes: vec!["irreducible presentation: every legal word closes up to a periodic point".into()],
    }
}

/// Re-checks the certificate of a positive report. Negative reports are
/// accepted as long as their certificate is consistent with the verdict kind.
pub fn verify_report(x: &SftPresentation, report: &DecisionReport) -> bool {
    if !report.verdict {
        return true;
    }
    let adj = x.adjacency();
    match &report.certificate {
        Certificate::StronglyConnected { connectivity } => connectivity.verify(&adj),
        Certificate::Period {
            connectivity,
            period,
        } => connectivity.verify(&adj) && verify_period(x, period) && period.period == 1,
        Certificate::ProductStronglyConnected { connectivity, .. } => x
            .product(x)
            .map(|p| connectivity.verify(&p.adjacency()))
            .unwrap_or(false),
        Certificate::DensePeriodicPoints {
            connectivity,
            probe_len,
            points,
        } => {
            let covered: std::collections::BTreeSet<&Word> = points.iter().map(|p| &p.word).collect();
            connectivity.verify(&adj)
                && x.is_infinite()
                && (1..=*probe_len).all(|l| x.language(l).iter().all(|w| covered.contains(w)))
                && points.iter().all(|p| {
                    p.point.is_periodic()
                        && x.point_is_legal(&p.point)
                        && p.point.prefix(p.word.len()) == p.word
                })
        }
        Certificate::Unreachable { .. } | Certificate::ProductUnreachable { .. } | Certificate::Finite => false,
    }
}

/// All basic reports for the `analyze` command.
pub fn analyze(x: &SftPresentation) -> Vec<DecisionReport> {
    vec![
        is_transitive(x),
        is_totally_transitive(x),
        is_weakly_mixing(x),
        dense_periodic_points(x, DEFAULT_PROBE_LEN),
    ]
}
