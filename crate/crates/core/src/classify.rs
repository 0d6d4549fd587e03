//! Three-valued chaos classification of shifts of finite type, with the
//! rule behind every positive verdict and an audit of the implication DAG.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::criterion::criterion_check;
use crate::decide::{self, fixed_points, period};
use crate::error::{Error, Result};
use crate::graph;
use crate::shift::{Alphabet, Edge, SftDocument, SftPresentation, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Tri {
    Yes,
    No,
    Unknown,
}

impl From<bool> for Tri {
    fn from(b: bool) -> Self {
        if b {
            Tri::Yes
        } else {
            Tri::No
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Flags {
    pub transitive: Tri,
    pub totally_transitive: Tri,
    pub weakly_mixing: Tri,
    pub devaney: Tri,
    pub densely_uniformly_chaotic: Tri,
    pub uniformly_chaotic: Tri,
    pub strong_liyorke: Tri,
    pub liyorke: Tri,
}

impl Flags {
    fn unknown() -> Self {
        Flags {
            transitive: Tri::Unknown,
            totally_transitive: Tri::Unknown,
            weakly_mixing: Tri::Unknown,
            devaney: Tri::Unknown,
            densely_uniformly_chaotic: Tri::Unknown,
            uniformly_chaotic: Tri::Unknown,
            strong_liyorke: Tri::Unknown,
            liyorke: Tri::Unknown,
        }
    }

    pub fn get(&self, name: &str) -> Option<Tri> {
        Some(match name {
            "transitive" => self.transitive,
            "totally_transitive" => self.totally_transitive,
            "weakly_mixing" => self.weakly_mixing,
            "devaney" => self.devaney,
            "densely_uniformly_chaotic" => self.densely_uniformly_chaotic,
            "uniformly_chaotic" => self.uniformly_chaotic,
            "strong_liyorke" => self.strong_liyorke,
            "liyorke" => self.liyorke,
            _ => return None,
        })
    }

    fn slot(&mut self, name: &str) -> &mut Tri {
        match name {
            "transitive" => &mut self.transitive,
            "totally_transitive" => &mut self.totally_transitive,
            "weakly_mixing" => &mut self.weakly_mixing,
            "devaney" => &mut self.devaney,
            "densely_uniformly_chaotic" => &mut self.densely_uniformly_chaotic,
            "uniformly_chaotic" => &mut self.uniformly_chaotic,
            "strong_liyorke" => &mut self.strong_liyorke,
            "liyorke" => &mut self.liyorke,
            _ => panic!("unknown flag {name}"),
        }
    }
}

/// `a ⇒ b` edges. Edges marked `true` start at weak mixing and only hold
/// for infinite spaces.
pub const IMPLICATIONS: [(&str, &str, bool); 8] = [
    ("weakly_mixing", "densely_uniformly_chaotic", true),
    ("densely_uniformly_chaotic", "uniformly_chaotic", false),
    ("uniformly_chaotic", "strong_liyorke", false),
    ("strong_liyorke", "liyorke", false),
    ("devaney", "uniformly_chaotic", false),
    ("weakly_mixing", "totally_transitive", false),
    ("totally_transitive", "transitive", false),
    ("devaney", "transitive", false),
];

const CHAOS_FLAGS: [&str; 5] = [
    "devaney",
    "densely_uniformly_chaotic",
    "uniformly_chaotic",
    "strong_liyorke",
    "liyorke",
];

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionSummary {
    pub d: usize,
    pub x0: SftDocument,
    pub x0_rule: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChaosReport {
    pub flags: Flags,
    pub infinite: Tri,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub period: Option<usize>,
    /// For every `yes` flag, the rule that set it.
    pub provenance: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub decomposition: Option<DecompositionSummary>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl ChaosReport {
    fn set_yes(&mut self, flag: &str, rule: &str) {
        let slot = self.flags.slot(flag);
        if *slot != Tri::Yes {
            *slot = Tri::Yes;
            self.provenance.insert(flag.to_string(), rule.to_string());
        }
    }

    fn propagate(&mut self) {
        let infinite = self.infinite != Tri::No;
        loop {
            let mut changed = false;
            for (a, b, needs_infinite) in IMPLICATIONS {
                if needs_infinite && !infinite {
                    continue;
                }
                if self.flags.get(a) == Some(Tri::Yes) && self.flags.get(b) != Some(Tri::Yes) {
                    self.set_yes(b, &format!("implied by {a}"));
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
    }
}

/// The first chaos rule that fires for a transitive infinite shift.
fn densely_rule(x: &SftPresentation, budget: usize) -> Result<Option<String>> {
    if !fixed_points(x).is_empty() {
        return Ok(Some("Cor(1): transitive and has a fixed point".into()));
    }
    if period(x)?.period == 1 {
        return Ok(Some("Cor(2): totally transitive with a periodic point".into()));
    }
    if decide::is_weakly_mixing(x).verdict {
        return Ok(Some("Cor(5): weakly mixing".into()));
    }
    let c = criterion_check(x, budget)?;
    if c.satisfied {
        let kind = c.witness_y.map(|y| format!("{:?}", y.kind)).unwrap_or_default();
        return Ok(Some(format!("criterion: X × Y transitive for a subsystem Y ({kind})")));
    }
    Ok(None)
}

pub fn classify(x: &SftPresentation, budget: usize) -> Result<ChaosReport> {
    if !x.is_surjective() {
        return Err(Error::NotSurjective(
            "some vertex has no incoming edge, so σ is not onto; chaos notions here assume a surjective map".into(),
        ));
    }
    let mut report = ChaosReport {
        flags: Flags::unknown(),
        infinite: x.is_infinite().into(),
        period: None,
        provenance: BTreeMap::new(),
        reason: None,
        decomposition: None,
        notes: Vec::new(),
    };
    let transitive = decide::is_transitive(x).verdict;
    let tt = decide::is_totally_transitive(x).verdict;
    let wm = decide::is_weakly_mixing(x).verdict;
    report.flags.transitive = transitive.into();
    report.flags.totally_transitive = tt.into();
    report.flags.weakly_mixing = wm.into();
    if transitive {
        report.provenance.insert("transitive".into(), "graph strongly connected".into());
        report.period = Some(period(x)?.period);
    }
    if tt {
        report.provenance.insert("totally_transitive".into(), "transitive with period 1".into());
    }
    if wm {
        report.provenance.insert("weakly_mixing".into(), "product graph strongly connected".into());
    }

    if report.infinite == Tri::No {
        for f in CHAOS_FLAGS {
            *report.flags.slot(f) = Tri::No;
        }
        report.reason = Some("FiniteShift".into());
        report.notes.push("X is finite: not Devaney chaotic and has no scrambled pairs".into());
        return Ok(report);
    }
    if !transitive {
        report.flags.devaney = Tri::No;
        report.notes.push("not transitive: no sufficient condition applies, chaos flags left unknown".into());
        return Ok(report);
    }

    if let Some(rule) = densely_rule(x, budget)? {
        report.set_yes("densely_uniformly_chaotic", &rule);
    } else if let Ok(dec) = decompose_periodic(x) {
        let x0_rule = if dec.x0.is_infinite() && decide::is_transitive(&dec.x0).verdict {
            densely_rule(&dec.x0, budget)?
        } else {
            None
        };
        if let Some(rule) = &x0_rule {
            report.set_yes(
                "uniformly_chaotic",
                &format!("Cor(6): (X_0, σ^{}) densely uniformly chaotic by {rule}", dec.d),
            );
            report
                .notes
                .push("Cor(6) transfers uniform chaos only; densely uniformly chaotic left unknown".into());
        }
        report.decomposition = Some(DecompositionSummary {
            d: dec.d,
            x0: SftDocument::from_presentation(&dec.x0),
            x0_rule,
        });
    }

    let dev = decide::dense_periodic_points(x, decide::DEFAULT_PROBE_LEN);
    report.flags.devaney = dev.verdict.into();
    if dev.verdict {
        report
            .provenance
            .insert("devaney".into(), "transitive, infinite, periodic points dense".into());
        report.set_yes("uniformly_chaotic", "Mai: Devaney chaos implies uniform chaos");
    }
    report.propagate();
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuditResult {
    pub ok: bool,
    pub violations: Vec<String>,
}

/// No flag may be `no` while one of its impliers is `yes`; every `yes`
/// chaos flag needs a recorded rule.
pub fn implication_audit(report: &ChaosReport) -> AuditResult {
    let mut violations = Vec::new();
    for (a, b, needs_infinite) in IMPLICATIONS {
        if needs_infinite && report.infinite == Tri::No {
            continue;
        }
        if report.flags.get(a) == Some(Tri::Yes) && report.flags.get(b) == Some(Tri::No) {
            violations.push(format!("{a} = yes but {b} = no"));
        }
    }
    for f in CHAOS_FLAGS {
        if report.flags.get(f) == Some(Tri::Yes) && !report.provenance.contains_key(f) {
            violations.push(format!("{f} = yes without provenance"));
        }
    }
    if report.infinite == Tri::No && CHAOS_FLAGS.iter().any(|f| report.flags.get(f) == Some(Tri::Yes)) {
        violations.push("chaos flag set on a finite shift".into());
    }
    AuditResult {
        ok: violations.is_empty(),
        violations,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub d: usize,
    /// Vertices of `X` forming the chosen cyclic class.
    pub class: Vec<usize>,
    pub x0: SftPresentation,
    /// Symbol word of `X` spelled by each `X_0` symbol.
    pub blocks: Vec<Word>,
}

/// `X_0`: paths of length `d` between vertices of cyclic class 0, each path
/// one symbol named by its labels joined with `.`.
pub fn decompose_periodic(x: &SftPresentation) -> Result<Decomposition> {
    if graph::strong_connectivity(&x.adjacency()).is_err() {
        return Err(Error::NotApplicable("X is not transitive".into()));
    }
    let cert = period(x)?;
    let d = cert.period;
    if d < 2 {
        return Err(Error::NotApplicable("period 1: no cyclic decomposition".into()));
    }
    let class: Vec<usize> = (0..x.num_vertices()).filter(|&v| cert.classes[v] == 0).collect();
    let mut paths: Vec<(usize, Word, usize)> = Vec::new();
    for &u in &class {
        let mut frontier: Vec<(usize, Word)> = vec![(u, Vec::new())];
        for _ in 0..d {
            frontier = frontier
                .into_iter()
                .flat_map(|(v, w)| {
                    x.out_edges(v).iter().map(move |&(s, t)| {
                        let mut w2 = w.clone();
                        w2.push(s);
                        (t, w2)
                    })
                })
                .collect();
        }
        paths.extend(frontier.into_iter().map(|(v, w)| (u, w, v)));
    }
    let name = |w: &Word| {
        w.iter()
            .map(|&s| x.alphabet().name(s))
            .collect::<Vec<_>>()
            .join(".")
    };
    let labels: BTreeSet<String> = paths.iter().map(|(_, w, _)| name(w)).collect();
    let alphabet = Alphabet::new(labels)?;
    let remap: BTreeMap<usize, usize> = class.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let names: Vec<String> = class.iter().map(|&v| x.vertex_name(v).to_string()).collect();
    let mut blocks: Vec<Word> = vec![Vec::new(); alphabet.len()];
    let edges: Vec<Edge> = paths
        .iter()
        .map(|(u, w, v)| {
            let s = alphabet.symbol(&name(w)).expect("registered");
            blocks[s as usize] = w.clone();
            Edge {
                source: remap[u],
                symbol: s,
                target: remap[v],
            }
        })
        .collect();
    let x0 = SftPresentation::from_graph(alphabet, names, edges, crate::shift::Origin::EdgeShift)?;
    let blocks = x0
        .alphabet()
        .names()
        .iter()
        .map(|n| n.split('.').map(|s| x.alphabet().symbol(s).expect("symbol")).collect())
        .collect();
    Ok(Decomposition { d, class, x0, blocks })
}

/// `language(X, len)` against `⋃_{j<d} {w[j..j+len] : w expands an X_0 word}`.
pub fn decomposition_language_check(x: &SftPresentation, dec: &Decomposition, len: usize) -> bool {
    let mut union: BTreeSet<Word> = BTreeSet::new();
    for j in 0..dec.d {
        let m = (j + len).div_ceil(dec.d);
        for w in dec.x0.language(m) {
            let expanded: Word = w.iter().flat_map(|&s| dec.blocks[s as usize].iter().copied()).collect();
            union.insert(expanded[j..j + len].to_vec());
        }
    }
    union == x.language(len).into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shift::{build_from_forbidden, Origin};

    fn shift(forbidden: &[&str]) -> SftPresentation {
        let a = Alphabet::new(["0", "1"]).unwrap();
        let f: Vec<Word> = forbidden.iter().map(|w| a.tokenize(w).unwrap()).collect();
        build_from_forbidden(a, &f).unwrap()
    }

    fn graph(alpha: &[&str], verts: &[&str], edges: &[(&str, &str, &str)]) -> SftPresentation {
        SftPresentation::from_named_edges(Alphabet::new(alpha.iter().copied()).unwrap(), verts, edges, Origin::EdgeShift)
            .unwrap()
    }

    fn block_cycle() -> SftPresentation {
        graph(
            &["a", "b", "c", "d"],
            &["A", "B"],
            &[("A", "a", "B"), ("A", "b", "B"), ("B", "c", "A"), ("B", "d", "A")],
        )
    }

    #[test]
    fn full_shift_everything_yes() {
        let r = classify(&shift(&[]), 6).unwrap();
        for f in ["transitive", "weakly_mixing", "devaney", "densely_uniformly_chaotic", "liyorke"] {
            assert_eq!(r.flags.get(f), Some(Tri::Yes), "{f}");
        }
        assert!(implication_audit(&r).ok);
    }

    #[test]
    fn golden_mean_via_fixed_point() {
        let r = classify(&shift(&["11"]), 6).unwrap();
        assert_eq!(r.flags.densely_uniformly_chaotic, Tri::Yes);
        assert!(r.provenance["densely_uniformly_chaotic"].starts_with("Cor(1)"));
        assert!(implication_audit(&r).ok);
    }

    #[test]
    fn finite_shift_is_degenerate() {
        let x = graph(&["a", "b"], &["p", "q"], &[("p", "a", "q"), ("q", "b", "p")]);
        let r = classify(&x, 6).unwrap();
        assert_eq!(r.reason.as_deref(), Some("FiniteShift"));
        for f in CHAOS_FLAGS {
            assert_eq!(r.flags.get(f), Some(Tri::No));
        }
        assert!(implication_audit(&r).ok);
    }

    #[test]
    fn non_surjective_rejected() {
        let x = shift(&["01", "11"]);
        assert!(matches!(classify(&x, 6), Err(Error::NotSurjective(_))));
    }

    #[test]
    fn period_two_goes_through_cor6() {
        let x = block_cycle();
        let r = classify(&x, 6).unwrap();
        assert_eq!(r.period, Some(2));
        assert_eq!(r.flags.weakly_mixing, Tri::No);
        assert_eq!(r.flags.densely_uniformly_chaotic, Tri::Unknown);
        assert_eq!(r.flags.uniformly_chaotic, Tri::Yes);
        let dec = r.decomposition.as_ref().unwrap();
        assert_eq!(dec.d, 2);
        assert!(implication_audit(&r).ok);
    }

    #[test]
    fn decomposition_of_block_cycle() {
        let x = block_cycle();
        let dec = decompose_periodic(&x).unwrap();
        assert_eq!(dec.d, 2);
        assert_eq!(dec.x0.num_vertices(), 1);
        assert_eq!(dec.x0.alphabet().len(), 4);
        assert!(!fixed_points(&dec.x0).is_empty());
        for len in 1..=8 {
            assert!(decomposition_language_check(&x, &dec, len));
        }
        assert!(matches!(decompose_periodic(&shift(&["11"])), Err(Error::NotApplicable(_))));
        let tri = graph(&["a", "b", "c"], &["A", "B", "C"], &[("A", "a", "B"), ("B", "b", "C"), ("C", "c", "A")]);
        let dec = decompose_periodic(&tri).unwrap();
        assert_eq!(dec.d, 3);
        assert!(!dec.x0.is_infinite());
    }

    #[test]
    fn audit_rejects_forgeries() {
        let mut r = classify(&shift(&[]), 6).unwrap();
        r.flags.liyorke = Tri::No;
        assert!(!implication_audit(&r).ok);
        let unknown = ChaosReport {
            flags: Flags::unknown(),
            infinite: Tri::Unknown,
            period: None,
            provenance: BTreeMap::new(),
            reason: None,
            decomposition: None,
            notes: vec![],
        };
        assert!(implication_audit(&unknown).ok);
    }
}
