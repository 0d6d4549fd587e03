//! Finite-depth nested cylinder families: each level refines the previous
//! one, returns into its parents after a common time `k_n`, and (optionally)
//! is routed into one common cylinder after a time `t_n`.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::decide::hit_mask;
use crate::error::{Error, Result};
use crate::graph;
use crate::shift::{dist, overlay, radius_len, Dist, PointRep, SftPresentation, Symbol, Word};
use crate::vset::VertexSet;

const MAX_HORIZON: usize = 1 << 14;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Clause {
    Mod { m: usize, r: usize },
    AtLeast(usize),
}

/// A set `S` of positive integers given by a conjunction of clauses
/// `k%M==R` and `k>=C`. The empty conjunction (`all`) is every `k >= 1`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct SFilter {
    clauses: Vec<Clause>,
}

impl SFilter {
    pub fn all() -> Self {
        SFilter::default()
    }

    pub fn contains(&self, k: usize) -> bool {
        k >= 1
            && self.clauses.iter().all(|c| match *c {
                Clause::Mod { m, r } => k % m == r,
                Clause::AtLeast(c) => k >= c,
            })
    }
}

impl FromStr for SFilter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() || s == "all" {
            return Ok(SFilter::all());
        }
        let bad = || Error::InvalidArgument(format!("cannot parse S filter {s:?}"));
        let num = |t: &str| t.trim().parse::<usize>().map_err(|_| bad());
        let mut clauses = Vec::new();
        for part in s.split("&&") {
            let part: String = part.chars().filter(|c| !c.is_whitespace()).collect();
            let rest = part.strip_prefix('k').ok_or_else(bad)?;
            if let Some(c) = rest.strip_prefix(">=") {
                clauses.push(Clause::AtLeast(num(c)?));
            } else if let Some(modr) = rest.strip_prefix('%') {
                let (m, r) = modr.split_once("==").ok_or_else(bad)?;
                let (m, r) = (num(m)?, num(r)?);
                if m == 0 || r >= m {
                    return Err(bad());
                }
                clauses.push(Clause::Mod { m, r });
            } else {
                return Err(bad());
            }
        }
        Ok(SFilter { clauses })
    }
}

impl fmt::Display for SFilter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.clauses.is_empty() {
            return f.write_str("all");
        }
        let parts: Vec<String> = self
            .clauses
            .iter()
            .map(|c| match c {
                Clause::Mod { m, r } => format!("k%{m}=={r}"),
                Clause::AtLeast(c) => format!("k>={c}"),
            })
            .collect();
        f.write_str(&parts.join(" && "))
    }
}

impl Serialize for SFilter {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for SFilter {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Debug, Default)]
pub struct ConstructOptions {
    pub proximal: bool,
    pub transitive_leaves: bool,
    pub s: SFilter,
}

/// One level of the family. Words `2i` and `2i+1` (0-based) are the
/// children of parent word `i`; any further words are extras added for
/// coverage and have no parent.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stage {
    pub n: usize,
    pub words: Vec<String>,
    /// The unrefined cylinders whose common return time is `k_n`.
    pub seeds: Vec<String>,
    pub k_n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<String>,
    pub net_radius: Dist,
}

impl Stage {
    pub fn a_n(&self) -> usize {
        self.words.len()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LeafPoint {
    pub index: usize,
    pub point: PointRep,
    /// Word indices of the ancestors at levels `N, N-1, ...` as far as the
    /// chain of children goes.
    pub chain: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionResult {
    pub condition: String,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageCheck {
    pub n: usize,
    pub conditions: Vec<ConditionResult>,
}

impl StageCheck {
    pub fn all_pass(&self) -> bool {
        self.conditions.iter().all(|c| c.pass)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstructionCertificate {
    pub levels: usize,
    pub proximal: bool,
    pub transitive_leaves: bool,
    pub s_filter: SFilter,
    pub stages: Vec<Stage>,
    pub leaf_points: Vec<LeafPoint>,
    pub checks: Vec<StageCheck>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

fn is_prefix(p: &[Symbol], w: &[Symbol]) -> bool {
    w.len() >= p.len() && w[..p.len()] == *p
}

fn is_factor(y: &[Symbol], w: &[Symbol]) -> bool {
    y.is_empty() || w.windows(y.len()).any(|s| s == y)
}

fn lcp(a: &[Symbol], b: &[Symbol]) -> usize {
    a.iter().zip(b).take_while(|(x, y)| x == y).count()
}

fn net_radius(x: &SftPresentation, words: &[Word], r: usize) -> Dist {
    x.language(r)
        .iter()
        .map(|y| {
            let best = words.iter().map(|w| lcp(y, w)).max().unwrap_or(0);
            if best >= r {
                Dist::pow(r as u32)
            } else {
                Dist::pow(best as u32)
            }
        })
        .max()
        .unwrap_or(Dist::ZERO)
}

fn stuck(level: usize, reason: impl Into<String>) -> Error {
    Error::ConstructionStuck {
        level,
        reason: reason.into(),
    }
}

/// Two extensions of `p` of a common length at least `min_len`, preferring
/// ones whose `r`-prefix is not yet in `covered`.
fn two_children(
    x: &SftPresentation,
    p: &[Symbol],
    min_len: usize,
    r: usize,
    covered: &BTreeSet<Word>,
) -> Option<[Word; 2]> {
    let cap = min_len + 2 * x.num_vertices() + 8;
    for len in min_len..=cap {
        let mut template: Vec<Option<Symbol>> = p.iter().map(|&s| Some(s)).collect();
        template.resize(len, None);
        let exts = x.matching(&template, Some(4096));
        if exts.len() < 2 {
            continue;
        }
        let fresh = |w: &Word, taken: &BTreeSet<Word>| !covered.contains(&w[..r]) && !taken.contains(&w[..r]);
        let none = BTreeSet::new();
        let first = exts.iter().find(|w| fresh(w, &none)).unwrap_or(&exts[0]).clone();
        let taken = BTreeSet::from([first[..r].to_vec()]);
        let second = exts
            .iter()
            .find(|w| **w != first && fresh(w, &taken))
            .or_else(|| exts.iter().find(|w| **w != first))
            .expect("two extensions")
            .clone();
        let mut pair = [first, second];
        pair.sort();
        return Some(pair);
    }
    None
}

/// Least `k >= n` in `S` with `k ∈ N([w],[w])` for every seed.
fn return_time(x: &SftPresentation, seeds: &[Word], n: usize, s: &SFilter) -> Option<usize> {
    let mut horizon = 64.max(2 * n);
    loop {
        let masks: Vec<Vec<bool>> = seeds
            .iter()
            .map(|w| hit_mask(x, std::slice::from_ref(w), std::slice::from_ref(w), horizon))
            .collect();
        if let Some(k) = (n..=horizon).find(|&k| s.contains(k) && masks.iter().all(|m| m[k])) {
            return Some(k);
        }
        if horizon >= MAX_HORIZON {
            return None;
        }
        horizon *= 2;
    }
}

/// Least `t >= 1` and lexicographically least `τ` of length `r` such that
/// every word can be continued to read `τ` at offset `t`.
fn routing_time(x: &SftPresentation, words: &[Word], r: usize) -> Option<(usize, Word)> {
    let targets = x.language(r);
    let starts: Vec<VertexSet> = targets.iter().map(|t| x.starts(t)).collect();
    let mut sets: Vec<Option<VertexSet>> = vec![None; words.len()];
    for t in 1..=MAX_HORIZON {
        for (i, w) in words.iter().enumerate() {
            if t == w.len() {
                sets[i] = Some(x.reach(w));
            } else if t > w.len() {
                sets[i] = sets[i].as_ref().map(|s| x.step_any(s));
            }
        }
        for (tau, st) in targets.iter().zip(&starts) {
            let ok = words.iter().zip(&sets).all(|(w, set)| match set {
                Some(set) => set.intersects(st),
                None => overlay(w, tau, t).is_some_and(|tm| x.lex_least_matching(&tm).is_some()),
            });
            if ok {
                return Some((t, tau.clone()));
            }
        }
    }
    None
}

/// Extends `w` so that it contains every word of `factors`, each appended
/// after the shortest possible gap.
fn append_factors(x: &SftPresentation, w: &[Symbol], factors: &[Word]) -> Option<Word> {
    let mut w = w.to_vec();
    let max_gap = 2 * x.num_vertices() + 2;
    for y in factors {
        if is_factor(y, &w) {
            continue;
        }
        w = (0..=max_gap).find_map(|g| x.lex_least_matching(&overlay(&w, y, w.len() + g)?))?;
    }
    Some(w)
}

pub fn build_stages(x: &SftPresentation, levels: usize, opts: &ConstructOptions) -> Result<ConstructionCertificate> {
    graph::strong_connectivity(&x.adjacency()).map_err(|_| Error::NotTransitive)?;
    if !x.is_infinite() {
        return Err(Error::FiniteShift);
    }
    let mut stages: Vec<Stage> = Vec::new();
    let mut parents: Vec<Word> = vec![Vec::new()];
    let mut parent_links: Vec<Vec<Option<usize>>> = Vec::new();

    for n in 1..=levels {
        let r = radius_len(n);
        let mut covered: BTreeSet<Word> = BTreeSet::new();
        let mut seeds: Vec<Word> = Vec::new();
        let mut links: Vec<Option<usize>> = Vec::new();
        for (i, p) in parents.iter().enumerate() {
            let min_len = (p.len() + 1).max(r);
            let pair = two_children(x, p, min_len, r, &covered)
                .ok_or_else(|| stuck(n, format!("cylinder {} has no two extensions", x.render(p))))?;
            for c in pair {
                covered.insert(c[..r].to_vec());
                seeds.push(c);
                links.push(Some(i));
            }
        }
        for y in x.language(r) {
            if links.len() >= 2 * parents.len() + n {
                break;
            }
            if !covered.contains(&y) {
                covered.insert(y.clone());
                seeds.push(y);
                links.push(None);
            }
        }

        let k = return_time(x, &seeds, n, &opts.s)
            .ok_or_else(|| stuck(n, format!("no common return time in S up to {MAX_HORIZON}")))?;
        let mut words: Vec<Word> = seeds
            .iter()
            .zip(&links)
            .map(|(c, link)| match link {
                Some(i) => x
                    .lex_least_matching(&overlay(c, &parents[*i], k).expect("child extends parent"))
                    .ok_or_else(|| stuck(n, format!("{} cannot return into its parent", x.render(c)))),
                None => Ok(c.clone()),
            })
            .collect::<Result<_>>()?;

        let mut t_n = None;
        let mut target = None;
        if opts.proximal {
            let (t, tau) = routing_time(x, &words, r)
                .ok_or_else(|| stuck(n, "no common routing time for proximality"))?;
            words = words
                .iter()
                .map(|w| x.lex_least_matching(&overlay(w, &tau, t).expect("routable")).expect("routable"))
                .collect();
            t_n = Some(t);
            target = Some(x.render(&tau));
        }
        if opts.transitive_leaves {
            let factors = x.language(r);
            words = words
                .iter()
                .map(|w| append_factors(x, w, &factors).ok_or_else(|| stuck(n, "cannot append covering factors")))
                .collect::<Result<_>>()?;
        }

        stages.push(Stage {
            n,
            net_radius: net_radius(x, &words, r),
            words: words.iter().map(|w| x.render(w)).collect(),
            seeds: seeds.iter().map(|w| x.render(w)).collect(),
            k_n: k,
            t_n,
            target,
        });
        parent_links.push(links);
        parents = words;
    }

    let mut leaf_points = Vec::new();
    if levels >= 1 {
        for (index, w) in parents.iter().enumerate() {
            let mut chain = vec![index];
            let mut level = levels;
            let mut cur = index;
            while level >= 2 {
                match parent_links[level - 1][cur] {
                    Some(p) => {
                        chain.push(p);
                        cur = p;
                        level -= 1;
                    }
                    None => break,
                }
            }
            leaf_points.push(LeafPoint {
                index,
                point: x.completion(w).expect("legal word"),
                chain,
            });
        }
    }

    let mut cert = ConstructionCertificate {
        levels,
        proximal: opts.proximal,
        transitive_leaves: opts.transitive_leaves,
        s_filter: opts.s.clone(),
        stages,
        leaf_points,
        checks: Vec::new(),
        notes: Vec::new(),
    };
    if opts.transitive_leaves {
        cert.notes.push(
            "leaf points are eventually periodic and never transitive; words contain every word of length r_n as a factor instead"
                .into(),
        );
    }
    cert.checks = verify_certificate(x, &cert)?;
    Ok(cert)
}

fn parse_all(x: &SftPresentation, words: &[String]) -> Result<Vec<Word>> {
    words.iter().map(|w| x.parse_word(w)).collect()
}

fn result(condition: &str, pass: bool, detail: impl Into<String>) -> ConditionResult {
    ConditionResult {
        condition: condition.into(),
        pass,
        detail: if pass { String::new() } else { detail.into() },
    }
}

/// Checks conditions (1)–(7), (8) when `transitive_leaves`, and the
/// membership `k_n ∈ S ∩ ⋂ N([seed],[seed])`, by direct word arithmetic.
pub fn verify_stage(
    x: &SftPresentation,
    stage: &Stage,
    parent: Option<&Stage>,
    s: &SFilter,
    proximal: bool,
    transitive_leaves: bool,
) -> Result<StageCheck> {
    let n = stage.n;
    let r = radius_len(n);
    let words = parse_all(x, &stage.words)?;
    let seeds = parse_all(x, &stage.seeds)?;
    let parents = match parent {
        Some(p) => parse_all(x, &p.words)?,
        None => vec![Vec::new()],
    };
    let a_prev = parents.len();
    let a = words.len();
    let mut out = Vec::new();

    out.push(result(
        "1",
        2 * a_prev <= a && a <= 2 * a_prev + n,
        format!("a_n = {a}, a_(n-1) = {a_prev}"),
    ));

    let short = words.iter().find(|w| w.len() < r || !x.is_legal(w));
    out.push(result(
        "2",
        short.is_none(),
        format!("word {:?} shorter than {r} or illegal", short.map(|w| x.render(w))),
    ));

    let mut clash = None;
    'pairs: for i in 0..a {
        for j in 0..a {
            if i != j && is_prefix(&words[i], &words[j]) {
                clash = Some((i, j));
                break 'pairs;
            }
        }
    }
    out.push(result("3", clash.is_none(), format!("words {clash:?} are prefix-comparable")));

    let orphan = (0..2 * a_prev).find(|&j| j >= a || !is_prefix(&parents[j / 2], &words[j]));
    out.push(result("4", orphan.is_none(), format!("word {orphan:?} does not extend its parent")));

    let uncovered = x
        .language(r)
        .into_iter()
        .find(|y| !words.iter().any(|w| is_prefix(y, w)));
    let radius = net_radius(x, &words, r);
    let budget_full = a == 2 * a_prev + n;
    let five = match &uncovered {
        None => result("5", true, ""),
        Some(y) if budget_full && stage.net_radius == radius => ConditionResult {
            condition: "5".into(),
            pass: true,
            detail: format!(
                "budget-limited: a_n = {a} leaves [{}] uncovered; recorded net radius {radius}",
                x.render(y)
            ),
        },
        Some(y) => result(
            "5",
            false,
            format!(
                "no word within 1/{n} of [{}]; recorded net radius {}, actual {radius}",
                x.render(y),
                stage.net_radius
            ),
        ),
    };
    out.push(five);

    let k = stage.k_n;
    let bad_return = (0..2 * a_prev.min(a / 2)).find(|&j| {
        let p = &parents[j / 2];
        let w = &words[j];
        !(w.len() >= k + p.len() && w[k..k + p.len()] == p[..])
    });
    out.push(result(
        "6",
        bad_return.is_none(),
        format!("σ^{k} of word {bad_return:?} is not inside its parent"),
    ));

    if proximal {
        let ok = match (stage.t_n, &stage.target) {
            (Some(t), Some(tau)) => {
                let tau = x.parse_word(tau)?;
                tau.len() >= r && words.iter().all(|w| w.len() >= t + tau.len() && w[t..t + tau.len()] == tau[..])
            }
            _ => false,
        };
        out.push(result("7", ok, "images under σ^t_n do not share a prefix of length r_n"));
    }
    if transitive_leaves {
        let factors = x.language(r);
        let ok = words.iter().all(|w| factors.iter().all(|y| is_factor(y, w)));
        out.push(result("8", ok, "some word misses a length-r_n factor"));
    }

    let seeds_ok = seeds.len() == a
        && seeds.iter().zip(&words).all(|(s, w)| is_prefix(s, w))
        && seeds.iter().all(|w| {
            overlay(w, w, k).is_some_and(|t| x.lex_least_matching(&t).is_some())
        });
    out.push(result(
        "k_n",
        k >= n && s.contains(k) && seeds_ok,
        format!("k_n = {k} not in S ∩ [n,∞) ∩ ⋂ N(V,V)"),
    ));

    Ok(StageCheck { n, conditions: out })
}

/// Per-stage checks followed by the leaf, rigidity and proximality checks.
pub fn verify_certificate(x: &SftPresentation, cert: &ConstructionCertificate) -> Result<Vec<StageCheck>> {
    let mut checks = Vec::new();
    if cert.stages.len() != cert.levels {
        return Err(Error::InvalidArgument("stage count does not match levels".into()));
    }
    for (i, stage) in cert.stages.iter().enumerate() {
        if stage.n != i + 1 {
            return Err(Error::InvalidArgument(format!("stage {} out of order", stage.n)));
        }
        let parent = i.checked_sub(1).map(|j| &cert.stages[j]);
        checks.push(verify_stage(x, stage, parent, &cert.s_filter, cert.proximal, cert.transitive_leaves)?);
    }
    if cert.levels == 0 {
        return Ok(checks);
    }
    let n = cert.levels;
    let mut leaf = Vec::new();
    let stages: Vec<Vec<Word>> = cert
        .stages
        .iter()
        .map(|s| parse_all(x, &s.words))
        .collect::<Result<_>>()?;
    let chains_ok = cert.leaf_points.len() == stages[n - 1].len()
        && cert.leaf_points.iter().enumerate().all(|(i, lp)| {
            lp.index == i
                && lp.chain.first() == Some(&i)
                && lp.chain.len() <= n
                && x.point_is_legal(&lp.point)
                && lp.chain.iter().enumerate().all(|(depth, &j)| {
                    let level = n - depth;
                    stages[level - 1]
                        .get(j)
                        .is_some_and(|w| lp.point.prefix(w.len()) == *w)
                        && (depth == 0 || lp.chain[depth - 1] / 2 == j)
                })
        });
    leaf.push(result("leaf_chain", chains_ok, "a leaf point leaves its ancestor chain"));

    let points: Vec<PointRep> = cert.leaf_points.iter().map(|l| l.point.clone()).collect();
    let distinct = points.iter().collect::<BTreeSet<_>>().len() == points.len();
    leaf.push(result("leaf_distinct", distinct, "leaf points coincide"));

    for j in 1..n {
        let k = composed_return_time(cert, j);
        let descendants: Vec<PointRep> = cert
            .leaf_points
            .iter()
            .filter(|l| l.chain.len() > n - j)
            .map(|l| l.point.clone())
            .collect();
        let e = floor_log2(j);
        leaf.push(result(
            &format!("rigidity_{j}"),
            rigidity_check(&descendants, k, e),
            format!("some leaf is not within 2^-{e} of itself after {k} steps"),
        ));
    }
    if cert.proximal {
        let t = cert.stages[n - 1].t_n.unwrap_or(0);
        let e = floor_log2(n);
        leaf.push(result(
            "proximality",
            proximality_check(&points, t, e),
            format!("σ^{t} of the leaves has diameter ≥ 2^-{e}"),
        ));
    }
    checks.push(StageCheck {
        n,
        conditions: leaf,
    });
    Ok(checks)
}

fn floor_log2(n: usize) -> u32 {
    radius_len(n) as u32 - 1
}

/// `k_{j+1} + ... + k_N`: a leaf descending from a level-`j` word by
/// children returns into that word after this many steps.
pub fn composed_return_time(cert: &ConstructionCertificate, j: usize) -> usize {
    cert.stages.iter().filter(|s| s.n > j).map(|s| s.k_n).sum()
}

/// `d(σ^k x, x) < 2^-e` for every point.
pub fn rigidity_check(points: &[PointRep], k: usize, e: u32) -> bool {
    points.iter().all(|p| dist(&p.shift(k), p).lt_pow(e))
}

/// `diam σ^t(points) < 2^-e`.
pub fn proximality_check(points: &[PointRep], t: usize, e: u32) -> bool {
    let images: Vec<PointRep> = points.iter().map(|p| p.shift(t)).collect();
    images
        .iter()
        .all(|a| images.iter().all(|b| dist(a, b).lt_pow(e)))
}
