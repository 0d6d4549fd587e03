//! Enveloping monoids of self-maps of finite sets: ideals, idempotents,
//! groups and proximality, checked exhaustively for small sets.

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Map = Vec<usize>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteDynSys {
    pub labels: Vec<String>,
    pub map: Map,
}

impl FiniteDynSys {
    pub fn new(map: Map) -> Result<Self> {
        let n = map.len();
        if n == 0 || map.iter().any(|&t| t >= n) {
            return Err(Error::InvalidArgument("map must be a total self-map of a nonempty set".into()));
        }
        Ok(FiniteDynSys {
            labels: (1..=n).map(|i| i.to_string()).collect(),
            map,
        })
    }

    /// Parses `"1:2,2:3,3:2"`. Points are the labels left of `:` in order.
    pub fn parse(text: &str) -> Result<Self> {
        let mut pairs = Vec::new();
        for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (a, b) = part
                .split_once(':')
                .ok_or_else(|| Error::Parse(format!("expected `x:y`, got {part:?}")))?;
            pairs.push((a.trim().to_string(), b.trim().to_string()));
        }
        let labels: Vec<String> = pairs.iter().map(|(a, _)| a.clone()).collect();
        if labels.is_empty() {
            return Err(Error::Parse("empty map".into()));
        }
        if labels.iter().collect::<BTreeSet<_>>().len() != labels.len() {
            return Err(Error::Parse("point mapped twice".into()));
        }
        let index = |s: &str| {
            labels
                .iter()
                .position(|l| l == s)
                .ok_or_else(|| Error::Parse(format!("{s} is not in the domain")))
        };
        let map = pairs.iter().map(|(_, b)| index(b)).collect::<Result<Map>>()?;
        Ok(FiniteDynSys { labels, map })
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn is_surjective(&self) -> bool {
        self.map.iter().collect::<BTreeSet<_>>().len() == self.len()
    }

    /// Whether `T` permutes a single cycle through all points.
    pub fn is_single_orbit(&self) -> bool {
        let mut cur = 0;
        for step in 1..=self.len() {
            cur = self.map[cur];
            if cur == 0 {
                return step == self.len();
            }
        }
        false
    }
}

fn compose(f: &[usize], g: &[usize]) -> Map {
    g.iter().map(|&x| f[x]).collect()
}

/// The maps `T^n` (`n >= 1`, plus the identity when requested), with
/// `table[i][j]` the index of `elements[i] ∘ elements[j]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnvMonoid {
    pub elements: Vec<Map>,
    pub table: Vec<Vec<usize>>,
    /// `T^{preperiod + period} = T^{preperiod}`, least such pair.
    pub preperiod: usize,
    pub period: usize,
    /// `powers[n-1]` is the index of `T^n` for `1 <= n < preperiod + period`.
    pub powers: Vec<usize>,
    pub identity: Option<usize>,
}

impl EnvMonoid {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn idempotents(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.mul(i, i) == i).collect()
    }
}

pub fn enveloping(sys: &FiniteDynSys, with_identity: bool) -> EnvMonoid {
    let mut elements: Vec<Map> = Vec::new();
    let mut index: HashMap<Map, usize> = HashMap::new();
    let mut cur = sys.map.clone();
    let mut n = 1;
    let (preperiod, period) = loop {
        if let Some(&j) = index.get(&cur) {
            break (j + 1, n - (j + 1));
        }
        index.insert(cur.clone(), elements.len());
        elements.push(cur.clone());
        cur = compose(&sys.map, &cur);
        n += 1;
    };
    let powers: Vec<usize> = (0..elements.len()).collect();
    let id: Map = (0..sys.len()).collect();
    let identity = if with_identity {
        Some(*index.entry(id.clone()).or_insert_with(|| {
            elements.push(id);
            elements.len() - 1
        }))
    } else {
        index.get(&id).copied()
    };
    let table = elements
        .iter()
        .map(|f| {
            elements
                .iter()
                .map(|g| index[&compose(f, g)])
                .collect()
        })
        .collect();
    EnvMonoid {
        elements,
        table,
        preperiod,
        period,
        powers,
        identity,
    }
}

/// `{T^n : n >= preperiod}`: the elements recurring in the iterate sequence.
pub fn adherence(env: &EnvMonoid) -> Vec<usize> {
    env.powers[env.preperiod - 1..].to_vec()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Group {
    pub idempotent: usize,
    pub elements: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinimalIdeal {
    pub elements: Vec<usize>,
    pub idempotents: Vec<usize>,
    pub groups: Vec<Group>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdealStructure {
    pub minimal_ideals: Vec<MinimalIdeal>,
}

fn left_ideal(env: &EnvMonoid, p: usize) -> BTreeSet<usize> {
    (0..env.len()).map(|q| env.mul(q, p)).collect()
}

pub fn ideal_structure(env: &EnvMonoid) -> IdealStructure {
    let ideals: BTreeSet<BTreeSet<usize>> = (0..env.len()).map(|p| left_ideal(env, p)).collect();
    let minimal: Vec<&BTreeSet<usize>> = ideals
        .iter()
        .filter(|i| !ideals.iter().any(|j| j != *i && j.is_subset(i)))
        .collect();
    let minimal_ideals = minimal
        .into_iter()
        .map(|ideal| {
            let idempotents: Vec<usize> = ideal.iter().copied().filter(|&v| env.mul(v, v) == v).collect();
            let groups = idempotents
                .iter()
                .map(|&v| Group {
                    idempotent: v,
                    elements: ideal.iter().map(|&p| env.mul(v, p)).collect::<BTreeSet<_>>().into_iter().collect(),
                })
                .collect();
            MinimalIdeal {
                elements: ideal.iter().copied().collect(),
                idempotents,
                groups,
            }
        })
        .collect();
    IdealStructure { minimal_ideals }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProximalPair {
    pub x: usize,
    pub x_prime: usize,
    /// An element equalizing the pair.
    pub witness: usize,
    /// A minimal ideal all of whose elements equalize the pair.
    pub ideal: usize,
}

/// All unordered pairs `x < x'` with `p x = p x'` for some `p ∈ E`.
pub fn proximal_pairs(sys: &FiniteDynSys, env: &EnvMonoid, ideals: &IdealStructure) -> Vec<ProximalPair> {
    let n = sys.len();
    let mut out = Vec::new();
    for x in 0..n {
        for x2 in x + 1..n {
            let Some(w) = (0..env.len()).find(|&p| env.elements[p][x] == env.elements[p][x2]) else {
                continue;
            };
            let ideal = ideals
                .minimal_ideals
                .iter()
                .position(|i| i.elements.iter().all(|&p| env.elements[p][x] == env.elements[p][x2]))
                .unwrap_or(usize::MAX);
            out.push(ProximalPair {
                x,
                x_prime: x2,
                witness: w,
                ideal,
            });
        }
    }
    out
}

/// Independent oracle: orbits of `x` and `x'` merge within `|X|` steps.
pub fn orbits_merge(sys: &FiniteDynSys, x: usize, x2: usize) -> bool {
    let (mut a, mut b) = (x, x2);
    for _ in 0..sys.len() {
        a = sys.map[a];
        b = sys.map[b];
        if a == b {
            return true;
        }
    }
    false
}

/// `P[x]` from the pair scan; for a single periodic orbit it is also
/// compared against `{v x : v idempotent in a minimal ideal}`.
pub fn proximal_cell(sys: &FiniteDynSys, env: &EnvMonoid, x: usize) -> Result<Vec<usize>> {
    let cell: Vec<usize> = (0..sys.len())
        .filter(|&y| y == x || (0..env.len()).any(|p| env.elements[p][x] == env.elements[p][y]))
        .collect();
    if sys.is_single_orbit() {
        let ideals = ideal_structure(env);
        let via: BTreeSet<usize> = ideals
            .minimal_ideals
            .iter()
            .flat_map(|i| i.idempotents.iter().map(|&v| env.elements[v][x]))
            .collect();
        if via.into_iter().collect::<Vec<_>>() != cell {
            return Err(Error::InvalidArgument("proximal cell disagrees with idempotent images".into()));
        }
    }
    Ok(cell)
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LawReport {
    pub checked: Vec<String>,
    pub violations: Vec<String>,
}

impl LawReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }

    fn check(&mut self, law: &str, pass: bool, detail: impl FnOnce() -> String) {
        if !self.checked.iter().any(|c| c == law) {
            self.checked.push(law.to_string());
        }
        if !pass {
            self.violations.push(format!("{law}: {}", detail()));
        }
    }
}

fn is_group(env: &EnvMonoid, g: &Group) -> bool {
    let set: BTreeSet<usize> = g.elements.iter().copied().collect();
    let v = g.idempotent;
    set.contains(&v)
        && g.elements.iter().all(|&a| {
            env.mul(v, a) == a
                && env.mul(a, v) == a
                && g.elements.iter().all(|&b| set.contains(&env.mul(a, b)))
                && g.elements.iter().any(|&b| env.mul(a, b) == v && env.mul(b, a) == v)
        })
}

/// Idempotent existence, the ideal laws `pv = p`, group structure of `vI`,
/// partition of `I` by the `vI`, cross-ideal idempotent pairing, and (for
/// `|E| <= 6`) an idempotent in every subsemigroup.
pub fn verify_semigroup_laws(env: &EnvMonoid, ideals: &IdealStructure) -> LawReport {
    let mut r = LawReport::default();
    r.check("idempotent", !env.idempotents().is_empty(), || "E has no idempotent".into());
    for (k, ideal) in ideals.minimal_ideals.iter().enumerate() {
        let set: BTreeSet<usize> = ideal.elements.iter().copied().collect();
        r.check(
            "left_ideal",
            (0..env.len()).all(|q| ideal.elements.iter().all(|&p| set.contains(&env.mul(q, p)))),
            || format!("ideal {k} not closed under left multiplication"),
        );
        r.check("idempotent_in_ideal", !ideal.idempotents.is_empty(), || format!("ideal {k} has no idempotent"));
        for &v in &ideal.idempotents {
            for &p in &ideal.elements {
                r.check("2a", env.mul(p, v) == p, || format!("p={p} v={v}: pv != p"));
            }
        }
        for g in &ideal.groups {
            r.check("2b", is_group(env, g), || format!("vI for v={} is not a group", g.idempotent));
        }
        let mut cover: Vec<usize> = ideal.groups.iter().flat_map(|g| g.elements.iter().copied()).collect();
        cover.sort_unstable();
        r.check("2c", cover == ideal.elements, || format!("the vI do not partition ideal {k}"));
    }
    for (a, i) in ideals.minimal_ideals.iter().enumerate() {
        for (b, j) in ideals.minimal_ideals.iter().enumerate() {
            if a == b {
                continue;
            }
            for &v in &i.idempotents {
                let partners: Vec<usize> = j
                    .idempotents
                    .iter()
                    .copied()
                    .filter(|&w| env.mul(v, w) == w && env.mul(w, v) == v)
                    .collect();
                r.check("3", partners.len() == 1, || format!("v={v} has {} partners in ideal {b}", partners.len()));
            }
        }
    }
    if env.len() <= 6 {
        let m = env.len();
        for mask in 1u32..(1 << m) {
            let members: Vec<usize> = (0..m).filter(|&i| mask >> i & 1 == 1).collect();
            let closed = members
                .iter()
                .all(|&a| members.iter().all(|&b| mask >> env.mul(a, b) & 1 == 1));
            if closed {
                r.check("subsemigroup_idempotent", members.iter().any(|&v| env.mul(v, v) == v), || {
                    format!("subsemigroup {members:?} has no idempotent")
                });
            }
        }
    }
    r
}

/// All checks for one system, including the proximality oracle and the
/// adherence/ideal comparison.
pub fn check_system(sys: &FiniteDynSys, with_identity: bool) -> LawReport {
    let env = enveloping(sys, with_identity);
    let ideals = ideal_structure(&env);
    let mut r = verify_semigroup_laws(&env, &ideals);
    let pairs = proximal_pairs(sys, &env, &ideals);
    let prox: BTreeSet<(usize, usize)> = pairs.iter().map(|p| (p.x, p.x_prime)).collect();
    for x in 0..sys.len() {
        for y in x + 1..sys.len() {
            r.check("4", prox.contains(&(x, y)) == orbits_merge(sys, x, y), || {
                format!("pair ({x},{y}) semigroup and orbit-merging disagree")
            });
        }
    }
    r.check("4_ideal", pairs.iter().all(|p| p.ideal != usize::MAX), || {
        "a proximal pair is not equalized by a whole minimal ideal".into()
    });
    let adh: BTreeSet<usize> = adherence(&env).into_iter().collect();
    let union: BTreeSet<usize> = ideals.minimal_ideals.iter().flat_map(|i| i.elements.iter().copied()).collect();
    r.check(
        "adherence_left_ideal",
        (0..env.len()).all(|q| adh.iter().all(|&p| adh.contains(&env.mul(q, p)))),
        || "adherence is not a left ideal".into(),
    );
    if !with_identity {
        r.check("adherence_is_kernel", adh == union, || "adherence differs from the minimal ideals".into());
    }
    if sys.is_surjective() {
        r.check("distal", prox.is_empty(), || "a permutation has a proximal pair".into());
        r.check("group", ideals.minimal_ideals.len() == 1 && ideals.minimal_ideals[0].elements.len() == env.len(), || {
            "E of a permutation is not a group".into()
        });
    }
    if sys.is_single_orbit() {
        for x in 0..sys.len() {
            r.check("5", proximal_cell(sys, &env, x).is_ok(), || format!("P[{x}] mismatch"));
        }
    }
    r
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepReport {
    pub max_size: usize,
    pub systems: usize,
    pub per_size: Vec<(usize, usize)>,
    pub laws_checked: Vec<String>,
    pub violations: Vec<String>,
}

/// Every self-map of `{0..n}` for `1 <= n <= max_size`.
pub fn sweep(max_size: usize, with_identity: bool) -> SweepReport {
    let mut systems = 0;
    let mut per_size = Vec::new();
    let mut laws: BTreeSet<String> = BTreeSet::new();
    let mut violations = Vec::new();
    for n in 1..=max_size {
        let total = n.pow(n as u32);
        for code in 0..total {
            let mut c = code;
            let map: Map = (0..n)
                .map(|_| {
                    let t = c % n;
                    c /= n;
                    t
                })
                .collect();
            let sys = FiniteDynSys::new(map.clone()).expect("valid map");
            let r = check_system(&sys, with_identity);
            laws.extend(r.checked);
            violations.extend(r.violations.into_iter().map(|v| format!("{map:?}: {v}")));
        }
        systems += total;
        per_size.push((n, total));
    }
    SweepReport {
        max_size,
        systems,
        per_size,
        laws_checked: laws.into_iter().collect(),
        violations,
    }
}

/// Full JSON-ready analysis of one system.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EllisReport {
    pub system: FiniteDynSys,
    pub surjective: bool,
    pub monoid: EnvMonoid,
    pub adherence: Vec<usize>,
    pub ideals: IdealStructure,
    pub idempotents: Vec<usize>,
    pub proximal_pairs: Vec<ProximalPair>,
    pub laws: LawReport,
}

pub fn analyze_system(sys: &FiniteDynSys, with_identity: bool) -> EllisReport {
    let monoid = enveloping(sys, with_identity);
    let ideals = ideal_structure(&monoid);
    EllisReport {
        system: sys.clone(),
        surjective: sys.is_surjective(),
        adherence: adherence(&monoid),
        idempotents: monoid.idempotents(),
        proximal_pairs: proximal_pairs(sys, &monoid, &ideals),
        laws: check_system(sys, with_identity),
        ideals,
        monoid,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sys(text: &str) -> FiniteDynSys {
        FiniteDynSys::parse(text).unwrap()
    }

    #[test]
    fn two_element_monoid() {
        let s = sys("1:2,2:3,3:2");
        let e = enveloping(&s, false);
        assert_eq!(e.elements, vec![vec![1, 2, 1], vec![2, 1, 2]]);
        assert_eq!((e.preperiod, e.period), (1, 2));
        assert_eq!(e.mul(0, 0), 1);
        assert_eq!(e.mul(1, 1), 1);
        assert_eq!(e.mul(1, 0), 0);
        assert_eq!(adherence(&e), vec![0, 1]);
        let ideals = ideal_structure(&e);
        assert_eq!(ideals.minimal_ideals.len(), 1);
        let i = &ideals.minimal_ideals[0];
        assert_eq!(i.elements, vec![0, 1]);
        assert_eq!(i.idempotents, vec![1]);
        assert_eq!(i.groups[0].elements, vec![0, 1]);
        let pairs = proximal_pairs(&s, &e, &ideals);
        assert_eq!(pairs.len(), 1);
        assert_eq!((pairs[0].x, pairs[0].x_prime), (0, 2));
        assert_eq!(e.elements[pairs[0].witness][0], e.elements[pairs[0].witness][2]);
        assert_eq!(proximal_cell(&s, &e, 0).unwrap(), vec![0, 2]);
        assert!(check_system(&s, false).ok());
    }

    #[test]
    fn permutations() {
        let id = FiniteDynSys::new(vec![0, 1, 2, 3]).unwrap();
        let e = enveloping(&id, false);
        assert_eq!(e.len(), 1);
        assert_eq!(e.identity, Some(0));
        let c = sys("1:2,2:3,3:1");
        let e = enveloping(&c, false);
        assert_eq!(e.len(), 3);
        let ideals = ideal_structure(&e);
        assert_eq!(ideals.minimal_ideals[0].elements.len(), 3);
        assert_eq!(ideals.minimal_ideals[0].idempotents, vec![e.identity.unwrap()]);
        assert!(proximal_pairs(&c, &e, &ideals).is_empty());
        assert_eq!(proximal_cell(&c, &e, 1).unwrap(), vec![1]);
    }

    #[test]
    fn transient_into_fixed_point() {
        let s = sys("1:2,2:3,3:3");
        let e = enveloping(&s, false);
        let adh = adherence(&e);
        assert_eq!(adh.len(), 1);
        assert_eq!(e.elements[adh[0]], vec![2, 2, 2]);
        let ideals = ideal_structure(&e);
        assert_eq!(ideals.minimal_ideals[0].elements, adh);
        assert_eq!(proximal_pairs(&s, &e, &ideals).len(), 3);
        assert_eq!(proximal_cell(&s, &e, 0).unwrap(), vec![0, 1, 2]);
    }

    #[test]
    fn identity_flag_adds_unit() {
        let s = sys("1:2,2:3,3:3");
        let e = enveloping(&s, true);
        assert_eq!(e.len(), 3);
        assert!(check_system(&s, true).ok());
    }

    #[test]
    fn parse_errors() {
        assert!(FiniteDynSys::parse("1:2").is_err());
        assert!(FiniteDynSys::parse("1:1,1:1").is_err());
        assert!(FiniteDynSys::parse("").is_err());
    }

    #[test]
    fn sweep_up_to_four() {
        let r = sweep(4, false);
        assert_eq!(r.systems, 256 + 27 + 4 + 1);
        assert!(r.violations.is_empty(), "{:?}", r.violations);
    }
}
