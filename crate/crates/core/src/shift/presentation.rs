use std::collections::{BTreeSet, HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use super::alphabet::{Alphabet, Symbol, Word};
use super::point::PointRep;
use crate::error::{Error, Result};
use crate::graph;
use crate::vset::VertexSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Edge {
    pub source: usize,
    pub symbol: Symbol,
    pub target: usize,
}

/// How a presentation came about. Products, power classes and subsystems
/// are labeled graphs and carry `EdgeShift`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Origin {
    VertexShift,
    EdgeShift,
    ForbiddenWords { max_len: usize },
}

/// A labeled directed graph whose infinite paths, read through their labels,
/// are the points of a one-sided shift.
///
/// Vertices are kept sorted by name and every retained vertex has an
/// outgoing edge, so every finite path extends to an infinite one and a word
/// is legal iff some path carries it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SftPresentation {
    alphabet: Alphabet,
    vertices: Vec<String>,
    edges: Vec<Edge>,
    origin: Origin,
    surjective: bool,
    out: Vec<Vec<(Symbol, usize)>>,
    inc: Vec<Vec<(Symbol, usize)>>,
}

impl SftPresentation {
    /// Builds from indexed edges, trims to the forward-essential part and
    /// canonicalizes vertex order.
    pub fn from_graph(
        alphabet: Alphabet,
        vertices: Vec<String>,
        edges: impl IntoIterator<Item = Edge>,
        origin: Origin,
    ) -> Result<Self> {
        let n = vertices.len();
        let mut uniq = vertices.clone();
        uniq.sort();
        uniq.dedup();
        if uniq.len() != n {
            return Err(Error::Parse("duplicate vertex names".into()));
        }
        let edges: Vec<Edge> = edges.into_iter().collect();
        for e in &edges {
            if e.source >= n || e.target >= n {
                return Err(Error::Parse("edge endpoint out of range".into()));
            }
            if e.symbol as usize >= alphabet.len() {
                return Err(Error::Parse("edge symbol out of range".into()));
            }
        }

        let mut alive = vec![true; n];
        loop {
            let mut has_out = vec![false; n];
            for e in &edges {
                if alive[e.source] && alive[e.target] {
                    has_out[e.source] = true;
                }
            }
            let mut changed = false;
            for v in 0..n {
                if alive[v] && !has_out[v] {
                    alive[v] = false;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        let mut kept: Vec<usize> = (0..n).filter(|&v| alive[v]).collect();
        if kept.is_empty() {
            return Err(Error::EmptyShift);
        }
        kept.sort_by(|&a, &b| vertices[a].cmp(&vertices[b]));
        let mut remap = vec![usize::MAX; n];
        for (new, &old) in kept.iter().enumerate() {
            remap[old] = new;
        }
        let names: Vec<String> = kept.iter().map(|&v| vertices[v].clone()).collect();
        let mut new_edges: Vec<Edge> = edges
            .iter()
            .filter(|e| alive[e.source] && alive[e.target])
            .map(|e| Edge {
                source: remap[e.source],
                symbol: e.symbol,
                target: remap[e.target],
            })
            .collect();
        new_edges.sort();
        new_edges.dedup();

        let m = names.len();
        let mut out = vec![Vec::new(); m];
        let mut inc = vec![Vec::new(); m];
        for e in &new_edges {
            out[e.source].push((e.symbol, e.target));
            inc[e.target].push((e.symbol, e.source));
        }
        for list in inc.iter_mut() {
            list.sort();
        }
        let surjective = inc.iter().all(|l| !l.is_empty());
        Ok(SftPresentation {
            alphabet,
            vertices: names,
            edges: new_edges,
            origin,
            surjective,
            out,
            inc,
        })
    }

    /// Builds from `(source, symbol, target)` name triples.
    pub fn from_named_edges<S: AsRef<str>>(
        alphabet: Alphabet,
        vertices: &[S],
        edges: &[(S, S, S)],
        origin: Origin,
    ) -> Result<Self> {
        let names: Vec<String> = vertices.iter().map(|v| v.as_ref().to_string()).collect();
        let index: HashMap<&str, usize> = names
            .iter()
            .enumerate()
            .map(|(i, v)| (v.as_str(), i))
            .collect();
        let lookup = |v: &str| {
            index
                .get(v)
                .copied()
                .ok_or_else(|| Error::UnknownVertex(v.to_string()))
        };
        let mut indexed = Vec::with_capacity(edges.len());
        for (u, s, v) in edges {
            let symbol = alphabet
                .symbol(s.as_ref())
                .ok_or_else(|| Error::UnknownSymbol(s.as_ref().to_string()))?;
            indexed.push(Edge {
                source: lookup(u.as_ref())?,
                symbol,
                target: lookup(v.as_ref())?,
            });
        }
        Self::from_graph(alphabet, names, indexed, origin)
    }

    /// The shift consisting of the single periodic orbit of `word`, presented
    /// as a cycle on `|word|` vertices named `o0, o1, ...`.
    pub fn cycle(alphabet: Alphabet, word: &[Symbol]) -> Result<Self> {
        if word.is_empty() {
            return Err(Error::EmptyWord);
        }
        let d = word.len();
        let width = (d - 1).to_string().len();
        let names = (0..d).map(|i| format!("o{i:0width$}")).collect();
        let edges = (0..d).map(|i| Edge {
            source: i,
            symbol: word[i],
            target: (i + 1) % d,
        });
        Self::from_graph(alphabet, names, edges, Origin::EdgeShift)
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertex_name(&self, v: usize) -> &str {
        &self.vertices[v]
    }

    pub fn vertex_index(&self, name: &str) -> Option<usize> {
        self.vertices
            .binary_search_by(|n| n.as_str().cmp(name))
            .ok()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn out_edges(&self, v: usize) -> &[(Symbol, usize)] {
        &self.out[v]
    }

    pub fn in_edges(&self, v: usize) -> &[(Symbol, usize)] {
        &self.inc[v]
    }

    pub fn origin(&self) -> &Origin {
        &self.origin
    }

    /// True iff every vertex has an incoming edge.
    pub fn is_surjective(&self) -> bool {
        self.surjective
    }

    pub fn first_source_vertex(&self) -> Option<usize> {
        (0..self.num_vertices()).find(|&v| self.inc[v].is_empty())
    }

    pub fn parse_word(&self, text: &str) -> Result<Word> {
        self.alphabet.tokenize(text)
    }

    pub fn render(&self, word: &[Symbol]) -> String {
        self.alphabet.render(word)
    }

    /// Unlabeled successor lists (deduplicated).
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        self.out
            .iter()
            .map(|l| {
                let mut s: Vec<usize> = l.iter().map(|&(_, t)| t).collect();
                s.sort_unstable();
                s.dedup();
                s
            })
            .collect()
    }

    pub fn all(&self) -> VertexSet {
        VertexSet::full(self.num_vertices())
    }

    pub fn empty_set(&self) -> VertexSet {
        VertexSet::empty(self.num_vertices())
    }

    /// Successors of `set` along edges of any label.
    pub fn step_any(&self, set: &VertexSet) -> VertexSet {
        let mut next = self.empty_set();
        for v in set.iter() {
            for &(_, t) in &self.out[v] {
                next.insert(t);
            }
        }
        next
    }

    /// Successors of `set` along `s`-labeled edges.
    pub fn step(&self, set: &VertexSet, s: Symbol) -> VertexSet {
        let mut next = self.empty_set();
        for v in set.iter() {
            for &(sym, t) in &self.out[v] {
                if sym == s {
                    next.insert(t);
                }
            }
        }
        next
    }

    /// Predecessors of `set` along edges labeled `s` (any label if `None`).
    pub fn step_back(&self, set: &VertexSet, s: Option<Symbol>) -> VertexSet {
        let mut prev = self.empty_set();
        for v in set.iter() {
            for &(sym, p) in &self.inc[v] {
                if s.map_or(true, |s| s == sym) {
                    prev.insert(p);
                }
            }
        }
        prev
    }

    pub fn reach_from(&self, set: &VertexSet, word: &[Symbol]) -> VertexSet {
        let mut cur = set.clone();
        for &s in word {
            if cur.is_empty() {
                break;
            }
            cur = self.step(&cur, s);
        }
        cur
    }

    /// End vertices of paths labeled `word`, starting anywhere.
    pub fn reach(&self, word: &[Symbol]) -> VertexSet {
        self.reach_from(&self.all(), word)
    }

    /// Start vertices of paths labeled `word`.
    pub fn starts(&self, word: &[Symbol]) -> VertexSet {
        let mut cur = self.all();
        for &s in word.iter().rev() {
            cur = self.step_back(&cur, Some(s));
        }
        cur
    }

    pub fn is_legal(&self, word: &[Symbol]) -> bool {
        !self.reach(word).is_empty()
    }

    /// Symbols readable from some vertex of `set`, ascending.
    pub fn symbols_from(&self, set: &VertexSet) -> Vec<Symbol> {
        let mut syms: Vec<Symbol> = set
            .iter()
            .flat_map(|v| self.out[v].iter().map(|&(s, _)| s))
            .collect();
        syms.sort_unstable();
        syms.dedup();
        syms
    }

    /// Legal words of length `len`, lexicographically ordered.
    pub fn language(&self, len: usize) -> Vec<Word> {
        self.matching(&vec![None; len], None)
    }

    fn back_sets(&self, template: &[Option<Symbol>]) -> Vec<VertexSet> {
        let mut sets = vec![self.all(); template.len() + 1];
        for i in (0..template.len()).rev() {
            sets[i] = self.step_back(&sets[i + 1], template[i]);
        }
        sets
    }

    /// Legal words agreeing with `template` wherever it is `Some`, in
    /// lexicographic order, at most `limit` of them.
    pub fn matching(&self, template: &[Option<Symbol>], limit: Option<usize>) -> Vec<Word> {
        let back = self.back_sets(template);
        let mut out = Vec::new();
        if back[0].is_empty() {
            return out;
        }
        let mut word = Vec::with_capacity(template.len());
        self.matching_rec(template, &back, back[0].clone(), &mut word, limit, &mut out);
        out
    }

    fn matching_rec(
        &self,
        template: &[Option<Symbol>],
        back: &[VertexSet],
        set: VertexSet,
        word: &mut Word,
        limit: Option<usize>,
        out: &mut Vec<Word>,
    ) {
        if limit.is_some_and(|l| out.len() >= l) {
            return;
        }
        let i = word.len();
        if i == template.len() {
            out.push(word.clone());
            return;
        }
        let candidates = match template[i] {
            Some(s) => vec![s],
            None => self.symbols_from(&set),
        };
        for s in candidates {
            let mut next = self.step(&set, s);
            next.intersect_with(&back[i + 1]);
            if next.is_empty() {
                continue;
            }
            word.push(s);
            self.matching_rec(template, back, next, word, limit, out);
            word.pop();
            if limit.is_some_and(|l| out.len() >= l) {
                return;
            }
        }
    }

    /// Lexicographically least legal word matching `template`.
    pub fn lex_least_matching(&self, template: &[Option<Symbol>]) -> Option<Word> {
        let back = self.back_sets(template);
        let mut set = back[0].clone();
        if set.is_empty() {
            return None;
        }
        let mut word = Vec::with_capacity(template.len());
        for (i, t) in template.iter().enumerate() {
            let candidates = match t {
                Some(s) => vec![*s],
                None => self.symbols_from(&set),
            };
            let (s, next) = candidates.into_iter().find_map(|s| {
                let mut next = self.step(&set, s);
                next.intersect_with(&back[i + 1]);
                (!next.is_empty()).then_some((s, next))
            })?;
            word.push(s);
            set = next;
        }
        Some(word)
    }

    /// The lexicographically least point of the cylinder `[word]`.
    pub fn completion(&self, word: &[Symbol]) -> Option<PointRep> {
        let mut set = self.reach(word);
        if set.is_empty() {
            return None;
        }
        let mut seen: HashMap<VertexSet, usize> = HashMap::new();
        let mut ext = Vec::new();
        loop {
            if let Some(&start) = seen.get(&set) {
                let mut pre = word.to_vec();
                pre.extend_from_slice(&ext[..start]);
                return PointRep::new(pre, ext[start..].to_vec());
            }
            seen.insert(set.clone(), ext.len());
            let s = *self
                .symbols_from(&set)
                .first()
                .expect("trimmed presentation has no dead ends");
            ext.push(s);
            set = self.step(&set, s);
        }
    }

    /// Whether `x` is the label sequence of some infinite path.
    pub fn point_is_legal(&self, x: &PointRep) -> bool {
        let mut set = self.reach(x.preperiod());
        let mut seen = BTreeSet::new();
        while !set.is_empty() {
            if !seen.insert(set.clone()) {
                return true;
            }
            set = self.reach_from(&set, x.period());
        }
        false
    }

    /// The canonical countable dense set: completions of all legal words in
    /// shortlex order, duplicates dropped. Returns the first `n` (fewer only
    /// if the shift is finite).
    pub fn dense_points(&self, n: usize) -> Vec<PointRep> {
        let mut out: Vec<PointRep> = Vec::new();
        let mut seen = BTreeSet::new();
        let max_len = n + 2 * self.num_vertices() + 2;
        for len in 1..=max_len {
            for w in self.language(len) {
                let p = self.completion(&w).expect("legal word");
                if seen.insert(p.clone()) {
                    out.push(p);
                    if out.len() == n {
                        return out;
                    }
                }
            }
        }
        out
    }

    /// Whether the shift has infinitely many points.
    ///
    /// Decided on the subset automaton: the number of legal words of length
    /// `L` is bounded iff every cyclic component is a simple cycle and no
    /// cyclic component reaches another.
    pub fn is_infinite(&self) -> bool {
        let mut states: Vec<VertexSet> = vec![self.all()];
        let mut index: HashMap<VertexSet, usize> = HashMap::new();
        index.insert(self.all(), 0);
        let mut trans: Vec<Vec<usize>> = Vec::new();
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            let set = states[i].clone();
            let mut succ = Vec::new();
            for s in self.symbols_from(&set) {
                let next = self.step(&set, s);
                let j = *index.entry(next.clone()).or_insert_with(|| {
                    states.push(next);
                    queue.push_back(states.len() - 1);
                    states.len() - 1
                });
                succ.push(j);
            }
            if trans.len() <= i {
                trans.resize(i + 1, Vec::new());
            }
            trans[i] = succ;
        }
        trans.resize(states.len(), Vec::new());

        let (count, comp) = graph::scc(&trans);
        let mut size = vec![0usize; count];
        let mut internal = vec![0usize; count];
        for (u, succ) in trans.iter().enumerate() {
            size[comp[u]] += 1;
            for &v in succ {
                if comp[u] == comp[v] {
                    internal[comp[u]] += 1;
                }
            }
        }
        let cyclic: Vec<bool> = (0..count).map(|c| internal[c] > 0).collect();
        if (0..count).any(|c| internal[c] > size[c]) {
            return true;
        }
        // components are numbered sinks first, so successors have lower ids
        let mut below = vec![false; count];
        for c in 0..count {
            for (u, succ) in trans.iter().enumerate() {
                if comp[u] != c {
                    continue;
                }
                for &v in succ {
                    let d = comp[v];
                    if d != c && (cyclic[d] || below[d]) {
                        below[c] = true;
                    }
                }
            }
            if cyclic[c] && below[c] {
                return true;
            }
        }
        false
    }

    /// The tensor product: pairs of vertices, pairs of edges, labels `(a,b)`.
    pub fn product(&self, other: &SftPresentation) -> Result<SftPresentation> {
        let mut pair_names: BTreeSet<String> = BTreeSet::new();
        let label = |a: Symbol, b: Symbol| {
            format!("({},{})", self.alphabet.name(a), other.alphabet.name(b))
        };
        for e in &self.edges {
            for f in &other.edges {
                pair_names.insert(label(e.symbol, f.symbol));
            }
        }
        let alphabet = Alphabet::new(pair_names)?;
        let m = other.num_vertices();
        let mut names = Vec::with_capacity(self.num_vertices() * m);
        for u in &self.vertices {
            for v in &other.vertices {
                names.push(format!("({u},{v})"));
            }
        }
        let mut edges = Vec::with_capacity(self.edges.len() * other.edges.len());
        for e in &self.edges {
            for f in &other.edges {
                edges.push(Edge {
                    source: e.source * m + f.source,
                    symbol: alphabet
                        .symbol(&label(e.symbol, f.symbol))
                        .expect("pair label registered"),
                    target: e.target * m + f.target,
                });
            }
        }
        Self::from_graph(alphabet, names, edges, Origin::EdgeShift)
    }

    /// The subgraph induced on `keep`, trimmed.
    pub fn induced(&self, keep: &[usize]) -> Result<SftPresentation> {
        let keep_set: BTreeSet<usize> = keep.iter().copied().collect();
        let order: Vec<usize> = keep_set.iter().copied().collect();
        let mut remap = vec![usize::MAX; self.num_vertices()];
        for (i, &v) in order.iter().enumerate() {
            remap[v] = i;
        }
        let names = order.iter().map(|&v| self.vertices[v].clone()).collect();
        let edges = self
            .edges
            .iter()
            .filter(|e| keep_set.contains(&e.source) && keep_set.contains(&e.target))
            .map(|e| Edge {
                source: remap[e.source],
                symbol: e.symbol,
                target: remap[e.target],
            });
        Self::from_graph(self.alphabet.clone(), names, edges, Origin::EdgeShift)
    }

    /// A vertex path `p_0 .. p_|w|` carrying `word`, if one exists.
    pub fn path_labeled(&self, word: &[Symbol]) -> Option<Vec<usize>> {
        let mut layers = vec![self.all()];
        for &s in word {
            let next = self.step(layers.last().unwrap(), s);
            if next.is_empty() {
                return None;
            }
            layers.push(next);
        }
        let mut path = vec![layers[word.len()].first()?];
        for i in (0..word.len()).rev() {
            let cur = *path.last().unwrap();
            let prev = self.inc[cur]
                .iter()
                .find(|&&(s, p)| s == word[i] && layers[i].contains(p))
                .map(|&(_, p)| p)?;
            path.push(prev);
        }
        path.reverse();
        Some(path)
    }

    /// Shortest edge path between two vertices, preferring smaller labels.
    pub fn shortest_edge_path(&self, from: usize, to: usize) -> Option<Vec<Edge>> {
        let n = self.num_vertices();
        let mut parent: Vec<Option<Edge>> = vec![None; n];
        let mut seen = vec![false; n];
        seen[from] = true;
        let mut queue = VecDeque::from([from]);
        while let Some(u) = queue.pop_front() {
            if u == to {
                break;
            }
            for &(s, v) in &self.out[u] {
                if !seen[v] {
                    seen[v] = true;
                    parent[v] = Some(Edge {
                        source: u,
                        symbol: s,
                        target: v,
                    });
                    queue.push_back(v);
                }
            }
        }
        if !seen[to] {
            return None;
        }
        let mut path = Vec::new();
        let mut cur = to;
        while cur != from {
            let e = parent[cur].expect("bfs parent");
            path.push(e);
            cur = e.source;
        }
        path.reverse();
        Some(path)
    }

    /// The vertex shift of a 0/1 matrix on vertices named `0, 1, ...`;
    /// each edge carries the name of its source.
    pub fn vertex_shift(adj: &[Vec<bool>]) -> Result<Self> {
        let n = adj.len();
        let names: Vec<String> = (0..n).map(|i| i.to_string()).collect();
        let alphabet = Alphabet::new(names.clone())?;
        let edges = (0..n).flat_map(|u| {
            (0..n).filter(move |&v| adj[u][v]).map(move |v| Edge {
                source: u,
                symbol: u as Symbol,
                target: v,
            })
        });
        Self::from_graph(alphabet, names, edges.collect::<Vec<_>>(), Origin::VertexShift)
    }
}
