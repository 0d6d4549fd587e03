//! Seeded random presentations for tests and experiments.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::decide::{fixed_points, is_transitive, period};
use crate::error::{Error, Result};
use crate::shift::{Alphabet, Edge, Origin, SftPresentation};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CorpusClass {
    /// Every other entry is forced transitive.
    #[default]
    Any,
    Transitive,
    /// Transitive, infinite, with a fixed point.
    ChaoticFixed,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusOptions {
    pub seed: u64,
    pub count: usize,
    pub alphabet_max: usize,
    pub vertex_max: usize,
    pub class: CorpusClass,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShiftStats {
    pub vertices: usize,
    pub edges: usize,
    pub alphabet: usize,
    pub transitive: bool,
    pub period: Option<usize>,
    pub infinite: bool,
    pub fixed_points: usize,
}

impl ShiftStats {
    pub fn of(x: &SftPresentation) -> Self {
        let transitive = is_transitive(x).verdict;
        ShiftStats {
            vertices: x.num_vertices(),
            edges: x.edges().len(),
            alphabet: x.alphabet().len(),
            transitive,
            period: transitive.then(|| period(x).map(|p| p.period).ok()).flatten(),
            infinite: x.is_infinite(),
            fixed_points: fixed_points(x).len(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorpusEntry {
    pub name: String,
    pub sft: SftPresentation,
    pub stats: ShiftStats,
}

/// Drops vertices until every remaining one has both an incoming and an
/// outgoing edge, so the shift map is onto.
fn two_sided_trim(n: usize, edges: &[Edge]) -> (Vec<usize>, Vec<Edge>) {
    let mut alive = vec![true; n];
    loop {
        let mut out = vec![false; n];
        let mut inc = vec![false; n];
        for e in edges.iter().filter(|e| alive[e.source] && alive[e.target]) {
            out[e.source] = true;
            inc[e.target] = true;
        }
        let mut changed = false;
        for v in 0..n {
            if alive[v] && !(out[v] && inc[v]) {
                alive[v] = false;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    let keep: Vec<usize> = (0..n).filter(|&v| alive[v]).collect();
    let mut remap = vec![usize::MAX; n];
    for (i, &v) in keep.iter().enumerate() {
        remap[v] = i;
    }
    let kept = edges
        .iter()
        .filter(|e| alive[e.source] && alive[e.target])
        .map(|e| Edge {
            source: remap[e.source],
            symbol: e.symbol,
            target: remap[e.target],
        })
        .collect();
    (keep, kept)
}

fn random_shift(rng: &mut ChaCha8Rng, alphabet_max: usize, vertex_max: usize) -> Option<SftPresentation> {
    let k = rng.gen_range(1..=alphabet_max);
    let n = rng.gen_range(1..=vertex_max);
    let mut edges = Vec::new();
    for v in 0..n {
        for _ in 0..rng.gen_range(1..=3) {
            edges.push(Edge {
                source: v,
                symbol: rng.gen_range(0..k) as u16,
                target: rng.gen_range(0..n),
            });
        }
    }
    let (keep, edges) = two_sided_trim(n, &edges);
    if keep.is_empty() {
        return None;
    }
    let names: Vec<String> = (0..k).map(|i| ((b'a' + i as u8) as char).to_string()).collect();
    let alphabet = Alphabet::new(names).ok()?;
    let vnames = keep.iter().map(|v| format!("v{v}")).collect();
    SftPresentation::from_graph(alphabet, vnames, edges, Origin::EdgeShift).ok()
}

pub fn gen_corpus(opts: &CorpusOptions) -> Result<Vec<CorpusEntry>> {
    if opts.alphabet_max == 0 || opts.alphabet_max > 26 || opts.vertex_max == 0 {
        return Err(Error::InvalidArgument("need 1..=26 symbols and at least one vertex".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut out = Vec::with_capacity(opts.count);
    let mut attempts = 0usize;
    while out.len() < opts.count {
        attempts += 1;
        if attempts > 1000 * (opts.count + 1) {
            return Err(Error::InvalidArgument("rejection sampling did not converge".into()));
        }
        let Some(x) = random_shift(&mut rng, opts.alphabet_max, opts.vertex_max) else { continue };
        let stats = ShiftStats::of(&x);
        let ok = match opts.class {
            CorpusClass::Any => out.len() % 2 == 1 || stats.transitive,
            CorpusClass::Transitive => stats.transitive,
            CorpusClass::ChaoticFixed => stats.transitive && stats.infinite && stats.fixed_points > 0,
        };
        if ok {
            out.push(CorpusEntry {
                name: format!("shift_{:04}", out.len()),
                sft: x,
                stats,
            });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn opts(seed: u64, count: usize, a: usize, v: usize) -> CorpusOptions {
        CorpusOptions {
            seed,
            count,
            alphabet_max: a,
            vertex_max: v,
            class: CorpusClass::Any,
        }
    }

    #[test]
    fn deterministic() {
        let a = gen_corpus(&opts(1, 10, 3, 4)).unwrap();
        let b = gen_corpus(&opts(1, 10, 3, 4)).unwrap();
        assert_eq!(a.len(), 10);
        assert!(a.iter().zip(&b).all(|(x, y)| x.sft == y.sft));
    }

    #[test]
    fn half_transitive_and_surjective() {
        let c = gen_corpus(&opts(5, 100, 4, 6)).unwrap();
        assert!(c.iter().filter(|e| e.stats.transitive).count() >= 50);
        assert!(c.iter().all(|e| e.sft.is_surjective()));
    }

    #[test]
    fn unary_alphabet_gives_single_point() {
        for e in gen_corpus(&opts(2, 8, 1, 5)).unwrap() {
            assert_eq!(e.sft.language(6).len(), 1);
        }
    }

    #[test]
    fn chaotic_fixed_class() {
        let c = gen_corpus(&CorpusOptions {
            class: CorpusClass::ChaoticFixed,
            ..opts(3, 10, 4, 6)
        })
        .unwrap();
        assert!(c.iter().all(|e| e.stats.transitive && e.stats.infinite && e.stats.fixed_points > 0));
    }
}
