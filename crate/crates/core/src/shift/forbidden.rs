use super::alphabet::{Alphabet, Symbol, Word};
use super::presentation::{Edge, Origin, SftPresentation};
use crate::error::{Error, Result};

fn has_forbidden_suffix(word: &[Symbol], forbidden: &[Word]) -> bool {
    forbidden.iter().any(|f| word.ends_with(f))
}

/// All words of length `len` over `k` symbols avoiding every forbidden
/// factor, in lexicographic order.
fn clean_words(k: usize, len: usize, forbidden: &[Word]) -> Vec<Word> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        let mut next = Vec::new();
        for w in &out {
            for s in 0..k as Symbol {
                let mut v = w.clone();
                v.push(s);
                if !has_forbidden_suffix(&v, forbidden) {
                    next.push(v);
                }
            }
        }
        out = next;
    }
    out
}

/// Higher-block presentation of the one-sided shift avoiding `forbidden`.
///
/// With `m` the longest forbidden length, vertices are the clean words of
/// length `m-1` and an edge `u -> v` exists for each clean `m`-block `b` with
/// `u = b[..m-1]`, `v = b[1..]`, labeled by the first symbol of `b`. Reading
/// the first symbol of each visited window recovers the point itself, so the
/// one-sided language is exact even when some words are only legal at the
/// start of a point.
pub fn build_from_forbidden(alphabet: Alphabet, forbidden: &[Word]) -> Result<SftPresentation> {
    if forbidden.iter().any(|f| f.is_empty()) {
        return Err(Error::EmptyWord);
    }
    let k = alphabet.len();
    if forbidden.iter().flatten().any(|&s| s as usize >= k) {
        return Err(Error::InvalidArgument("forbidden word outside alphabet".into()));
    }
    let m = forbidden.iter().map(Vec::len).max().unwrap_or(0);
    let origin = Origin::ForbiddenWords { max_len: m };

    if m <= 1 {
        let edges: Vec<Edge> = (0..k as Symbol)
            .filter(|&s| !forbidden.contains(&vec![s]))
            .map(|s| Edge {
                source: 0,
                symbol: s,
                target: 0,
            })
            .collect();
        return SftPresentation::from_graph(alphabet, vec!["ε".into()], edges, origin);
    }

    let windows = clean_words(k, m - 1, forbidden);
    let names: Vec<String> = windows.iter().map(|w| alphabet.render(w)).collect();
    let index = |w: &[Symbol]| windows.binary_search_by(|x| x.as_slice().cmp(w)).ok();
    let mut edges = Vec::new();
    for (u, w) in windows.iter().enumerate() {
        for s in 0..k as Symbol {
            let mut block = w.clone();
            block.push(s);
            if has_forbidden_suffix(&block, forbidden) {
                continue;
            }
            if let Some(v) = index(&block[1..]) {
                edges.push(Edge {
                    source: u,
                    symbol: block[0],
                    target: v,
                });
            }
        }
    }
    SftPresentation::from_graph(alphabet, names, edges, origin)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn build(alpha: &[&str], forb: &[&str]) -> Result<SftPresentation> {
        let a = Alphabet::new(alpha.iter().copied()).unwrap();
        let f: Vec<Word> = forb.iter().map(|w| a.tokenize(w).unwrap()).collect();
        build_from_forbidden(a, &f)
    }

    #[test]
    fn full_two_shift() {
        let x = build(&["0", "1"], &[]).unwrap();
        assert_eq!(x.num_vertices(), 1);
        assert_eq!(x.edges().len(), 2);
        assert!(x.edges().iter().all(|e| e.source == 0 && e.target == 0));
    }

    #[test]
    fn golden_mean_structure() {
        let x = build(&["0", "1"], &["11"]).unwrap();
        assert_eq!(x.vertices(), &["0", "1"]);
        let pairs: Vec<(usize, usize)> = x.edges().iter().map(|e| (e.source, e.target)).collect();
        assert_eq!(pairs, [(0, 0), (0, 1), (1, 0)]);
        assert!(x.is_surjective());
    }

    #[test]
    fn everything_forbidden_is_empty() {
        assert_eq!(build(&["0"], &["0"]).unwrap_err(), Error::EmptyShift);
    }

    #[test]
    fn start_only_words_survive() {
        // 1 may only occur at index 0: points 0^∞ and 10^∞.
        let x = build(&["0", "1"], &["01", "11"]).unwrap();
        assert!(x.is_legal(&[1, 0, 0]));
        assert!(!x.is_legal(&[0, 1]));
        assert!(!x.is_surjective());
    }
}
