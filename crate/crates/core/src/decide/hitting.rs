use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::shift::{overlay, Cylinder, SftPresentation, Word};
use crate::vset::VertexSet;

/// Eventual periodicity of a hitting time set: for `n >= threshold`,
/// `n` is a member iff `(n - threshold) % period` is in `residues`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tail {
    pub threshold: usize,
    pub period: usize,
    pub residues: Vec<usize>,
}

impl Tail {
    pub fn contains(&self, n: usize) -> Option<bool> {
        (n >= self.threshold).then(|| self.residues.contains(&((n - self.threshold) % self.period)))
    }
}

/// `N(U, V) ∩ [1, horizon]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HittingSet {
    pub members: Vec<usize>,
    pub horizon: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exact_tail: Option<Tail>,
}

impl HittingSet {
    pub fn contains(&self, n: usize) -> bool {
        self.members.binary_search(&n).is_ok()
    }
}

fn union_reach(x: &SftPresentation, words: &[Word]) -> VertexSet {
    let mut s = x.empty_set();
    for w in words {
        s.union_with(&x.reach(w));
    }
    s
}

fn union_starts(x: &SftPresentation, words: &[Word]) -> VertexSet {
    let mut s = x.empty_set();
    for w in words {
        s.union_with(&x.starts(w));
    }
    s
}

fn common_len(words: &[Word]) -> usize {
    let len = words.first().map_or(0, Vec::len);
    assert!(words.iter().all(|w| w.len() == len), "clopen set words must share one length");
    len
}

/// `mask[n]` for `0 <= n <= horizon` says whether `A ∩ σ^-n B` is nonempty,
/// where `A`, `B` are unions of cylinders over equal-length words.
///
/// For `n >= |a|` the question is reachability in exactly `n - |a|` steps
/// from the end vertices of `A`-paths to the start vertices of `B`-paths;
/// for smaller `n` the two words overlap and the merged word is tested.
pub fn hit_mask(x: &SftPresentation, a: &[Word], b: &[Word], horizon: usize) -> Vec<bool> {
    let la = common_len(a);
    common_len(b);
    let mut mask = vec![false; horizon + 1];
    for (n, slot) in mask.iter_mut().enumerate().take(la.min(horizon + 1)) {
        *slot = a.iter().any(|u| {
            b.iter().any(|v| {
                overlay(u, v, n).is_some_and(|t| {
                    let w: Word = t.into_iter().map(|s| s.expect("overlap has no gaps")).collect();
                    x.is_legal(&w)
                })
            })
        });
    }
    if horizon < la {
        return mask;
    }
    let target = union_starts(x, b);
    let mut cur = union_reach(x, a);
    for slot in mask.iter_mut().skip(la) {
        *slot = cur.intersects(&target);
        cur = x.step_any(&cur);
    }
    mask
}

/// `N([u], [v])` up to `horizon`, by graph search.
pub fn hitting_set(x: &SftPresentation, u: &Cylinder, v: &Cylinder, horizon: usize) -> HittingSet {
    let a = vec![u.word().to_vec()];
    let b = vec![v.word().to_vec()];
    let mask = hit_mask(x, &a, &b, horizon);
    let members: Vec<usize> = (1..=horizon).filter(|&n| mask[n]).collect();

    let exact_tail = (v.len() <= x.num_vertices())
        .then(|| tail(x, &a, &b))
        .filter(|t| (t.threshold.max(1)..=horizon).all(|n| t.contains(n) == Some(mask[n])));
    HittingSet {
        members,
        horizon,
        exact_tail,
    }
}

fn tail(x: &SftPresentation, a: &[Word], b: &[Word]) -> Tail {
    let target = union_starts(x, b);
    let mut seen: HashMap<VertexSet, usize> = HashMap::new();
    let mut seq = Vec::new();
    let mut cur = union_reach(x, a);
    while !seen.contains_key(&cur) {
        seen.insert(cur.clone(), seq.len());
        seq.push(cur.clone());
        cur = x.step_any(&cur);
    }
    let j0 = seen[&cur];
    let period = seq.len() - j0;
    let residues = (0..period)
        .filter(|&r| seq[j0 + r].intersects(&target))
        .collect();
    Tail {
        threshold: common_len(a) + j0,
        period,
        residues,
    }
}

/// Outcome of checking `N(U3,U3) ⊆ N(U1,U1) ∩ N(U2,U2)` for
/// `U3 = U1 ∩ σ^-n U2`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FilterLawVerdict {
    pub holds: bool,
    pub counterexample: Option<usize>,
    /// Number of cylinders making up `U3`.
    pub u3_words: usize,
    pub horizon: usize,
}

pub fn filter_law_check(
    x: &SftPresentation,
    u1: &Cylinder,
    u2: &Cylinder,
    n: usize,
    horizon: usize,
) -> Result<FilterLawVerdict> {
    let u3: Vec<Word> = overlay(u1.word(), u2.word(), n)
        .map(|t| x.matching(&t, None))
        .unwrap_or_default();
    if u3.is_empty() {
        return Err(Error::InvalidArgument(format!(
            "U1 ∩ σ^-{n} U2 is empty for U1=[{}], U2=[{}]",
            x.render(u1.word()),
            x.render(u2.word())
        )));
    }
    let w1 = vec![u1.word().to_vec()];
    let w2 = vec![u2.word().to_vec()];
    let n3 = hit_mask(x, &u3, &u3, horizon);
    let n1 = hit_mask(x, &w1, &w1, horizon);
    let n2 = hit_mask(x, &w2, &w2, horizon);
    let counterexample = (1..=horizon).find(|&m| n3[m] && !(n1[m] && n2[m]));
    Ok(FilterLawVerdict {
        holds: counterexample.is_none(),
        counterexample,
        u3_words: u3.len(),
        horizon,
    })
}
